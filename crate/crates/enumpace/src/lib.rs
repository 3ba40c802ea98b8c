//! Budget-stepped enumeration with measurable delay guarantees.
//!
//! The crate is organized around a single execution contract: an
//! [`EnumProcess`](process::EnumProcess) advances in caller-controlled tick
//! budgets and reports emissions as they happen. On top of that contract sit
//!
//! * a harness ([`process::SteppedEnumerator`]) that enforces cost
//!   accounting and solution uniqueness,
//! * delay recording and analysis ([`trace`], [`instrument`]),
//! * a pacing transform ([`regularize`]) that converts a total-cost budget
//!   guarantee into a per-delay one by buffering solutions in a queue,
//! * reductions between enumerators and next-solution oracles
//!   ([`anothersol`]),
//! * and a small problem suite ([`problems`]) with brute-force references.

pub mod anothersol;
pub mod error;
pub mod instrument;
pub mod problem;
pub mod problems;
pub mod process;
pub mod regularize;
pub mod schedule;
pub mod trace;

#[cfg(test)]
mod test_util;

pub use error::EnumError;
pub use problem::{Instance, ProblemDescriptor, Solution};
pub use process::{Burst, EnumProcess, EnumeratorEvent, SteppedEnumerator};
pub use schedule::BudgetSchedule;
pub use trace::DelayTrace;

/// Default global tick cap for runs that are not given an explicit one.
pub const DEFAULT_COST_CAP: u64 = 100_000_000;
