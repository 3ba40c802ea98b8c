//! Measurement over recorded runs: growth-exponent fitting, bound
//! verification, queue memory profiles, and machine-readable reports.
//!
//! Everything here works on data a run leaves behind (a
//! [`DelayTrace`](crate::trace::DelayTrace), queue samples) rather than on
//! live enumerators, so checks can be replayed from persisted traces.

pub mod bounds;
pub mod fit;
pub mod report;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstrumentError {
    /// The fit window holds fewer usable points than
    /// [`MIN_FIT_POINTS`](fit::MIN_FIT_POINTS).
    #[error("not enough data points in the fit window")]
    InsufficientData,
    /// Zero delays cannot enter a log-log fit; excluding them left too few
    /// points.
    #[error("{zeros} zero delays in the fit window leave too few points")]
    DegenerateTrace { zeros: usize },
    /// No queue samples were recorded, so there is no memory profile.
    #[error("no queue samples recorded")]
    NoSamples,
}

pub use bounds::{
    check_cap_bound, check_delay_bound, memory_profile, BoundKind, BoundReport, MemoryProfile,
};
pub use fit::{fit_exponent, FitResult, MIN_FIT_POINTS};
pub use report::{fnv1a64, instance_digest, report_json, RunReport, SCHEMA_VERSION};
