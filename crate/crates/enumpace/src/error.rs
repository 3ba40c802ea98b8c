use crate::problem::Solution;
use thiserror::Error;

/// Errors surfaced by enumerator execution and the combinators built on it.
#[derive(Debug, Error)]
pub enum EnumError {
    /// `advance` was called with a zero budget.
    #[error("budget must be at least 1 tick")]
    InvalidBudget,

    /// The wrapped process emitted a solution it had already emitted.
    #[error("duplicate emission of {0}")]
    DuplicateEmission(Solution),

    /// The wrapped process broke the tick-accounting contract.
    #[error("cost accounting violation: {0}")]
    CostAccountingViolation(&'static str),

    /// The caller-supplied global cost cap ran out before the run finished.
    #[error("cost cap of {cap} ticks exhausted before the run finished")]
    BudgetExhausted { cap: u64 },

    /// A declared schedule bound turned out to be false: the step counter
    /// reached the threshold for emission `index` with no solution to serve.
    #[error("declared bound violated at emission index {index}")]
    BoundViolation { index: u64 },

    /// The oracle returned a value its contract forbids.
    #[error("oracle contract violation: {0}")]
    OracleContractViolation(String),

    /// A schedule evaluated to a unusable budget (for example t(k)·p(n) = 0).
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    /// A prior error left this enumerator in an undefined state.
    #[error("enumerator poisoned by a prior error")]
    Poisoned,
}
