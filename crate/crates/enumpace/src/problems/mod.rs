//! Concrete problems: vertex cover, Horn satisfiability, and synthetic
//! cost profiles. Each problem provides a [`ProblemDescriptor`] for
//! verification and brute-force reference runs, plus a dedicated
//! [`EnumProcess`] whose tick accounting realises the intended budgets.
//!
//! [`ProblemDescriptor`]: crate::problem::ProblemDescriptor
//! [`EnumProcess`]: crate::process::EnumProcess

pub mod horn;
pub mod synthetic;
pub mod vertex_cover;

use thiserror::Error;

/// Failure to parse an instance file or encoding.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// Syntactic or semantic problem at a source position. `line` and `col`
    /// are 1-based; values of 0 mean the error is not tied to a position
    /// (for example a constraint violated by programmatic construction).
    #[error("line {line}, column {col}: {msg}")]
    Malformed { line: usize, col: usize, msg: String },

    /// A clause (0-based `index`) has more than one positive literal.
    #[error("clause {index} has more than one positive literal")]
    NotHorn { index: usize },
}

impl ParseError {
    pub(crate) fn at(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError::Malformed {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub(crate) fn unpositioned(msg: impl Into<String>) -> Self {
        ParseError::Malformed {
            line: 0,
            col: 0,
            msg: msg.into(),
        }
    }
}
