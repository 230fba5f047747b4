use thiserror::Error;

use crate::situation::ValidationReport;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("unknown argument {0}")]
    UnknownArgument(String),
    #[error("unknown proposition {0}")]
    UnknownProposition(String),
    #[error("unknown perspective {0}")]
    UnknownPerspective(String),
    #[error("invalid situation: {0}")]
    InvalidSituation(ValidationReport),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("operation requires a perspective encoding")]
    NeedsPerspectives,
    #[error("situation is not clear-cut; undecided propositions: {}", .0.join(", "))]
    NotClearCut(Vec<String>),
    #[error("{0}")]
    Parameter(String),
    #[error("trump relation has a cycle")]
    Cyclic,
    #[error("repair did not converge after adding {added} synthetic arguments")]
    NonConvergence { added: usize },
    #[error("{0}")]
    Format(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
