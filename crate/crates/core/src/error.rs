use thiserror::Error;

use crate::relmodel::ModelViolation;
use crate::syntax::{FragmentTag, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("formula is not in fragment {0}")]
    Fragment(FragmentTag),

    #[error("reserved atom `{0}` is not allowed here")]
    ReservedAtom(String),

    #[error("relations have different world counts ({0} vs {1})")]
    DimensionMismatch(usize, usize),

    #[error("world {world} out of range for a model with {worlds} worlds")]
    WorldOutOfRange { world: usize, worlds: usize },

    #[error("model fails the {kind} conditions: {}", summarize(.violations))]
    InvalidModel {
        kind: String,
        violations: Vec<ModelViolation>,
    },

    #[error("model has no interpretation for program `{0}`")]
    UnknownProgram(char),

    #[error("malformed model document: {0}")]
    ModelFormat(String),

    #[error("logic {logic} cannot {what}")]
    Unsupported { logic: String, what: String },

    #[error("solver gave up: {0}")]
    Budget(String),

    /// An invalid verdict whose countermodel does not falsify the query.
    /// This is an internal bug, never a user error.
    #[error("countermodel certification failed: {0}")]
    Certification(String),
}

fn summarize(vs: &[ModelViolation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
