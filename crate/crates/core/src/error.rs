use alloc::string::String;

use crate::wavepacket::Configuration;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{field}: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("configuration within node threshold (|psi| = {modulus:e})")]
    Node {
        modulus: f64,
        configuration: Configuration,
    },

    #[error("non-finite state at s = {s}")]
    NumericalBlowup { s: f64 },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("packet integral over the box vanishes")]
    DegeneratePacket,

    #[error("conditioning normalization must be positive, got {0}")]
    DegenerateCondition(f64),

    #[error("rejection sampling acceptance {rate:e} after {proposals} proposals")]
    PathologicalEnvelope { rate: f64, proposals: u64 },

    #[error("only {survivors} interior survivors, need at least {required}")]
    Inconclusive { survivors: usize, required: usize },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
