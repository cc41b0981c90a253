use thiserror::Error;

use crate::exact::Scalar;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("singular matrix in {op} (determinant {det})")]
    Singular { op: &'static str, det: Scalar },

    #[error("division by a non-invertible jet (value part is zero)")]
    NonInvertibleJet,

    #[error("invalid index for {kind}: {detail}")]
    InvalidIndex { kind: &'static str, detail: String },

    #[error("size n = {0} is not supported here")]
    UnsupportedSize(usize),

    #[error("unknown vertex or function name `{0}`")]
    UnknownName(String),

    #[error("function `{label}` vanishes at sample point {point}")]
    Vanishing { label: String, point: usize },

    #[error("sampling failed after {attempts} attempts: {reason}")]
    ResampleExhausted { attempts: usize, reason: String },

    #[error("coefficient string at `{vertex}` is not polynomial: {detail}")]
    NonPolynomialString { vertex: String, detail: String },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("vertex `{0}` is not mutable")]
    NotMutable(String),

    #[error("mutation depth limit {0} exceeded")]
    DepthExceeded(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
