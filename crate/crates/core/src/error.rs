use thiserror::Error;

/// Errors produced by the state, measurement and protocol APIs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{requested} qubits exceeds the supported maximum of {max}")]
    Capacity { requested: usize, max: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid domain value: {0}")]
    Domain(String),

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("unknown label `{label}`; valid labels: {}", valid.join(", "))]
    UnknownLabel { label: String, valid: Vec<String> },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid measurement setting `{0}`: expected only 'z' and 'x'")]
    InvalidSetting(String),

    #[error("invalid noise model `{0}`")]
    InvalidNoiseModel(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("discrimination impossible for the {basis} basis: supports overlap")]
    NoDiscriminator { basis: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
