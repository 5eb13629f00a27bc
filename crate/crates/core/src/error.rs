use thiserror::Error;

/// Everything that can go wrong inside the laboratory.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("comparison undecided at {precision} bits; coefficient vectors differ after rewriting (undeclared rational dependency?)")]
    Undecided { precision: u32 },

    #[error("basis value for index {index} must lie strictly between 0 and 1, got {value}")]
    BasisOutOfRange { index: u32, value: String },

    #[error("index {index} carries two different basis values")]
    BasisConflict { index: u32 },

    #[error("relation for index {index}: {reason}")]
    InvalidRelation { index: u32, reason: String },

    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),

    #[error("enumeration of {size} elements exceeds guard {guard}")]
    EnumerationTooLarge { size: String, guard: u64 },

    #[error("strings are not in the same residue class mod 3 ({left} vs {right})")]
    ResidueMismatch { left: u8, right: u8 },

    #[error("orbit walk reached the end of its residue class at depth {depth}; deepen the truncation")]
    Boundary { depth: usize },

    #[error("distinct strings with equal cocycle in the class at depth {depth}; first-return map undefined")]
    TiedCocycle { depth: usize },

    #[error("flow time outside [0, ceiling) for the base point")]
    TimeOutOfRange,

    #[error("invalid digits: {0}")]
    InvalidDigits(String),

    #[error("no basis functions supplied")]
    InfeasibleModel,

    #[error("required depth {required} exceeds the configured maximum {max}")]
    DepthExceeded { required: usize, max: usize },

    #[error("prefix too short to determine the odometer step")]
    PrefixTooShort,

    #[error("target is not a combination of depth-{depth} cylinder indicators")]
    NotDecomposable { depth: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
