use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mode structure: {0}")]
    InvalidStructure(String),

    #[error("{what} {value} out of range 1..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("invalid mode list {modes:?}: {reason}")]
    InvalidModes { modes: Vec<usize>, reason: String },

    #[error("unsupported system {0}: needs at least two effective modes (n / n_max >= 2)")]
    UnsupportedSystem(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid tuple {levels:?}: {reason}")]
    InvalidTuple { levels: Vec<usize>, reason: String },

    #[error("incompatible tuples: mode {mode} line repeats projected level {projected} (tuples {first} and {second})")]
    Incompatible {
        mode: usize,
        projected: usize,
        first: usize,
        second: usize,
    },

    #[error("angle {0} outside [0, pi/2]")]
    AngleOutOfRange(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
