use thiserror::Error;

pub type Result<T> = std::result::Result<T, RaqmError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RaqmError {
    /// Input outside the domain of an exact operation (negative radicand,
    /// cosine magnitude above one, zero denominator).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two surds with different radicals cannot be multiplied inside a
    /// single-radical representation.
    #[error("undecided representation: {0}")]
    UndecidedRepresentation(String),

    #[error("wrong bit string length: expected {expected}, got {actual}")]
    WrongLength { expected: usize, actual: usize },

    #[error("invalid lattice point: {0}")]
    InvalidLatticePoint(String),

    #[error("L = {0} is not a power of two")]
    NotPowerOfTwo(usize),

    /// A parameter fraction does not land on an integer number of bits.
    #[error("lattice-unrealisable parameters: {0}")]
    Unrealisable(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("bit string already reduced to a single digit")]
    AlreadyReduced,

    #[error("empty bit string")]
    Empty,

    #[error("no lattice point within {epsilon} of target cosine {target} at L = {l}")]
    SnapInfeasible { target: f64, l: usize, epsilon: f64 },

    #[error("inconsistent direction cosines: {0}")]
    InconsistentCosines(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl RaqmError {
    /// True for errors caused by parameters that cannot be placed on the
    /// L-lattice (as opposed to malformed input).
    pub fn is_unrealisable(&self) -> bool {
        matches!(
            self,
            RaqmError::Unrealisable(_) | RaqmError::SnapInfeasible { .. }
        )
    }
}
