use thiserror::Error;

use crate::scalar::Field;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    DescriptorMismatch(Field, Field),

    #[error("division by zero")]
    DivisionByZero,

    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("cannot parse {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("affine map slope must be nonzero")]
    ZeroSlope,

    #[error("{what} exceeds cap: {size} > {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("line family is empty (need eps*N > 1)")]
    EmptyFamily,

    #[error("bad indices: {0}")]
    BadIndices(String),

    #[error("exponent box is empty: s < 4k")]
    BoxEmpty,

    #[error("no feasible intercept in [0, {b_max}] for slope {slope}")]
    Exhausted { slope: String, b_max: String },

    #[error("{0} is not a Q-power")]
    NotQPower(String),

    #[error("alpha = {alpha} is below 2/|Y| = {min}")]
    AlphaTooSmall { alpha: String, min: String },

    #[error("map {0} is not in the symmetry set")]
    NotSymmetrySubset(String),

    #[error("relation is empty")]
    EmptyRelation,

    #[error("pair index ({0}, {1}) out of range")]
    IndexOutOfRange(usize, usize),

    #[error("stage {stage} has {size} elements, cap is {cap}")]
    StageExplosion { stage: usize, size: usize, cap: usize },

    #[error("no commutator witness: A is abelian")]
    NoWitness,

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(text: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            text: text.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Errors that signal a broken theorem-backed invariant rather than bad input.
    pub fn is_assertion_failure(&self) -> bool {
        matches!(self, Error::InvariantViolated(_))
    }
}

/// Returns `InvariantViolated` unless `cond` holds.
pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvariantViolated(msg()))
    }
}
