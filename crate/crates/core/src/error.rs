use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("component index {index} out of range for a link with {len} components")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("component {0} is not a 2-handle")]
    NotTwoHandle(usize),

    #[error("component {0} is not a dotted 1-handle")]
    NotDotted(usize),

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("cancellation precondition violated: dotted {dotted} is still linked {value} times with component {residual}")]
    ResidualLinking {
        dotted: usize,
        residual: usize,
        value: i64,
    },

    #[error("chain budget violated: need a -2-chain of length {needed}, have {available}")]
    Budget { needed: usize, available: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{0} and {1} are not coprime")]
    NotCoprime(i64, i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed document: {0}")]
    Schema(String),

    #[error("internal assertion failed: {0}")]
    Assertion(String),

    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn assertion(msg: impl Into<String>) -> Self {
        Error::Assertion(msg.into())
    }

    /// Input errors are the caller's fault; assertions are ours.
    pub fn is_internal(&self) -> bool {
        match self {
            Error::Assertion(_) => true,
            Error::AtStep { source, .. } => source.is_internal(),
            _ => false,
        }
    }

    pub fn at_step(self, step: usize) -> Self {
        Error::AtStep { step, source: Box::new(self) }
    }
}

pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("addition"))
}

pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
}
