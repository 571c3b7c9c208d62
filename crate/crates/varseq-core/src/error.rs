use thiserror::Error;

/// Errors produced by the symbolic engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chart: {0}")]
    InvalidContext(String),

    #[error("variable not in context: {0}")]
    UnknownVariable(String),

    #[error("chart mismatch between operands")]
    ContextMismatch,

    #[error("cannot lower hosting order from {from} to {to}")]
    OrderLowering { from: usize, to: usize },

    #[error("jet order {requested} exceeds cap {cap}")]
    OrderCap { requested: usize, cap: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("division is only admitted by nonzero constants")]
    NonConstantDivisor,

    #[error("interior product needs a form of positive degree")]
    DegreeZeroContraction,

    #[error("unsupported contact depth {0} for the interior Euler operator")]
    UnsupportedContactDepth(usize),

    #[error("source form is not locally variational")]
    NotVariational,

    #[error("vector field is not a generalized symmetry")]
    NotASymmetry,

    #[error("horizontal form is not a total divergence")]
    NotADivergence,

    #[error("on-shell reduction inconclusive: derivative cap {0} exceeded")]
    Inconclusive(usize),

    #[error("operation cancelled")]
    Cancelled,

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
