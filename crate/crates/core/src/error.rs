use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("model validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("action {position} of the sequence is infeasible: {reason}")]
    InfeasibleAt { position: usize, reason: String },

    #[error("no feasible refactoring action exists for this model")]
    Exhausted,

    #[error("unknown element '{0}'")]
    UnknownElement(String),

    #[error("degenerate queueing model: {0}")]
    Degenerate(String),

    #[error("performance indices do not align: {0}")]
    MismatchedIndices(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("N={iterations} and L={length} must both be divisible by k+1={segments}")]
    Divisibility {
        iterations: usize,
        length: usize,
        segments: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("interaction budget exhausted at depth {depth} (k = {max})")]
    DepthExceeded { depth: usize, max: usize },

    #[error("unknown cluster {0}")]
    UnknownCluster(usize),

    #[error("unknown interaction point {0}")]
    UnknownPoint(usize),

    #[error("interaction point {0} has not finished its segment")]
    NotReady(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
