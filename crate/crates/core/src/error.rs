use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty window: lo {lo:?} is not componentwise <= hi {hi:?}")]
    EmptyWindow { lo: Vec<i64>, hi: Vec<i64> },

    #[error("needs pattern: membership of {0:?} is unresolvable outside the window closure")]
    NeedsPattern(Vec<i64>),

    #[error("function is not total on the window closure: no value at {0:?}")]
    PartialFunction(Vec<i64>),

    #[error("window too large for brute force: {cells} cells (limit {limit})")]
    WindowTooLarge { cells: usize, limit: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{family}: parameter constraint `{constraint}` violated")]
    ConstraintViolated { family: String, constraint: String },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("pattern is not certified: refuted at radius {radius}")]
    NotCertified { radius: i64 },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
