use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index:?} out of range for dims {dims:?}")]
    IndexOutOfRange { index: Vec<usize>, dims: Vec<usize> },
    #[error("index {0:?} assigned more than once")]
    DuplicateIndex(Vec<usize>),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid mode set: {0}")]
    InvalidModeSet(String),
    #[error("tensor order {0} is not even")]
    NotEvenOrder(usize),
    #[error("subtensor size {k} out of range 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("principal minor requested for an empty index set")]
    EmptyIndexSet,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("problem size {size} exceeds enumeration cap {cap} (set TLCP_ENUM_CAP to raise it)")]
    DimensionCapExceeded { size: usize, cap: usize },
    #[error("polyhedron has a nontrivial lineality space")]
    NotPointed,
    #[error("tensor is not block symmetric")]
    NotBlockSymmetric,
    #[error("tensor is not column sufficient")]
    NotColumnSufficient,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("KKT certificate rejected: {0}")]
    KktInvalid(String),
    #[error("KKT proof chain violated: {0}")]
    ChainViolated(String),
    #[error("Q must be strictly positive")]
    QNotStrictlyPositive,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }

    /// True for errors caused by malformed input rather than by the mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Schema(_)
                | Error::Io(_)
                | Error::IndexOutOfRange { .. }
                | Error::DuplicateIndex(_)
                | Error::ShapeMismatch(_)
        )
    }
}
