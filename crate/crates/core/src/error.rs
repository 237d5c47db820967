use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("unknown edge id {0}")]
    UnknownEdge(usize),

    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),

    #[error("invalid edge partition: {0}")]
    InvalidPartition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A desk-scale limit was hit. Nothing is truncated silently.
    #[error("guard exceeded: {guard} (limit {limit}, got {actual})")]
    Guard {
        guard: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("unknown name `{name}` (known: {known})")]
    UnknownName { name: String, known: String },

    #[error("conditioning event has probability zero")]
    ZeroProbability,

    #[error("invalid number `{0}`")]
    InvalidNumber(String),

    #[error("tolerance must be positive")]
    NonPositiveTolerance,
}

impl Error {
    pub(crate) fn guard(guard: &'static str, limit: u64, actual: u64) -> Self {
        Error::Guard {
            guard,
            limit,
            actual,
        }
    }
}
