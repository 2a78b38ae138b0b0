use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("requested {requested} edges but only {available} are available")]
    TooManyEdges { requested: usize, available: usize },

    #[error("query budget of {budget} exhausted")]
    BudgetExhausted { budget: usize },

    #[error("edge ({0}, {1}) was already queried")]
    RepeatedQuery(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("basis is not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("graph with {n} vertices is too large for exhaustive checking (limit {limit})")]
    TooLargeForExhaustive { n: usize, limit: usize },

    #[error("bound is vacuous: {0}")]
    BoundVacuous(String),

    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("planted graph specification unsatisfiable after {attempts} attempts")]
    Unsatisfiable { attempts: usize },

    #[error("step {step} out of range (trajectory has {len} steps)")]
    StepOutOfRange { step: usize, len: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },

    #[error("non-numeric value {value:?} at line {line}, column {column}")]
    NonNumeric {
        line: usize,
        column: usize,
        value: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
