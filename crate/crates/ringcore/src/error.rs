use thiserror::Error;

/// Errors produced by backends, solvers and pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point handle {handle} (backend holds {len} points)")]
    InvalidHandle { handle: usize, len: usize },

    #[error("unreachable: no path between vertices {0} and {1}")]
    Unreachable(usize, usize),

    #[error("center list is empty")]
    EmptyCenters,

    #[error("total weight must be positive")]
    ZeroWeight,

    #[error("negative weight {weight} at index {index}")]
    NegativeWeight { index: usize, weight: f64 },

    #[error("mass mismatch: constraint total {constraint} vs dataset weight {weight}")]
    MassMismatch { constraint: f64, weight: f64 },

    #[error("not a ring dataset: point {index} at distance {dist} outside ({lo}, {hi}]")]
    NotARing {
        index: usize,
        dist: f64,
        lo: f64,
        hi: f64,
    },

    #[error("group labels missing: fair construction needs labelled points")]
    MissingLabels,

    #[error("tuple length mismatch: expected {expected}, got {got}")]
    TupleLength { expected: usize, got: usize },

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("operation requires a {0} backend")]
    BackendMismatch(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
