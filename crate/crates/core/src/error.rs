use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("vertex ({x}, {y}) lies outside the {width}x{height} box")]
    ContainmentViolation {
        x: i32,
        y: i32,
        width: u32,
        height: u32,
    },

    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: String, cap: u64 },

    #[error("incomplete input: {0}")]
    IncompleteInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision of {given} digits is too low; at least {required} digits are required")]
    PrecisionTooLow { given: u32, required: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("endpoint already on the target boundary")]
    NoMove,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("non-contiguous indices: expected {expected}, found {found}")]
    NonContiguous { expected: u64, found: u64 },

    #[error("ensemble too small: {kept} usable approximants, {required} required ({detail})")]
    EnsembleTooSmall {
        kept: usize,
        required: usize,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
