use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeaError {
    #[error("invalid number: {0:?}")]
    InvalidNumber(String),

    #[error("block {block} is empty")]
    EmptyBlock { block: usize },

    #[error("element {element} is outside the universe of {n} elements")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("occurrence weight {weight} of element {element} must be positive")]
    NonPositiveWeight { element: usize, weight: String },

    #[error("recurrence base must be positive, got {0}")]
    NonPositiveRecurrenceBase(String),

    #[error("element subset is empty")]
    EmptySubset,

    #[error("block {block} has non-integral size {size}")]
    NonIntegralSize { block: usize, size: String },

    #[error("cannot cluster an empty universe")]
    EmptyUniverse,

    #[error("cut size {k} is outside 1..={n}")]
    CutOutOfRange { k: usize, n: usize },

    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },

    #[error("invalid categorization parameters: {0}")]
    InvalidParams(String),

    #[error("{}line {line}: {message}", source_prefix(.path))]
    Parse {
        path: Option<String>,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Csv(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn source_prefix(path: &Option<String>) -> String {
    path.as_ref().map(|p| format!("{p}: ")).unwrap_or_default()
}

impl GeaError {
    /// True for violations of the library's own invariants, as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, GeaError::Internal(_))
    }
}

pub type Result<T, E = GeaError> = std::result::Result<T, E>;
