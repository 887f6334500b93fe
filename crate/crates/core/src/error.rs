use thiserror::Error;

/// Errors produced by the index, correlation, linear algebra and estimator layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid nesting {omega:?}: expected a permutation of 0..{d}")]
    InvalidNesting { omega: Vec<usize>, d: usize },

    #[error("invalid dimension spec: {0}")]
    InvalidSpec(String),

    #[error("index {index:?} out of range for extents {extents:?}")]
    IndexOutOfRange {
        index: Vec<usize>,
        extents: Vec<usize>,
    },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected} dimensions, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("insufficient data along dimension {dim}: order {order} exceeds {samples} samples")]
    InsufficientData {
        dim: usize,
        order: usize,
        samples: usize,
    },

    #[error("matrix is not positive definite at pivot {pivot}{}", context_suffix(.context))]
    NotPositiveDefinite { pivot: usize, context: String },

    #[error("invalid spectral composition: {0}")]
    InvalidComposition(String),

    #[error("correlation is not Hermitian at lag {lag:?}")]
    NotHermitian { lag: Vec<isize> },

    #[error("malformed correlation file at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("walking cross-check failed: {0}")]
    CrossCheck(String),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

impl Error {
    pub(crate) fn not_pd(pivot: usize) -> Self {
        Error::NotPositiveDefinite {
            pivot,
            context: String::new(),
        }
    }

    /// Attaches a location description to a `NotPositiveDefinite` error; other
    /// variants pass through unchanged.
    pub fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::NotPositiveDefinite { pivot, context } => {
                let ctx = ctx.into();
                let context = if context.is_empty() {
                    ctx
                } else {
                    format!("{ctx}; {context}")
                };
                Error::NotPositiveDefinite { pivot, context }
            }
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
