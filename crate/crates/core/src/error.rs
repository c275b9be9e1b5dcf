use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0} (expected 2, 3 or 6)")]
    UnsupportedDimension(usize),

    #[error("matrix is not hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("vectors are not orthogonal (overlap {0:e})")]
    NotOrthogonal(f64),

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("operator {which} is not defined in dimension {dim}")]
    InvalidOperator { dim: usize, which: String },

    #[error("parameter {name} = {value} is outside its allowed range {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("state is not flat with respect to the reference basis (deviation {0:e})")]
    NotFlat(f64),

    #[error("state is not a product state (second Schmidt coefficient {0:e})")]
    NotProduct(f64),

    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("grid resolution {found} is below the minimum {min}")]
    ResolutionTooLow { found: usize, min: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
