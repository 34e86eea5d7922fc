use thiserror::Error;

/// Errors raised while validating model instances or running numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{field}: value {value} is not finite")]
    NonFinite { field: String, value: f64 },

    #[error("{field}: geometric ratio {ratio} must lie strictly between 0 and 1")]
    InvalidRatio { field: String, ratio: f64 },

    #[error("{field}: geometric tail needs a nonzero limit")]
    ZeroGeometricLimit { field: String },

    #[error("{field}: expected a constant tail")]
    ConstTailRequired { field: String },

    #[error("{field}: matrix must be square, got {rows}x{cols}")]
    NotSquare {
        field: String,
        rows: usize,
        cols: usize,
    },

    #[error("{field}: row {row} has {len} entries, expected {expected}")]
    RaggedRow {
        field: String,
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("{field}: dimension {dim} exceeds the supported maximum {max}")]
    TooLarge {
        field: String,
        dim: usize,
        max: usize,
    },

    #[error("finite section of size {requested} is smaller than the explicit part ({needed})")]
    SectionTooSmall { requested: usize, needed: usize },

    #[error("operands have different model shapes ({left} vs {right})")]
    ShapeMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("approximant must be compact with a zero constant tail")]
    NonCompactApproximant,

    #[error("{field}: entry {value} is negative; a positive diagonal operator is required")]
    NegativeEntry { field: String, value: f64 },

    #[error("operator is not an isometric weighted shift: {reason}")]
    NotIsometry { reason: String },

    #[error("point has norm {norm} > 1, outside the unit ball")]
    OutsideBall { norm: f64 },

    #[error("point is not an extreme point of the unit ball")]
    NotExtreme,

    #[error("point must have norm 1, got {norm}")]
    NotUnit { norm: f64 },

    #[error("scalar {alpha} must satisfy |alpha| > 1")]
    AlphaTooSmall { alpha: f64 },

    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("Jacobi SVD did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

impl Error {
    /// Name of the offending input field, when there is one.
    pub fn field(&self) -> Option<&str> {
        match self {
            Error::NonFinite { field, .. }
            | Error::InvalidRatio { field, .. }
            | Error::ZeroGeometricLimit { field }
            | Error::ConstTailRequired { field }
            | Error::NotSquare { field, .. }
            | Error::RaggedRow { field, .. }
            | Error::TooLarge { field, .. }
            | Error::NegativeEntry { field, .. }
            | Error::Invalid { field, .. } => Some(field),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_finite(field: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite {
            field: field.to_string(),
            value,
        })
    }
}
