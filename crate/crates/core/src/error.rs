//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliffError {
    #[error("algebra dimension {0} outside supported range 1..=8")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("axis {axis} out of range for dimension {n} (axes are 1-based)")]
    AxisOutOfRange { axis: usize, n: usize },

    #[error("expected a unit vector, got |v| = {0}")]
    NonUnitVector(f64),

    #[error("expected a unit spinor, got |s s̄ - 1| = {0}")]
    NonUnitSpinor(f64),

    #[error("spinor factor list must have even length >= 2, got {0}")]
    BadFactorCount(usize),

    #[error("multivector has odd-grade content ({0:.3e}); spinors live in the even subalgebra")]
    NotEvenGrade(f64),

    #[error("spin quadrature is only implemented for n in {{2, 3}}, got n = {0}")]
    UnsupportedSpinDimension(usize),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("axis {0} has even length {1}; centered transforms need odd shapes")]
    EvenAxis(usize, usize),

    #[error("grid is not origin-centered on axis {0}")]
    NotCentered(usize),

    #[error("scale parameter must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("translation {0:?} is not a grid point")]
    OffGridTranslation(Vec<f64>),

    #[error("invalid scale grid: {0}")]
    BadScaleGrid(String),

    #[error("scale grid too narrow: {0}")]
    ScaleGridTooNarrow(String),

    #[error("wavelet '{name}' is not admissible: {reason}")]
    NotAdmissible { name: String, reason: String },

    #[error("invalid file at byte offset {offset}: {message}")]
    FileFormat { offset: u64, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliffError>;
