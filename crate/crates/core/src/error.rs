use crate::state::DensityMatrix;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("mode (ell={ell}, p={p}) is not resolved on this grid: {reason}")]
    UnresolvedMode { ell: i32, p: u32, reason: String },

    #[error("captured power {captured:.4} is below the floor {floor:.4}")]
    CaptureTooLow { captured: f64, floor: f64 },

    #[error("input sub-block has trace {0:e}")]
    ZeroBlock(f64),

    #[error("cannot pick {requested} measurements out of {available}")]
    InvalidCount { requested: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("no eigenvalue exceeds the threshold {0:e}")]
    AllBelowThreshold(f64),

    #[error("reconstruction did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        iterate: Box<DensityMatrix>,
    },

    #[error("state is not close to rank one: second eigenvalue {second:.4} >= {threshold:.4}")]
    RankAmbiguous { second: f64, threshold: f64 },

    #[error("largest diagonal entry {0:e} is too small to divide by")]
    ZeroPivot(f64),

    #[error("Kraus column {column} has norm {norm:e}")]
    DegenerateColumn { column: usize, norm: f64 },

    #[error("corrected state has trace {0:e}")]
    ZeroTrace(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in the per-realization status column.
    pub fn status_tag(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "invalid_grid",
            Error::GridMismatch => "grid_mismatch",
            Error::UnresolvedMode { .. } => "unresolved_mode",
            Error::CaptureTooLow { .. } => "capture_too_low",
            Error::ZeroBlock(_) => "zero_block",
            Error::InvalidCount { .. } => "invalid_count",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::AllBelowThreshold(_) => "all_below_threshold",
            Error::NotConverged { .. } => "not_converged",
            Error::RankAmbiguous { .. } => "rank_ambiguous",
            Error::ZeroPivot(_) => "zero_pivot",
            Error::DegenerateColumn { .. } => "degenerate_column",
            Error::ZeroTrace(_) => "zero_trace",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Config(_) => "config",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
