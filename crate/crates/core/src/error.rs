use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("invalid k = {k}: need 2 <= k <= n - 1 with n = {n}")]
    InvalidK { k: usize, n: usize },

    #[error(
        "order statistics {k} and {next} (largest first) are tied at the threshold; \
         choose a different k",
        next = k + 1
    )]
    ThresholdTie { k: usize },

    #[error("every observation in the tail is censored")]
    AllCensored,

    #[error("posterior mode is undefined for shape {shape} (needs shape > 1)")]
    MapUndefined { shape: f64 },

    #[error("scores all have the same sign; no interior Lagrange multiplier exists")]
    NoInteriorSolution,

    #[error("tiltable hull is degenerate (all tail scores coincide)")]
    DegenerateHull,

    #[error("estimator undefined: {0}")]
    EstimatorUndefined(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("uniform variate {0} is outside (0, 1)")]
    InvalidUniform(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short snake-case tag, stable across releases, for machine-readable output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSample(_) => "invalid_sample",
            Error::InvalidK { .. } => "invalid_k",
            Error::ThresholdTie { .. } => "threshold_tie",
            Error::AllCensored => "all_censored",
            Error::MapUndefined { .. } => "map_undefined",
            Error::NoInteriorSolution => "no_interior_solution",
            Error::DegenerateHull => "degenerate_hull",
            Error::EstimatorUndefined(_) => "estimator_undefined",
            Error::NumericalFailure(_) => "numerical_failure",
            Error::InvalidUniform(_) => "invalid_uniform",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}
