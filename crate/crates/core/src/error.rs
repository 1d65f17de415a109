use thiserror::Error;

/// Errors raised by parameter validation, the pricers and the benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("correlation {name} = {value} outside [-1, 1]")]
    CorrelationOutOfRange { name: &'static str, value: f64 },

    #[error("correlation matrix is not positive semidefinite (pivot {pivot} at row {row})")]
    CorrelationNotPsd { row: usize, pivot: f64 },

    #[error("invalid zero curve: {0}")]
    InvalidCurve(String),

    #[error("expansion requires v0 = theta_v, got v0 = {v0}, theta_v = {theta_v}")]
    VarianceMismatch { v0: f64, theta_v: f64 },

    #[error("expansion requires zero vol-rate correlations, got rho_vd = {rho_vd}, rho_vf = {rho_vf}")]
    UnsupportedCorrelation { rho_vd: f64, rho_vf: f64 },

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("total variance must be positive, got {0}")]
    DegenerateVariance(f64),

    #[error("unsupported Black-Scholes partial order ({0}, {1})")]
    UnsupportedPartial(u32, u32),

    #[error("price {price} outside no-arbitrage band ({lower}, {upper})")]
    ArbitrageBounds { price: f64, lower: f64, upper: f64 },

    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("quadrature exceeded {max_intervals} subintervals (estimate {estimate}, error {error})")]
    MaxSubdivisions {
        max_intervals: usize,
        estimate: f64,
        error: f64,
    },

    #[error("invalid Monte-Carlo configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
