use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),

    #[error("wavenumber k = {k} coincides with the step threshold kappa0; characteristic quantities diverge there")]
    DegenerateEnergy { k: f64 },

    #[error("operation requires the {expected} regime")]
    WrongRegime { expected: &'static str },

    #[error("invalid step potential: {0}")]
    InvalidStep(String),

    #[error("invalid physical configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no zero of the reflection standing wave found in ({start}, {end}]")]
    NoZeroFound { start: f64, end: f64 },

    #[error("adaptive quadrature did not converge: error {error_estimate:e} > tolerance {tolerance:e} after {subintervals} subintervals")]
    QuadratureNotConverged {
        error_estimate: f64,
        tolerance: f64,
        subintervals: usize,
    },

    #[error("spectral window [{k_low}, {k_high}] leaves the propagating branch (lower bound must exceed {bound})")]
    SpectralGuardViolated { k_low: f64, k_high: f64, bound: f64 },

    #[error("channel norm {norm:e} is too small for moments to be defined")]
    EmptyChannel { norm: f64 },

    #[error("spatial grid does not contain the packet: edge density ratio {edge_ratio:e}")]
    GridTooSmall { edge_ratio: f64 },

    #[error("trajectory fit residual {rms_residual:e} exceeds {limit:e}; times are not in one asymptotic stage")]
    BadFitWindow { rms_residual: f64, limit: f64 },
}
