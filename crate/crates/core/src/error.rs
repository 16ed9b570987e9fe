use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("steady-state residual {residual:.3e} exceeds tolerance")]
    SteadyStateResidual { residual: f64 },

    #[error("unstable drift in {block} block (largest eigenvalue real part {max_real:.3e})")]
    UnstableSystem { block: &'static str, max_real: f64 },

    #[error("resolvent singular at omega = {omega:.6e} (condition number {condition:.3e})")]
    SingularAtFrequency { omega: f64, condition: f64 },

    #[error("spectral matrix at omega = {omega:.6e} is not hermitian (relative residual {residual:.3e})")]
    NonHermitianSpectrum { omega: f64, residual: f64 },

    #[error("matrix is not positive definite: {0}")]
    NonPositiveDefinite(String),

    #[error("moment hierarchy singular at total order {order}")]
    RecurrenceSingular { order: usize },

    #[error("quadrature not converged: value {value:.6e}, error estimate {error:.3e}")]
    QuadratureNotConverged { value: f64, error: f64 },

    #[error(
        "purity factor {factor} diverges: kernel variance does not dominate the negative variance"
    )]
    DivergentPurityIntegral { factor: &'static str },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Stable identifier used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::SteadyStateResidual { .. } => "SteadyStateResidual",
            Error::UnstableSystem { .. } => "UnstableSystem",
            Error::SingularAtFrequency { .. } => "SingularAtFrequency",
            Error::NonHermitianSpectrum { .. } => "NonHermitianSpectrum",
            Error::NonPositiveDefinite(_) => "NonPositiveDefinite",
            Error::RecurrenceSingular { .. } => "RecurrenceSingular",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::DivergentPurityIntegral { .. } => "DivergentPurityIntegral",
        }
    }

    pub fn is_invalid_input(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. })
    }
}
