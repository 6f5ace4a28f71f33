use thiserror::Error;

/// Errors raised by the profile, bound and certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("volume {volume} outside the admissible range ({min}, {max})")]
    VolumeOutOfRange { volume: f64, min: f64, max: f64 },

    #[error("quadrature did not converge on [{a}, {b}]: estimated error {error:.3e} after {evaluations} evaluations")]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("root not bracketed in [{a}, {b}] (f(a) = {fa:.6e}, f(b) = {fb:.6e})")]
    RootNotBracketed { a: f64, b: f64, fa: f64, fb: f64 },

    #[error("root finding did not converge after {iterations} iterations")]
    RootNonConvergence { iterations: usize },

    #[error("ball-type volume is not increasing between eta = {eta_lo} and eta = {eta_hi}")]
    MonotonicityViolated { eta_lo: f64, eta_hi: f64 },

    #[error("regime not applicable: {0}")]
    RegimeInapplicable(String),

    #[error("coverage gap: {0}")]
    CoverageGap(String),

    #[error("auxiliary minimum check failed: {0}")]
    AuxiliaryCheck(String),

    #[error("headline table aborted: {0}")]
    Headline(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
