use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperError {
    #[error("Gamma has a pole at {0}")]
    PoleOfGamma(f64),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("sampled function does not vanish at the root (|h| = {0:e})")]
    NonvanishingAtRoot(f64),
    #[error("point too close to the ideal boundary: {0}")]
    BoundaryDegeneracy(String),
    #[error("K-type degree {degree} exceeds truncation degree {lmax}")]
    Truncation { degree: usize, lmax: usize },
    #[error("unsupported dimension p = {0} for this operation")]
    UnsupportedDimension(usize),
    #[error("unsupported K-type {0} for p = {1}")]
    UnsupportedKType(i64, usize),
    #[error("spectral grid is not symmetric under nu -> -nu: {0}")]
    AsymmetricGrid(String),
    #[error("division by p_delta(-nu) failed: {0}")]
    RootDivision(String),
    #[error("weighted integrand is not finite on the requested tube: {0}")]
    DivergentWeight(String),
    #[error("no calibration record for p = {0}")]
    Uncalibrated(usize),
    #[error("a support radius hint is required")]
    MissingSupport,
    #[error("symmetry residual {residual:e} exceeds {tolerance:e}")]
    SymmetryViolation { residual: f64, tolerance: f64 },
    #[error("calibration is unstable: held-out spread {0:e}")]
    Instability(f64),
    #[error("seminorm spec does not match the input: {0}")]
    SpecMismatch(String),
    #[error("spectral function lacks tube line Re nu = {0}")]
    InsufficientTube(f64),
    #[error("non-finite value produced in {0}")]
    NonFinite(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, HyperError>;
