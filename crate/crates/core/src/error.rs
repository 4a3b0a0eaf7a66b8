use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wavevector has zero length")]
    ZeroWavevector,
    #[error("fallback vector is parallel to the wavevector")]
    DegenerateFallback,
    #[error(
        "wavevector is within {rho:.3e} of the x3-axis; finite differences need rho >= {min:.3e}"
    )]
    SingularAxis { rho: f64, min: f64 },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("exponent alpha = {0} outside the supported range (0, 3)")]
    UnsupportedAlpha(f64),
    #[error("invalid cutoff: {0}")]
    InvalidCutoff(String),
    #[error("|y| = {radius} exceeds the quadrature budget guard {limit}")]
    RadiusOutOfRange { radius: f64, limit: f64 },
    #[error("quadrature budget exceeded (estimate {estimate:.6e}, error {abs_error:.3e})")]
    QuadratureBudgetExceeded { estimate: f64, abs_error: f64 },
    #[error("insufficient samples: need {needed}, have {available}")]
    InsufficientSamples { needed: usize, available: usize },
    #[error("cannot take logarithm of profile values: {0}")]
    NonPositiveValues(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("mode filter removed every lattice mode")]
    EmptyLattice,
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("truncated state space has {states} states, above the guard of {limit}")]
    StateSpaceTooLarge { states: u128, limit: u128 },
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
    #[error("box side must be positive, got {0}")]
    NonPositiveBox(f64),
    #[error("mode sum needs {needed} lattice points, above the budget of {budget}")]
    ModeBudgetExceeded { needed: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
