use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variants split into two families: domain/validation faults, where the
/// caller passed parameters outside an operation's contract, and numerical
/// faults, where the computation itself broke down at the configured
/// precision. [`GapError::is_numerical_fault`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GapError {
    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("Newton iteration for Legendre root {index} of order {order} did not converge")]
    NonConvergence { order: usize, index: usize },

    #[error("finite-difference step {step:e} underflows at x = {x:e}")]
    StepUnderflow { step: f64, x: f64 },

    #[error("non-positive pivot {value:e} at index {index} (raise precision or shrink n)")]
    NonPositivePivot { index: usize, value: f64 },

    #[error("precision insufficient: {0}")]
    PrecisionFault(String),

    #[error("negative Fredholm determinant (quadrature order {m} too small for s = {s})")]
    SignFlip { s: f64, m: usize },

    #[error("resolvent solve failed: I - eta*K is numerically singular at eta = {eta}")]
    SingularResolvent { eta: f64 },

    #[error("input sits on a pole of the map")]
    PoleInput,

    #[error("point lies on the cut [-1, 1]; a boundary side is required")]
    BranchAmbiguity,

    #[error("argument {arg:.4} of sqrt(zeta) outside the Hankel sector [-3pi/4, 3pi/4]")]
    SectorViolation { arg: f64 },

    #[error("extrapolation needs samples spread by at least 2x in scale (got ratio {ratio:.3})")]
    InsufficientSpread { ratio: f64 },
}

impl GapError {
    pub fn domain(msg: impl Into<String>) -> Self {
        GapError::Domain(msg.into())
    }

    /// True for faults of the computation rather than of the input.
    pub fn is_numerical_fault(&self) -> bool {
        matches!(
            self,
            GapError::NonConvergence { .. }
                | GapError::NonPositivePivot { .. }
                | GapError::PrecisionFault(_)
                | GapError::SignFlip { .. }
                | GapError::SingularResolvent { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, GapError>;
