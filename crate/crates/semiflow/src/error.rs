use thiserror::Error;

/// Runtime failures of operations that can go wrong on valid inputs.
///
/// Contract violations (mismatched grids, non-finite samples, bad constructor
/// arguments) panic instead: they indicate a bug in the caller, not a state
/// the dynamics can reach from valid data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A density coefficient is not strictly positive everywhere.
    #[error("density must be strictly positive everywhere (min value {min:.6e})")]
    NonPositiveDensity { min: f64 },

    /// Node values of a circle map are not strictly increasing with winding
    /// number one.
    #[error("map values are not strictly monotone with winding number one")]
    NotMonotone,

    /// Bisection on a map interpolant did not reach the required residual.
    #[error("inversion bisection failed to converge (residual {residual:.3e})")]
    InversionFailed { residual: f64 },

    /// A finite-difference step is non-positive or too small to resolve.
    #[error("finite-difference step {step:.3e} is not positive or underflows")]
    StepUnderflow { step: f64 },

    /// Nested finite differences at two step sizes disagree.
    #[error("finite differences disagree between steps (coarse {coarse:.6e}, fine {fine:.6e})")]
    FdBreakdown { coarse: f64, fine: f64 },

    /// The configured time step exceeds the CFL bound of the current state.
    #[error("time step {dt:.3e} exceeds CFL bound {dt_max:.3e} at t = {t:.6}")]
    CflViolation { t: f64, dt: f64, dt_max: f64 },

    /// Density positivity was lost during time integration.
    #[error("density positivity lost at t = {t:.6}")]
    PositivityLost { t: f64 },

    /// The material map lost monotonicity during time integration
    /// (element inversion).
    #[error("material map monotonicity lost at t = {t:.6} (element inversion)")]
    MonotonicityLost { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
