//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in basis evaluation, interpolation, or the
/// steady-state solver. Variants carry the data needed to locate the failure
/// without re-running the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Spline order outside the supported range for the requested operation.
    #[error("invalid spline order m={m}: {reason}")]
    InvalidOrder { m: usize, reason: &'static str },

    /// Parameter combination violating a structural invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The interpolation symbol vanishes at the queried point; the damping
    /// symbol has a pole there.
    #[error("symbol singular at x={x}, xi={xi}: |phi|={magnitude:.3e} below {threshold:.1e}")]
    SingularSymbol {
        x: f64,
        xi: f64,
        magnitude: f64,
        threshold: f64,
    },

    /// Interpolation is unstable because phi vanishes at a grid frequency.
    #[error("interpolation unstable: phi vanishes at bin k={k} (xi={xi})")]
    InterpolationUnstable { k: usize, xi: f64 },

    /// Empty input where at least one sample is required.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A trajectory does not contain enough structure for the estimator.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Transient integration produced a non-finite state.
    #[error("non-finite state at t={t}")]
    NonFiniteState { t: f64 },

    /// Newton's linear solve failed.
    #[error("singular jacobian at iteration {iteration}")]
    SingularJacobian { iteration: usize },

    /// Model lookup failed.
    #[error("unknown model '{name}'; available: {available}")]
    UnknownModel { name: String, available: String },

    /// A model rejected a parameter assignment.
    #[error("invalid model parameter: {0}")]
    InvalidModelParam(String),
}
