use thiserror::Error;

/// Errors produced by model construction, kernel builders, integrators and
/// eigenvalue solvers.
#[derive(Debug, Error)]
pub enum ModelError {
    /// An argument violates a documented precondition (negative value,
    /// non-finite number, mismatched grid, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A builder was asked for a configuration it does not support.
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// Run setup is inconsistent (e.g. the delay is not a multiple of the
    /// time step, or the kernel age ladder does not match the integrator).
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    /// An iterative solver did not converge within its iteration budget.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A numerical procedure failed structurally (lost bracket, failed
    /// scan) rather than by slow convergence.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A simulated field exceeded the divergence threshold or became
    /// non-finite.
    #[error("solution blow-up at t = {t}: {what} = {norm:.6e}")]
    BlowUp { t: f64, what: &'static str, norm: f64 },

    /// Internal invariant violated; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;

impl ModelError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        ModelError::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        ModelError::InvalidConfiguration(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        ModelError::UnsupportedConfiguration(msg.into())
    }
}
