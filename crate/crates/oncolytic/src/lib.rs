//! Simulation and analysis of a two-compartment tumor/virus model: a
//! nonlocal delayed reaction-diffusion system on an interval, with pluggable
//! growth and incidence families.
//!
//! The crate provides four cooperating pieces:
//!
//! - [`kernel`]: the Green's-function kernel of the diffusion-decay operator
//!   that transports infections during the replication cycle, built either
//!   from a cosine eigenfunction series or from a Crank-Nicolson propagator;
//! - [`integrator`]: an IMEX method-of-lines time stepper with a history
//!   buffer for the discrete delay and the distributed age integral;
//! - [`spectral`]: principal-eigenvalue thresholds deciding tumor growth and
//!   viral invasion;
//! - [`equilibria`]: constant steady states, regime classification, and
//!   persistence lower bounds for the logistic/Holling specialization.
//!
//! All types are immutable after construction and safe to move across
//! threads; operations are pure functions of their inputs.

pub mod assumptions;
pub mod equilibria;
pub mod error;
pub mod family;
pub mod grid;
pub mod kernel;
pub mod operators;
pub mod params;
pub mod spectral;

pub use assumptions::{validate_assumption_fns, validate_assumptions, AssumptionReport};
pub use equilibria::{
    classify_regime, find_constant_equilibria, persistence_lower_bounds, steady_state_residual,
    BoundVariant, CoefficientMode, EquilibriumSet, PersistenceBounds, Regime, RegimeKind,
};
pub use error::{ModelError, Result};
pub use family::{GrowthFamily, IncidenceFamily};
pub use grid::{Field, GridSpec};
pub use kernel::{
    build_kernel_auto, build_kernel_semigroup, build_kernel_spectral, Kernel, KernelRoute,
};
pub use params::{Alpha, ModelParams};
pub use spectral::{lambda1_closed_form, lambda1_linear, s1_delayed, sigma1, EigenResult};
