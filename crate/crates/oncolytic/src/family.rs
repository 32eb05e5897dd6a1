//! Growth-rate and incidence function families.
//!
//! Growth gives the per-capita rate `F(u)` of the tumor at total load `u`;
//! incidence gives the infection rate `G(u, v)` between tumor density `u`
//! and virus density `v`. Both families are spatially homogeneous; spatial
//! structure enters the model through diffusion, the virus death rate and
//! the boundary coefficients.

use crate::error::{ModelError, Result};

/// Per-capita tumor growth rate `F(u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthFamily {
    /// `F(u) = b - d*u`.
    Logistic { b: f64, d: f64 },
    /// `F(u) = b - d*ln(max(u, floor))`.
    ///
    /// The raw logarithm diverges at `u = 0`; the floor keeps evaluation
    /// finite on all nonnegative inputs.
    Gompertz { b: f64, d: f64, floor: f64 },
}

impl GrowthFamily {
    /// Validate the parameter set.
    pub fn validate(&self) -> Result<()> {
        let (b, d) = match self {
            GrowthFamily::Logistic { b, d } => (*b, *d),
            GrowthFamily::Gompertz { b, d, floor } => {
                if !(floor.is_finite() && *floor > 0.0) {
                    return Err(ModelError::input(format!(
                        "gompertz floor must be positive, got {floor}"
                    )));
                }
                (*b, *d)
            }
        };
        if !b.is_finite() {
            return Err(ModelError::input(format!("growth parameter b must be finite, got {b}")));
        }
        if !(d.is_finite() && d >= 0.0) {
            return Err(ModelError::input(format!(
                "growth parameter d must be finite and >= 0, got {d}"
            )));
        }
        Ok(())
    }

    /// `F(u)` for `u >= 0`; the caller guarantees the argument.
    #[inline]
    pub fn rate(&self, u: f64) -> f64 {
        match *self {
            GrowthFamily::Logistic { b, d } => b - d * u,
            GrowthFamily::Gompertz { b, d, floor } => b - d * u.max(floor).ln(),
        }
    }

    /// Checked evaluation of `F(u)`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if !u.is_finite() {
            return Err(ModelError::input(format!("growth argument must be finite, got {u}")));
        }
        if u < 0.0 {
            return Err(ModelError::input(format!("growth argument must be >= 0, got {u}")));
        }
        Ok(self.rate(u))
    }
}

/// Infection rate `G(u, v)`, vanishing whenever either argument is zero.
#[derive(Debug, Clone, PartialEq)]
pub enum IncidenceFamily {
    /// `G(u, v) = beta*u*v`.
    MassAction { beta: f64 },
    /// `G(u, v) = beta*u*v / (1 + h*v)`; `h = 0` degenerates to mass action.
    HollingII { beta: f64, h: f64 },
}

impl IncidenceFamily {
    pub fn validate(&self) -> Result<()> {
        let (beta, h) = match self {
            IncidenceFamily::MassAction { beta } => (*beta, 0.0),
            IncidenceFamily::HollingII { beta, h } => (*beta, *h),
        };
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(ModelError::input(format!(
                "incidence parameter beta must be finite and >= 0, got {beta}"
            )));
        }
        if !(h.is_finite() && h >= 0.0) {
            return Err(ModelError::input(format!(
                "incidence parameter h must be finite and >= 0, got {h}"
            )));
        }
        Ok(())
    }

    /// `G(u, v)` for `u, v >= 0`; the caller guarantees the arguments.
    #[inline]
    pub fn rate(&self, u: f64, v: f64) -> f64 {
        match *self {
            IncidenceFamily::MassAction { beta } => beta * u * v,
            IncidenceFamily::HollingII { beta, h } => beta * u * v / (1.0 + h * v),
        }
    }

    /// Checked evaluation of `G(u, v)`.
    pub fn eval(&self, u: f64, v: f64) -> Result<f64> {
        for (name, x) in [("u", u), ("v", v)] {
            if !x.is_finite() {
                return Err(ModelError::input(format!(
                    "incidence argument {name} must be finite, got {x}"
                )));
            }
            if x < 0.0 {
                return Err(ModelError::input(format!(
                    "incidence argument {name} must be >= 0, got {x}"
                )));
            }
        }
        Ok(self.rate(u, v))
    }

    /// Partial derivative of `G` in the virus argument at `v = 0`, the slope
    /// of the linearized infection term.
    #[inline]
    pub fn dv_at_zero(&self, u: f64) -> f64 {
        match *self {
            IncidenceFamily::MassAction { beta } => beta * u,
            IncidenceFamily::HollingII { beta, .. } => beta * u,
        }
    }
}
