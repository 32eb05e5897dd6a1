//! Model parameter set: diffusion rates, virus death rate, burst count,
//! replication delay, and the growth/incidence families.

use crate::error::{ModelError, Result};
use crate::family::{GrowthFamily, IncidenceFamily};
use crate::grid::{Field, GridSpec};

/// Virus death rate `alpha(x)`: constant or sampled per grid node.
#[derive(Debug, Clone, PartialEq)]
pub enum Alpha {
    Constant(f64),
    PerNode(Vec<f64>),
}

impl Alpha {
    pub fn validate(&self) -> Result<()> {
        match self {
            Alpha::Constant(a) => {
                if !(a.is_finite() && *a > 0.0) {
                    return Err(ModelError::input(format!(
                        "alpha must be strictly positive, got {a}"
                    )));
                }
            }
            Alpha::PerNode(vs) => {
                if vs.is_empty() {
                    return Err(ModelError::input("alpha profile is empty"));
                }
                for (i, a) in vs.iter().enumerate() {
                    if !(a.is_finite() && *a > 0.0) {
                        return Err(ModelError::input(format!(
                            "alpha must be strictly positive at every node; node {i} is {a}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Nodal values on a grid with `n` points.
    pub fn values(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            Alpha::Constant(a) => Ok(vec![*a; n]),
            Alpha::PerNode(vs) => {
                if vs.len() != n {
                    return Err(ModelError::input(format!(
                        "alpha profile has {} nodes, grid has {n}",
                        vs.len()
                    )));
                }
                Ok(vs.clone())
            }
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Alpha::Constant(a) => Some(*a),
            Alpha::PerNode(_) => None,
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            Alpha::Constant(a) => *a,
            Alpha::PerNode(vs) => vs.iter().fold(f64::INFINITY, |m, v| m.min(*v)),
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            Alpha::Constant(a) => *a,
            Alpha::PerNode(vs) => vs.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v)),
        }
    }

    /// Sample as a [`Field`] on `grid`.
    pub fn field(&self, grid: &GridSpec) -> Result<Field> {
        Field::from_values(self.values(grid.n_points())?)
    }
}

/// Full parameter set of the two-compartment model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Tumor cell diffusion rate (space^2 / time), `>= 0`.
    pub d1: f64,
    /// Virus diffusion rate (space^2 / time), `>= 0`.
    pub d2: f64,
    /// Virus death rate (1 / time), strictly positive pointwise.
    pub alpha: Alpha,
    /// Virus particles per infected cell, `> 0`.
    pub kappa: f64,
    /// Replication-cycle delay (time), `>= 0`.
    pub tau: f64,
    pub growth: GrowthFamily,
    pub incidence: IncidenceFamily,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("d1", self.d1), ("d2", self.d2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ModelError::input(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        self.alpha.validate()?;
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(ModelError::input(format!("kappa must be > 0, got {}", self.kappa)));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(ModelError::input(format!("tau must be >= 0, got {}", self.tau)));
        }
        self.growth.validate()?;
        self.incidence.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ModelParams {
        ModelParams {
            d1: 0.1,
            d2: 0.5,
            alpha: Alpha::Constant(1.0),
            kappa: 10.0,
            tau: 1.0,
            growth: GrowthFamily::Logistic { b: 1.0, d: 1.0 },
            incidence: IncidenceFamily::HollingII { beta: 2.0, h: 1.0 },
        }
    }

    #[test]
    fn valid_set_passes() {
        assert!(base().validate().is_ok());
    }

    #[test]
    fn rejects_nonpositive_alpha_and_kappa() {
        let mut p = base();
        p.alpha = Alpha::Constant(0.0);
        assert!(p.validate().is_err());
        let mut p = base();
        p.kappa = 0.0;
        assert!(p.validate().is_err());
        let mut p = base();
        p.tau = -0.5;
        assert!(p.validate().is_err());
        let mut p = base();
        p.d2 = -1e-9;
        assert!(p.validate().is_err());
    }

    #[test]
    fn alpha_profile_checked_pointwise() {
        let a = Alpha::PerNode(vec![1.0, 0.5, -0.1]);
        assert!(a.validate().is_err());
        let a = Alpha::PerNode(vec![1.0, 0.5, 0.2]);
        assert!(a.validate().is_ok());
        assert!(a.values(4).is_err());
        assert_eq!(a.min(), 0.2);
        assert_eq!(a.max(), 1.0);
    }
}
