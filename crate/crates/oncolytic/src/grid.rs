//! Uniform 1-D spatial grid on `[0, L]` with Robin boundary coefficients and
//! trapezoid quadrature weights, plus the [`Field`] sample container.

use crate::error::{ModelError, Result};

/// Robin coefficients `(left, right)` for one boundary condition
/// `du/dn + eta * u = 0`. `(0, 0)` is the no-flux (Neumann) case.
pub type RobinPair = [f64; 2];

/// Uniform grid on `[0, L]` with `n_points` nodes, `dx = L / (n_points - 1)`.
///
/// Carries the per-endpoint Robin coefficients for the two fields (`eta1`
/// for tumor cells, `eta2` for virus) and the trapezoid quadrature weights,
/// which sum exactly to `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    length: f64,
    n_points: usize,
    dx: f64,
    eta1: RobinPair,
    eta2: RobinPair,
    weights: Vec<f64>,
}

impl GridSpec {
    /// Grid with Robin coefficients on both fields.
    pub fn new(n_points: usize, length: f64, eta1: RobinPair, eta2: RobinPair) -> Result<Self> {
        if n_points < 3 {
            return Err(ModelError::input(format!(
                "grid needs at least 3 points, got {n_points}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(ModelError::input(format!("grid length must be positive, got {length}")));
        }
        for (name, pair) in [("eta1", eta1), ("eta2", eta2)] {
            for v in pair {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(ModelError::input(format!(
                        "{name} must be finite and >= 0, got {v}"
                    )));
                }
            }
        }
        let dx = length / (n_points - 1) as f64;
        let mut weights = vec![dx; n_points];
        weights[0] = 0.5 * dx;
        weights[n_points - 1] = 0.5 * dx;
        Ok(GridSpec { length, n_points, dx, eta1, eta2, weights })
    }

    /// Neumann grid on `[0, pi]`, the configuration of the worked example.
    pub fn neumann_pi(n_points: usize) -> Result<Self> {
        Self::new(n_points, std::f64::consts::PI, [0.0, 0.0], [0.0, 0.0])
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn eta1(&self) -> RobinPair {
        self.eta1
    }

    pub fn eta2(&self) -> RobinPair {
        self.eta2
    }

    /// Trapezoid quadrature weights; `sum(weights) == length`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Node coordinate `x_i = i * dx`.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    /// All node coordinates.
    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Trapezoid quadrature of nodal values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// True when this grid and `other` discretize the same domain.
    pub fn same_domain(&self, other: &GridSpec) -> bool {
        self.n_points == other.n_points && (self.length - other.length).abs() < 1e-12
    }
}

/// Real-valued function sampled on a grid; all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    values: Vec<f64>,
}

impl Field {
    /// Field from raw nodal values; rejects non-finite entries.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(ModelError::input(format!("field entry {i} is not finite ({v})")));
        }
        Ok(Field { values })
    }

    /// Constant field.
    pub fn constant(n: usize, value: f64) -> Self {
        Field { values: vec![value; n] }
    }

    /// Sample `f(x)` at the grid nodes.
    pub fn from_fn(grid: &GridSpec, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_values((0..grid.n_points()).map(|i| f(grid.x(i))).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `L1` norm under the grid's trapezoid quadrature.
    pub fn l1_norm(&self, grid: &GridSpec) -> f64 {
        grid.weights().iter().zip(&self.values).map(|(w, v)| w * v.abs()).sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn weights_sum_to_length() {
        for n in [3, 17, 129] {
            let g = GridSpec::neumann_pi(n).unwrap();
            let total: f64 = g.weights().iter().sum();
            assert!((total - PI).abs() < 1e-12, "n={n}: sum {total}");
            assert!(g.dx() > 0.0);
        }
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(GridSpec::new(2, PI, [0.0; 2], [0.0; 2]).is_err());
        assert!(GridSpec::new(9, -1.0, [0.0; 2], [0.0; 2]).is_err());
        assert!(GridSpec::new(9, PI, [-0.1, 0.0], [0.0; 2]).is_err());
        assert!(GridSpec::new(9, PI, [0.0; 2], [f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn robin_zero_is_allowed() {
        // eta = 0 recovers the no-flux case.
        let g = GridSpec::new(9, 2.0, [0.0, 0.0], [0.0, 0.0]).unwrap();
        assert_eq!(g.eta1(), [0.0, 0.0]);
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let g = GridSpec::new(33, 2.0, [0.0; 2], [0.0; 2]).unwrap();
        let f = Field::from_fn(&g, |x| 3.0 * x).unwrap();
        assert!((g.integrate(f.values()) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn field_rejects_non_finite() {
        assert!(Field::from_values(vec![0.0, f64::INFINITY]).is_err());
        assert!(Field::from_values(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn field_norms() {
        let g = GridSpec::new(5, 4.0, [0.0; 2], [0.0; 2]).unwrap();
        let f = Field::from_values(vec![-2.0, 1.0, 0.0, 1.0, 2.0]).unwrap();
        assert_eq!(f.sup_norm(), 2.0);
        assert_eq!(f.min(), -2.0);
        assert_eq!(f.max(), 2.0);
        // trapezoid of |f|: (0.5*2 + 1 + 0 + 1 + 0.5*2) * dx, dx = 1
        assert!((f.l1_norm(&g) - 4.0).abs() < 1e-12);
    }
}
