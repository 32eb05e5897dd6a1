//! Discrete spatial operators shared by the kernel builder, the time
//! integrator and the eigenvalue solvers: a ghost-point Robin Laplacian and
//! a Crank-Nicolson step on tridiagonal generators.
//!
//! The boundary rows eliminate a second-order ghost node. With outward
//! normal derivative `du/dn + eta*u = 0`, the ghost value at the left end is
//! `u[-1] = u[1] - 2*dx*eta_l*u[0]`, giving the boundary Laplacian row
//! `2*(u[1] - (1 + dx*eta_l)*u[0]) / dx^2`, and symmetrically on the right.
//! Every consumer of the model uses this same discretization, so the
//! spectral thresholds predict exactly what the integrator does.

use crate::error::{ModelError, Result};
use crate::grid::{GridSpec, RobinPair};

/// Tridiagonal matrix stored by diagonals.
#[derive(Debug, Clone)]
pub struct Tridiag {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl Tridiag {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Zero matrix of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        Tridiag { sub: vec![0.0; n - 1], diag: vec![0.0; n], sup: vec![0.0; n - 1] }
    }

    /// `out = A * v`.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        let n = self.n();
        debug_assert_eq!(v.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.sub[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.sup[i] * v[i + 1];
            }
            out[i] = acc;
        }
    }

    /// `self + c * I`.
    pub fn shifted(&self, c: f64) -> Tridiag {
        let mut out = self.clone();
        for d in &mut out.diag {
            *d += c;
        }
        out
    }

    /// `self - diag(d)`.
    pub fn minus_diag(&self, d: &[f64]) -> Tridiag {
        let mut out = self.clone();
        for (dd, v) in out.diag.iter_mut().zip(d) {
            *dd -= v;
        }
        out
    }

    /// Scale all entries by `c`.
    pub fn scaled(&self, c: f64) -> Tridiag {
        Tridiag {
            sub: self.sub.iter().map(|x| c * x).collect(),
            diag: self.diag.iter().map(|x| c * x).collect(),
            sup: self.sup.iter().map(|x| c * x).collect(),
        }
    }

    /// Solve `A x = rhs` in place by the Thomas algorithm. The generators
    /// used here produce strictly diagonally dominant systems, so no
    /// pivoting is needed; a vanishing pivot is an internal error.
    pub fn solve(&self, rhs: &mut [f64], scratch: &mut [f64]) -> Result<()> {
        let n = self.n();
        debug_assert_eq!(rhs.len(), n);
        debug_assert_eq!(scratch.len(), n);
        let mut pivot = self.diag[0];
        if pivot.abs() < 1e-300 {
            return Err(ModelError::Internal("singular tridiagonal solve".into()));
        }
        rhs[0] /= pivot;
        for i in 1..n {
            scratch[i] = self.sup[i - 1] / pivot;
            pivot = self.diag[i] - self.sub[i - 1] * scratch[i];
            if pivot.abs() < 1e-300 {
                return Err(ModelError::Internal("singular tridiagonal solve".into()));
            }
            rhs[i] = (rhs[i] - self.sub[i - 1] * rhs[i - 1]) / pivot;
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= scratch[i + 1] * rhs[i + 1];
        }
        Ok(())
    }
}

/// Second-difference Laplacian with ghost-point Robin rows.
pub fn laplacian(grid: &GridSpec, eta: RobinPair) -> Tridiag {
    let n = grid.n_points();
    let dx = grid.dx();
    let inv2 = 1.0 / (dx * dx);
    let mut a = Tridiag::zeros(n);
    for i in 1..n - 1 {
        a.sub[i - 1] = inv2;
        a.diag[i] = -2.0 * inv2;
        a.sup[i] = inv2;
    }
    a.diag[0] = -2.0 * (1.0 + dx * eta[0]) * inv2;
    a.sup[0] = 2.0 * inv2;
    a.diag[n - 1] = -2.0 * (1.0 + dx * eta[1]) * inv2;
    a.sub[n - 2] = 2.0 * inv2;
    a
}

/// One Crank-Nicolson (theta = 1/2) or backward-Euler (theta = 1) step of
/// size `dt` for `u' = A u`, reusable across many right-hand sides.
#[derive(Debug, Clone)]
pub struct ImplicitStep {
    /// `I - theta*dt*A`
    lhs: Tridiag,
    /// `I + (1-theta)*dt*A`
    rhs: Tridiag,
}

impl ImplicitStep {
    pub fn new(generator: &Tridiag, dt: f64, theta: f64) -> Self {
        let lhs = generator.scaled(-theta * dt).shifted(1.0);
        let rhs = generator.scaled((1.0 - theta) * dt).shifted(1.0);
        ImplicitStep { lhs, rhs }
    }

    pub fn crank_nicolson(generator: &Tridiag, dt: f64) -> Self {
        Self::new(generator, dt, 0.5)
    }

    pub fn backward_euler(generator: &Tridiag, dt: f64) -> Self {
        Self::new(generator, dt, 1.0)
    }

    /// Advance `v` by one step; `forcing`, when present, is added to the
    /// right-hand side before the solve (explicit source term, already
    /// scaled by `dt`).
    pub fn advance(&self, v: &mut Vec<f64>, forcing: Option<&[f64]>, work: &mut Workspace) -> Result<()> {
        self.rhs.apply(v, &mut work.rhs);
        if let Some(f) = forcing {
            for (r, x) in work.rhs.iter_mut().zip(f) {
                *r += x;
            }
        }
        self.lhs.solve(&mut work.rhs, &mut work.scratch)?;
        std::mem::swap(v, &mut work.rhs);
        Ok(())
    }
}

/// Reusable buffers for the implicit solves.
#[derive(Debug, Clone)]
pub struct Workspace {
    rhs: Vec<f64>,
    scratch: Vec<f64>,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Workspace { rhs: vec![0.0; n], scratch: vec![0.0; n] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn laplacian_of_constant_is_zero_under_neumann() {
        let g = GridSpec::neumann_pi(17).unwrap();
        let a = laplacian(&g, [0.0, 0.0]);
        let v = vec![3.5; 17];
        let mut out = vec![0.0; 17];
        a.apply(&v, &mut out);
        for x in out {
            assert!(x.abs() < 1e-10);
        }
    }

    #[test]
    fn laplacian_of_cosine_eigenmode() {
        // cos(k x) is an exact eigenvector of the discrete Neumann Laplacian
        // with eigenvalue -(2 - 2 cos(k dx)) / dx^2.
        let n = 33;
        let g = GridSpec::neumann_pi(n).unwrap();
        let a = laplacian(&g, [0.0, 0.0]);
        let k = 3.0;
        let v: Vec<f64> = (0..n).map(|i| (k * g.x(i)).cos()).collect();
        let mut out = vec![0.0; n];
        a.apply(&v, &mut out);
        let dx = g.dx();
        let mu = -(2.0 - 2.0 * (k * dx).cos()) / (dx * dx);
        for (o, vi) in out.iter().zip(&v) {
            assert!((o - mu * vi).abs() < 1e-9, "{o} vs {}", mu * vi);
        }
    }

    #[test]
    fn thomas_solves_against_apply() {
        let g = GridSpec::new(41, PI, [0.3, 0.7], [0.0; 2]).unwrap();
        let a = laplacian(&g, g.eta1()).scaled(-0.01).shifted(1.0);
        let x_true: Vec<f64> = (0..41).map(|i| (0.3 * i as f64).sin()).collect();
        let mut rhs = vec![0.0; 41];
        a.apply(&x_true, &mut rhs);
        let mut scratch = vec![0.0; 41];
        a.solve(&mut rhs, &mut scratch).unwrap();
        for (xs, xt) in rhs.iter().zip(&x_true) {
            assert!((xs - xt).abs() < 1e-11);
        }
    }

    #[test]
    fn weighted_symmetry_of_generator() {
        // W A = A^T W with the trapezoid weights W, for constant decay and
        // per-endpoint Robin coefficients.
        let g = GridSpec::new(21, PI, [0.0; 2], [0.4, 1.1]).unwrap();
        let a = laplacian(&g, g.eta2());
        let w = g.weights();
        let n = g.n_points();
        // reconstruct dense entries from the diagonals
        let entry = |i: usize, j: usize| -> f64 {
            if i == j {
                a.diag[i]
            } else if j + 1 == i {
                a.sub[j]
            } else if i + 1 == j {
                a.sup[i]
            } else {
                0.0
            }
        };
        for i in 0..n {
            for j in 0..n {
                let lhs = w[i] * entry(i, j);
                let rhs = w[j] * entry(j, i);
                assert!((lhs - rhs).abs() < 1e-9, "({i},{j}): {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn crank_nicolson_decays_constant_mode() {
        // u' = -alpha u with Neumann diffusion keeps constants constant in
        // space and decays them at the CN rate.
        let g = GridSpec::neumann_pi(17).unwrap();
        let alpha = 0.8;
        let gen = laplacian(&g, [0.0, 0.0]).scaled(0.3).minus_diag(&vec![alpha; 17]);
        let dt = 0.05;
        let step = ImplicitStep::crank_nicolson(&gen, dt);
        let mut v = vec![2.0; 17];
        let mut work = Workspace::new(17);
        step.advance(&mut v, None, &mut work).unwrap();
        let expect = 2.0 * (1.0 - 0.5 * alpha * dt) / (1.0 + 0.5 * alpha * dt);
        for x in &v {
            assert!((x - expect).abs() < 1e-12);
        }
    }
}
