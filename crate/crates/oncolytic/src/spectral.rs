//! Principal-eigenvalue thresholds.
//!
//! Two linearizations of the model decide its long-run behavior:
//!
//! - `sigma1`: principal eigenvalue of `d1*Laplacian + F(x, 0)` under the
//!   tumor boundary condition. Positive means the tumor can grow from rare.
//! - `lambda1`: principal eigenvalue of `d2*Laplacian - alpha(x) +
//!   K_tau * dG/dv(y, U1(y), 0)` under the virus boundary condition, the
//!   linearization about the tumor-only state `U1`. Positive means the
//!   virus invades.
//! - `s1`: the delayed variant, where the nonlocal term carries the factor
//!   `e^{-s tau}`; `s1` solves the scalar fixed point `s = Lambda(s)` and
//!   has the same sign as `lambda1`.
//!
//! All solvers reuse the integrator's ghost-point Laplacian and the
//! kernel's quadrature, so the thresholds describe the discrete dynamics,
//! not only the continuum. Eigenpairs come from shifted power iteration;
//! the shift pushes the spectrum into the nonnegative half-line where the
//! principal pair dominates (Krein-Rutman structure, asserted numerically
//! through the positive eigenfunction).

use crate::error::{ModelError, Result};
use crate::grid::{Field, GridSpec};
use crate::kernel::Kernel;
use crate::operators::{laplacian, Tridiag};
use crate::params::Alpha;

/// Relative eigenvalue-change tolerance for the power iteration.
const EIG_TOL: f64 = 1e-12;
/// Residual target `||A psi - lambda psi||_inf` on the sup-normalized pair.
const RESIDUAL_TOL: f64 = 1e-8;
/// Iteration cap.
const MAX_ITERS: usize = 100_000;
/// Bisection tolerance for the delayed fixed point.
const S1_TOL: f64 = 1e-10;

/// Converged principal eigenpair.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub value: f64,
    /// Eigenfunction normalized to sup-norm 1, oriented positive.
    pub eigenfunction: Field,
    pub method: &'static str,
    /// `||A psi - value * psi||_inf` at the returned pair.
    pub residual: f64,
    pub iterations: usize,
}

/// Linear operator `tri + factor * K_age diag(weight)` acting on nodal values.
struct ThresholdOp<'a> {
    tri: Tridiag,
    nonlocal: Option<NonlocalTerm<'a>>,
}

struct NonlocalTerm<'a> {
    kernel: &'a Kernel,
    age_index: usize,
    weight: Vec<f64>,
    factor: f64,
}

impl ThresholdOp<'_> {
    fn n(&self) -> usize {
        self.tri.n()
    }

    fn apply(&self, v: &[f64], out: &mut [f64], scratch: &mut [f64]) {
        self.tri.apply(v, out);
        if let Some(term) = &self.nonlocal {
            let tmp: Vec<f64> = term.weight.iter().zip(v).map(|(w, x)| w * x).collect();
            term.kernel.apply_weighted(term.age_index, &tmp, scratch);
            for (o, k) in out.iter_mut().zip(scratch.iter()) {
                *o += term.factor * k;
            }
        }
    }

    /// Spectrum shift making the shifted operator entrywise nonnegative in
    /// the Gershgorin sense: largest |diagonal| plus the off-diagonal row
    /// sums of both the local and nonlocal parts.
    fn shift(&self, two_d_over_dx2: f64) -> f64 {
        let mut maxdiag = self.tri.diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let mut rowmax = 0.0f64;
        if let Some(term) = &self.nonlocal {
            let n = self.n();
            let mut sums = vec![0.0; n];
            term.kernel.apply_weighted(term.age_index, &term.weight, &mut sums);
            rowmax = sums.iter().fold(0.0f64, |m, s| m.max(term.factor * s));
            let w = term.kernel.grid().weights();
            let m = term.kernel.matrix(term.age_index);
            for i in 0..n {
                let full = self.tri.diag[i] + term.factor * m[i * n + i] * w[i] * term.weight[i];
                maxdiag = maxdiag.max(full.abs());
            }
        }
        // unit margin keeps the shifted operator away from exactly zero
        // when the spectrum is a single point (constant diagonal, d = 0)
        maxdiag + two_d_over_dx2 + rowmax + 1.0
    }
}

/// Power iteration on `op + shift*I`; returns the principal pair of `op`.
fn principal_eigen(
    op: &ThresholdOp<'_>,
    shift: f64,
    start: Option<&[f64]>,
    method: &'static str,
) -> Result<EigenResult> {
    let n = op.n();
    let mut x: Vec<f64> = match start {
        Some(s) => s.to_vec(),
        None => vec![1.0; n],
    };
    let sup = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for v in &mut x {
        *v /= sup;
    }
    let mut y = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut prev = f64::INFINITY;
    let mut residual = f64::INFINITY;
    for iter in 1..=MAX_ITERS {
        op.apply(&x, &mut y, &mut scratch);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += shift * xi;
        }
        let (mut num, mut den) = (0.0, 0.0);
        for (xi, yi) in x.iter().zip(&y) {
            num += xi * yi;
            den += xi * xi;
        }
        let lam_shifted = num / den;
        let lam = lam_shifted - shift;
        // residual of the unshifted pair; x is sup-normalized
        residual = x
            .iter()
            .zip(&y)
            .map(|(xi, yi)| (yi - lam_shifted * xi).abs())
            .fold(0.0, f64::max);
        let sup = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if sup == 0.0 {
            return Err(ModelError::Internal("power iteration collapsed to zero".into()));
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / sup;
        }
        if (lam - prev).abs() <= EIG_TOL * lam.abs().max(1.0) && residual <= RESIDUAL_TOL {
            // orient by the dominant component
            let dominant = x.iter().fold(0.0f64, |m, v| if v.abs() > m.abs() { *v } else { m });
            if dominant < 0.0 {
                for v in &mut x {
                    *v = -*v;
                }
            }
            return Ok(EigenResult {
                value: lam,
                eigenfunction: Field::from_values(x)?,
                method,
                residual,
                iterations: iter,
            });
        }
        prev = lam;
    }
    Err(ModelError::NoConvergence { iterations: MAX_ITERS, residual })
}

/// Tumor-growth threshold: principal eigenvalue of
/// `d1*Laplacian + diag(growth_at_zero)` with the grid's `eta1` boundary
/// rows.
pub fn sigma1(grid: &GridSpec, d1: f64, growth_at_zero: &Field) -> Result<EigenResult> {
    if !(d1.is_finite() && d1 >= 0.0) {
        return Err(ModelError::input(format!("d1 must be finite and >= 0, got {d1}")));
    }
    if growth_at_zero.len() != grid.n_points() {
        return Err(ModelError::input("growth field does not match the grid"));
    }
    let neg: Vec<f64> = growth_at_zero.values().iter().map(|v| -v).collect();
    let tri = laplacian(grid, grid.eta1()).scaled(d1).minus_diag(&neg);
    let op = ThresholdOp { tri, nonlocal: None };
    let dx = grid.dx();
    let shift = op.shift(2.0 * d1 / (dx * dx));
    principal_eigen(&op, shift, None, "shifted-power")
}

fn nonlocal_op<'a>(
    grid: &GridSpec,
    d2: f64,
    alpha: &Alpha,
    kernel: &'a Kernel,
    weight: &Field,
    factor: f64,
) -> Result<ThresholdOp<'a>> {
    if !(d2.is_finite() && d2 >= 0.0) {
        return Err(ModelError::input(format!("d2 must be finite and >= 0, got {d2}")));
    }
    alpha.validate()?;
    if !kernel.grid().same_domain(grid) {
        return Err(ModelError::input("kernel was built on a different grid"));
    }
    if weight.len() != grid.n_points() {
        return Err(ModelError::input("weight field does not match the grid"));
    }
    if weight.min() < 0.0 {
        return Err(ModelError::input("weight must be entrywise nonnegative"));
    }
    let alpha_nodes = alpha.values(grid.n_points())?;
    let tri = laplacian(grid, grid.eta2()).scaled(d2).minus_diag(&alpha_nodes);
    Ok(ThresholdOp {
        tri,
        nonlocal: Some(NonlocalTerm {
            kernel,
            age_index: kernel.last_age_index(),
            weight: weight.values().to_vec(),
            factor,
        }),
    })
}

/// Viral-invasion threshold without the delay factor: principal eigenvalue
/// of `d2*Laplacian - alpha + K_tau diag(weight)`, where `weight` samples
/// `dG/dv(y, U1(y), 0)` and `K_tau` is the kernel's deepest age.
pub fn lambda1_linear(
    grid: &GridSpec,
    d2: f64,
    alpha: &Alpha,
    kernel: &Kernel,
    weight: &Field,
) -> Result<EigenResult> {
    let op = nonlocal_op(grid, d2, alpha, kernel, weight, 1.0)?;
    let dx = grid.dx();
    let shift = op.shift(2.0 * d2 / (dx * dx));
    principal_eigen(&op, shift, None, "shifted-power")
}

/// Delayed invasion threshold: solves `s = Lambda(s)` by bisection, where
/// `Lambda(s)` is the principal eigenvalue of
/// `d2*Laplacian - alpha + e^{-s tau} K_tau diag(weight)`.
///
/// `Lambda(s) - s` is strictly decreasing, so the root is unique; its sign
/// equals the sign of `Lambda(0)`, i.e. of [`lambda1_linear`].
pub fn s1_delayed(
    grid: &GridSpec,
    d2: f64,
    alpha: &Alpha,
    kernel: &Kernel,
    weight: &Field,
    tau: f64,
) -> Result<EigenResult> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(ModelError::input(format!("tau must be >= 0, got {tau}")));
    }
    let dx = grid.dx();
    let two_d = 2.0 * d2 / (dx * dx);
    let mut warm: Option<Vec<f64>> = None;
    let mut evals = 0usize;
    let mut eig_at = |s: f64, warm: &mut Option<Vec<f64>>| -> Result<EigenResult> {
        let factor = (-s * tau).exp();
        let op = nonlocal_op(grid, d2, alpha, kernel, weight, factor)?;
        let shift = op.shift(two_d);
        let r = principal_eigen(&op, shift, warm.as_deref(), "delayed-fixed-point")?;
        *warm = Some(r.eigenfunction.values().to_vec());
        evals += 1;
        Ok(r)
    };

    let lambda0 = eig_at(0.0, &mut warm)?;
    if tau == 0.0 {
        return Ok(lambda0);
    }
    let mut lo = -alpha.max() - 1.0;
    let mut hi = lambda0.value + 1.0;
    let f = |r: &EigenResult, s: f64| r.value - s;
    let mut f_lo = {
        let r = eig_at(lo, &mut warm)?;
        f(&r, lo)
    };
    let mut f_hi = {
        let r = eig_at(hi, &mut warm)?;
        f(&r, hi)
    };
    // expand whichever endpoint misses its sign
    for _ in 0..64 {
        if f_lo > 0.0 {
            break;
        }
        lo = 2.0 * lo - 1.0;
        f_lo = f(&eig_at(lo, &mut warm)?, lo);
    }
    for _ in 0..64 {
        if f_hi < 0.0 {
            break;
        }
        hi = 2.0 * hi + 1.0;
        f_hi = f(&eig_at(hi, &mut warm)?, hi);
    }
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(ModelError::Numerical(format!(
            "could not bracket the delayed eigenvalue: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    while hi - lo > S1_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(&eig_at(mid, &mut warm)?, mid);
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let at_root = eig_at(s, &mut warm)?;
    let residual = (at_root.value - s).abs();
    Ok(EigenResult {
        value: s,
        eigenfunction: at_root.eigenfunction,
        method: "delayed-fixed-point",
        residual,
        iterations: evals,
    })
}

/// Closed-form invasion threshold of the homogeneous logistic
/// specialization: `-alpha + beta*b / (d e^{alpha tau})`.
pub fn lambda1_closed_form(alpha: f64, beta: f64, b: f64, d: f64, tau: f64) -> Result<f64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(ModelError::input(format!("d must be > 0, got {d}")));
    }
    for (name, v) in [("alpha", alpha), ("beta", beta), ("b", b), ("tau", tau)] {
        if !v.is_finite() {
            return Err(ModelError::input(format!("{name} must be finite, got {v}")));
        }
    }
    Ok(-alpha + beta * b * (-alpha * tau).exp() / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::build_kernel_spectral;

    fn neumann(n: usize) -> GridSpec {
        GridSpec::neumann_pi(n).unwrap()
    }

    #[test]
    fn sigma1_homogeneous_equals_b() {
        let grid = neumann(129);
        for b in [-1.0, 0.5, 2.0] {
            for d1 in [0.0, 0.1, 1.0] {
                let f0 = Field::constant(129, b);
                let r = sigma1(&grid, d1, &f0).unwrap();
                assert!(
                    (r.value - b).abs() < 1e-6,
                    "b={b}, d1={d1}: sigma1 = {}",
                    r.value
                );
                // eigenfunction is the constant
                assert!(r.eigenfunction.max() - r.eigenfunction.min() < 1e-8);
                assert!(r.eigenfunction.min() > 0.0);
            }
        }
    }

    #[test]
    fn sigma1_zero_growth() {
        let grid = neumann(65);
        let r = sigma1(&grid, 0.5, &Field::constant(65, 0.0)).unwrap();
        assert!(r.value.abs() < 1e-8);
    }

    #[test]
    fn sigma1_variable_growth_bounds() {
        // principal eigenvalue sits between min F and max F
        let grid = neumann(65);
        let f0 = Field::from_fn(&grid, |x| 0.5 + 0.3 * x.cos()).unwrap();
        let r = sigma1(&grid, 0.1, &f0).unwrap();
        assert!(r.value > 0.2 && r.value < 0.8, "sigma1 = {}", r.value);
        assert!(r.eigenfunction.min() > 0.0);
        assert!(r.residual < 1e-8);
    }

    fn kernel_at(grid: &GridSpec, d2: f64, alpha: f64, tau: f64) -> Kernel {
        let ages = if tau > 0.0 { vec![0.0, tau] } else { vec![0.0] };
        build_kernel_spectral(grid, d2, alpha, &ages, 64).unwrap()
    }

    #[test]
    fn lambda1_zero_weight_is_pure_decay() {
        let grid = neumann(65);
        let alpha = 0.7;
        let k = kernel_at(&grid, 0.5, alpha, 1.0);
        let r =
            lambda1_linear(&grid, 0.5, &Alpha::Constant(alpha), &k, &Field::constant(65, 0.0))
                .unwrap();
        assert!((r.value - -alpha).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn lambda1_homogeneous_matches_closed_form() {
        let grid = neumann(65);
        let (alpha, beta, b, d, d2) = (1.0, 2.0, 1.0, 1.0, 0.5);
        for tau in [0.0, 0.5, 1.0, 2.0] {
            let k = kernel_at(&grid, d2, alpha, tau);
            let weight = Field::constant(65, beta * b / d);
            let r = lambda1_linear(&grid, d2, &Alpha::Constant(alpha), &k, &weight).unwrap();
            let closed = lambda1_closed_form(alpha, beta, b, d, tau).unwrap();
            assert!((r.value - closed).abs() < 1e-6, "tau={tau}: {} vs {closed}", r.value);
            assert!(r.eigenfunction.min() > 0.0);
        }
    }

    #[test]
    fn s1_at_zero_delay_equals_lambda1() {
        let grid = neumann(65);
        let (alpha, d2) = (1.0, 0.5);
        let k = kernel_at(&grid, d2, alpha, 0.0);
        let weight = Field::constant(65, 1.7);
        let lam = lambda1_linear(&grid, d2, &Alpha::Constant(alpha), &k, &weight).unwrap();
        let s = s1_delayed(&grid, d2, &Alpha::Constant(alpha), &k, &weight, 0.0).unwrap();
        assert!((s.value - lam.value).abs() < 1e-10);
    }

    #[test]
    fn s1_homogeneous_matches_scalar_root() {
        // the homogeneous fixed point solves s = -alpha + c e^{-(alpha+s) tau}
        let grid = neumann(65);
        let (alpha, d2, tau) = (0.8, 0.5, 0.7);
        let c = 2.4; // beta*b/d
        let k = kernel_at(&grid, d2, alpha, tau);
        let weight = Field::constant(65, c);
        let s = s1_delayed(&grid, d2, &Alpha::Constant(alpha), &k, &weight, tau).unwrap();

        // independent scalar bisection on the transcendental equation
        let g = |s: f64| -alpha + c * (-(alpha + s) * tau).exp() - s;
        let (mut lo, mut hi) = (-alpha - 1.0, 10.0);
        assert!(g(lo) > 0.0 && g(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let scalar_root = 0.5 * (lo + hi);
        assert!(
            (s.value - scalar_root).abs() < 1e-8,
            "{} vs {scalar_root}",
            s.value
        );
    }

    #[test]
    fn s1_sign_matches_lambda1_sign() {
        let grid = neumann(33);
        let d2 = 0.5;
        for (alpha, c, tau) in [(1.0, 0.3, 0.5), (1.0, 3.0, 0.5), (0.5, 0.82, 1.5), (2.0, 2.5, 0.25)]
        {
            let k = kernel_at(&grid, d2, alpha, tau);
            let weight = Field::constant(33, c);
            let lam = lambda1_linear(&grid, d2, &Alpha::Constant(alpha), &k, &weight).unwrap();
            if lam.value.abs() < 1e-4 {
                continue;
            }
            let s = s1_delayed(&grid, d2, &Alpha::Constant(alpha), &k, &weight, tau).unwrap();
            assert_eq!(
                s.value > 0.0,
                lam.value > 0.0,
                "alpha={alpha}, c={c}, tau={tau}: s1={}, lambda1={}",
                s.value,
                lam.value
            );
        }
    }

    #[test]
    fn closed_form_examples() {
        assert!((lambda1_closed_form(1.0, 2.0, 1.0, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        // threshold boundary: beta*b = alpha*d*e^{alpha tau}
        let (alpha, d, tau, b): (f64, f64, f64, f64) = (0.7, 1.3, 0.9, 1.1);
        let beta = alpha * d * (alpha * tau).exp() / b;
        assert!(lambda1_closed_form(alpha, beta, b, d, tau).unwrap().abs() < 1e-14);
        let v = lambda1_closed_form(0.5, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert!((v - (-0.5 + 0.5 * (-0.5f64).exp())).abs() < 1e-15);
        assert!((v - -0.196_734_670_143_683_45).abs() < 1e-12);
        assert!(lambda1_closed_form(1.0, 1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn closed_form_monotonicity() {
        // increasing in beta and b, decreasing in alpha and tau (for beta*b > 0)
        let h = 1e-6;
        let at = |alpha: f64, beta: f64, b: f64, tau: f64| {
            lambda1_closed_form(alpha, beta, b, 2.0, tau).unwrap()
        };
        let base = (1.0, 2.0, 1.5, 0.8);
        let (a0, be0, b0, t0) = base;
        assert!(at(a0, be0 + h, b0, t0) > at(a0, be0, b0, t0));
        assert!(at(a0, be0, b0 + h, t0) > at(a0, be0, b0, t0));
        assert!(at(a0 + h, be0, b0, t0) < at(a0, be0, b0, t0));
        assert!(at(a0, be0, b0, t0 + h) < at(a0, be0, b0, t0));
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let grid = neumann(33);
        let k = kernel_at(&grid, 0.5, 1.0, 1.0);
        let other = neumann(65);
        let w = Field::constant(65, 1.0);
        assert!(lambda1_linear(&other, 0.5, &Alpha::Constant(1.0), &k, &w).is_err());
        let negw = Field::constant(33, -1.0);
        assert!(lambda1_linear(&grid, 0.5, &Alpha::Constant(1.0), &k, &negw).is_err());
        assert!(sigma1(&grid, -0.1, &Field::constant(33, 1.0)).is_err());
    }
}
