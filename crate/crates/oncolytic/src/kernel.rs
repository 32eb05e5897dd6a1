//! Discretized Green's function of the diffusion-decay operator
//! `d2*Laplacian - alpha(x)` under the virus boundary condition.
//!
//! The kernel `Gamma(x, y, a)` propagates an infection source for an
//! infection age `a`; the model uses it for the nonlocal delayed infection
//! term and for the distributed age integral defining the infected-cell
//! field. Two independent constructions are provided:
//!
//! - [`build_kernel_spectral`]: truncated cosine eigenfunction series, exact
//!   boundary treatment, restricted to Neumann boundaries and constant
//!   `alpha`. The series includes the constant mode `e^{-alpha a} / L`,
//!   without which the kernel could not reproduce the row-sum identity
//!   `integral Gamma(x, y, a) dy = e^{-alpha a}`.
//! - [`build_kernel_semigroup`]: Crank-Nicolson propagator of the generator
//!   with ghost-point Robin rows, valid for per-node `alpha` and any Robin
//!   coefficients.
//!
//! A kernel stores one matrix per rung of an age ladder `0 = a_0 < ... <
//! a_m`. Entry `K_a[i][j]` approximates `Gamma(x_i, y_j, a)`; applying the
//! kernel weighs columns by the trapezoid rule, so the age-zero matrix is
//! the discrete delta `diag(1/w)`.

use std::io::Write;
use std::path::Path;

use crate::error::{ModelError, Result};
use crate::grid::{Field, GridSpec};
use crate::operators::{laplacian, ImplicitStep, Tridiag, Workspace};
use crate::params::Alpha;

/// Which construction produced a kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelRoute {
    Spectral { modes: usize },
    Semigroup { substeps: usize },
}

/// Discretized `Gamma(x, y, a)` on an age ladder.
#[derive(Debug, Clone)]
pub struct Kernel {
    grid: GridSpec,
    ages: Vec<f64>,
    /// One `n x n` row-major matrix per age.
    mats: Vec<Vec<f64>>,
    route: KernelRoute,
}

impl Kernel {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn ages(&self) -> &[f64] {
        &self.ages
    }

    pub fn n_ages(&self) -> usize {
        self.ages.len()
    }

    pub fn route(&self) -> &KernelRoute {
        &self.route
    }

    /// Index of the deepest age (the replication delay in simulation use).
    pub fn last_age_index(&self) -> usize {
        self.ages.len() - 1
    }

    /// Raw matrix at one age, row-major.
    pub fn matrix(&self, age_index: usize) -> &[f64] {
        &self.mats[age_index]
    }

    /// Quadrature-weighted action `(K_a f)(x_i) = sum_j K[i][j] w_j f_j`,
    /// approximating `integral Gamma(x_i, y, a) f(y) dy`.
    pub fn apply(&self, age_index: usize, f: &Field) -> Result<Field> {
        let n = self.grid.n_points();
        if age_index >= self.ages.len() {
            return Err(ModelError::input(format!(
                "age index {age_index} out of range ({} ages)",
                self.ages.len()
            )));
        }
        if f.len() != n {
            return Err(ModelError::input(format!(
                "field has {} nodes, kernel grid has {n}",
                f.len()
            )));
        }
        let mut out = vec![0.0; n];
        self.apply_weighted(age_index, f.values(), &mut out);
        Field::from_values(out)
    }

    /// Hot-loop variant of [`apply`](Self::apply): multiplies by the
    /// quadrature weights internally, no allocation, no checks.
    pub(crate) fn apply_weighted(&self, age_index: usize, f: &[f64], out: &mut [f64]) {
        let n = self.grid.n_points();
        let w = self.grid.weights();
        let m = &self.mats[age_index];
        for i in 0..n {
            let row = &m[i * n..(i + 1) * n];
            let mut acc = 0.0;
            for j in 0..n {
                acc += row[j] * w[j] * f[j];
            }
            out[i] = acc;
        }
    }

    /// Operator sup-norm at one age: `max_i sum_j |K[i][j]| w_j`.
    pub fn op_norm(&self, age_index: usize) -> f64 {
        let n = self.grid.n_points();
        let w = self.grid.weights();
        let m = &self.mats[age_index];
        (0..n)
            .map(|i| (0..n).map(|j| m[i * n + j].abs() * w[j]).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Smallest matrix entry at one age.
    pub fn min_entry(&self, age_index: usize) -> f64 {
        self.mats[age_index].iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }

    /// Largest asymmetry `|K[i][j] - K[j][i]|` at one age.
    pub fn max_asymmetry(&self, age_index: usize) -> f64 {
        let n = self.grid.n_points();
        let m = &self.mats[age_index];
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((m[i * n + j] - m[j * n + i]).abs());
            }
        }
        worst
    }

    /// Dump one CSV matrix per age into `dir`: header row of y-coordinates,
    /// then the kernel rows.
    pub fn write_csv(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let n = self.grid.n_points();
        for (k, age) in self.ages.iter().enumerate() {
            let path = dir.join(format!("kernel_age_{k:03}.csv"));
            let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
            let header: Vec<String> =
                (0..n).map(|j| format!("{:.16e}", self.grid.x(j))).collect();
            writeln!(out, "{}", header.join(","))?;
            let m = &self.mats[k];
            for i in 0..n {
                let row: Vec<String> =
                    (0..n).map(|j| format!("{:.16e}", m[i * n + j])).collect();
                writeln!(out, "{}", row.join(","))?;
            }
            let _ = age;
        }
        Ok(())
    }
}

fn validate_ages(ages: &[f64]) -> Result<()> {
    if ages.is_empty() {
        return Err(ModelError::input("age ladder is empty"));
    }
    if ages[0] != 0.0 {
        return Err(ModelError::input(format!("age ladder must start at 0, got {}", ages[0])));
    }
    for pair in ages.windows(2) {
        if !(pair[1].is_finite() && pair[1] > pair[0]) {
            return Err(ModelError::input(format!(
                "age ladder must be strictly ascending and finite: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// The discrete delta matrix `diag(1/w)`: the exact age-zero kernel under
/// the quadrature-weighted application.
fn delta_matrix(grid: &GridSpec) -> Vec<f64> {
    let n = grid.n_points();
    let w = grid.weights();
    let mut m = vec![0.0; n * n];
    for j in 0..n {
        m[j * n + j] = 1.0 / w[j];
    }
    m
}

/// Cosine-series kernel for Neumann boundaries and constant `alpha`.
///
/// `Gamma(x, y, a) = e^{-alpha a}/L
///                 + (2/L) sum_{k=1}^{modes} e^{-((k pi / L)^2 d2 + alpha) a}
///                   cos(k pi x / L) cos(k pi y / L)`.
pub fn build_kernel_spectral(
    grid: &GridSpec,
    d2: f64,
    alpha: f64,
    ages: &[f64],
    modes: usize,
) -> Result<Kernel> {
    validate_ages(ages)?;
    if grid.eta2() != [0.0, 0.0] {
        return Err(ModelError::unsupported(
            "spectral kernel requires Neumann virus boundaries (eta2 = 0); \
             use the semigroup builder for Robin coefficients",
        ));
    }
    if modes < 8 {
        return Err(ModelError::input(format!("need at least 8 modes, got {modes}")));
    }
    if !(d2.is_finite() && d2 >= 0.0) {
        return Err(ModelError::input(format!("d2 must be finite and >= 0, got {d2}")));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(ModelError::input(format!("alpha must be positive, got {alpha}")));
    }

    let n = grid.n_points();
    let len = grid.length();
    // cos(k pi x_i / L) table, k = 1..=modes
    let cos_table: Vec<Vec<f64>> = (1..=modes)
        .map(|k| {
            let freq = k as f64 * std::f64::consts::PI / len;
            (0..n).map(|i| (freq * grid.x(i)).cos()).collect()
        })
        .collect();

    let mut mats = Vec::with_capacity(ages.len());
    for &a in ages {
        if a == 0.0 {
            mats.push(delta_matrix(grid));
            continue;
        }
        let mut m = vec![0.0; n * n];
        let base = (-alpha * a).exp() / len;
        for e in &mut m {
            *e = base;
        }
        for (k, cos_k) in cos_table.iter().enumerate() {
            let freq = (k + 1) as f64 * std::f64::consts::PI / len;
            let amp = (2.0 / len) * (-(freq * freq * d2 + alpha) * a).exp();
            if amp < 1e-300 {
                break;
            }
            for i in 0..n {
                let ci = amp * cos_k[i];
                let row = &mut m[i * n..(i + 1) * n];
                for j in 0..n {
                    row[j] += ci * cos_k[j];
                }
            }
        }
        mats.push(m);
    }

    Ok(Kernel {
        grid: grid.clone(),
        ages: ages.to_vec(),
        mats,
        route: KernelRoute::Spectral { modes },
    })
}

/// Propagator kernel: advances the discrete delta through
/// `dW/da = d2*Laplacian W - alpha(x) W` with ghost-point Robin rows,
/// Crank-Nicolson substeps per age interval, composed across the ladder.
///
/// The first interval starts from rough (delta) data, where plain
/// Crank-Nicolson leaves slowly decaying high-frequency oscillations. The
/// first substep is therefore advanced by a geometric cascade of
/// backward-Euler steps (doubling sizes summing to one substep, Rannacher
/// startup); each rough mode meets at least one strongly damping step near
/// its own time scale, and the cascade's first-order error stays below the
/// scheme's second-order truncation. All later substeps are plain
/// Crank-Nicolson.
pub fn build_kernel_semigroup(
    grid: &GridSpec,
    d2: f64,
    alpha: &Alpha,
    ages: &[f64],
    substeps: usize,
) -> Result<Kernel> {
    validate_ages(ages)?;
    if substeps < 1 {
        return Err(ModelError::input("need at least 1 substep"));
    }
    if !(d2.is_finite() && d2 >= 0.0) {
        return Err(ModelError::input(format!("d2 must be finite and >= 0, got {d2}")));
    }
    alpha.validate()?;
    let n = grid.n_points();
    let alpha_nodes = alpha.values(n)?;
    let generator: Tridiag = laplacian(grid, grid.eta2()).scaled(d2).minus_diag(&alpha_nodes);

    // columns of the propagator, advanced in place
    let w = grid.weights();
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut c = vec![0.0; n];
            c[j] = 1.0 / w[j];
            c
        })
        .collect();

    let mut mats = Vec::with_capacity(ages.len());
    let mut work = Workspace::new(n);
    for (r, pair) in std::iter::once(None).chain(ages.windows(2).map(Some)).enumerate() {
        if let Some(pair) = pair {
            let delta = (pair[1] - pair[0]) / substeps as f64;
            let cn = ImplicitStep::crank_nicolson(&generator, delta);
            let first_interval = r == 1;
            for s in 0..substeps {
                if first_interval && s == 0 {
                    // geometric startup: h, 2h, 4h, ... summing to delta
                    const STAGES: u32 = 12;
                    let h0 = delta / (2f64.powi(STAGES as i32) - 1.0);
                    let stages: Vec<ImplicitStep> = (0..STAGES)
                        .map(|j| {
                            ImplicitStep::backward_euler(&generator, h0 * 2f64.powi(j as i32))
                        })
                        .collect();
                    for col in &mut cols {
                        for stage in &stages {
                            stage.advance(col, None, &mut work)?;
                        }
                    }
                } else {
                    for col in &mut cols {
                        cn.advance(col, None, &mut work)?;
                    }
                }
            }
        }
        // gather row-major matrix from the columns
        let mut m = vec![0.0; n * n];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                m[i * n + j] = col[i];
            }
        }
        mats.push(m);
    }

    Ok(Kernel {
        grid: grid.clone(),
        ages: ages.to_vec(),
        mats,
        route: KernelRoute::Semigroup { substeps },
    })
}

/// Pick the spectral route when it applies (Neumann virus boundary and
/// constant `alpha`), the semigroup route otherwise.
pub fn build_kernel_auto(
    grid: &GridSpec,
    d2: f64,
    alpha: &Alpha,
    ages: &[f64],
    modes: usize,
    substeps: usize,
) -> Result<Kernel> {
    match alpha.as_constant() {
        Some(a) if grid.eta2() == [0.0, 0.0] => build_kernel_spectral(grid, d2, a, ages, modes),
        _ => build_kernel_semigroup(grid, d2, alpha, ages, substeps),
    }
}
