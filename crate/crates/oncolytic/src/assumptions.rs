//! Numeric validator for the structural conditions the model places on the
//! growth and incidence families.
//!
//! The six conditions, checked on a sample lattice over `[0, u_max] x [0, v_max]`:
//!
//! 1. `F(0) > 0` and `F(K0) < 0` for some `K0 <= u_max` (a carrying capacity exists);
//! 2. `F` is decreasing;
//! 3. `G(0, v) = G(u, 0) = 0`;
//! 4. both partial derivatives of `G` are positive on the open quadrant;
//! 5. `G(u, v) <= dG/dv(u, 0) * v` (incidence is dominated by its linearization);
//! 6. `G(u, v) / u` is bounded and nondecreasing in `u`.
//!
//! Checks are sampled, not symbolic: derivatives use finite differences with
//! step `1e-6 * scale` and sign tests carry a `1e-8` tolerance. Failures are
//! reported as data, never as errors, so the validator can be pointed at
//! arbitrary parameter choices.

use crate::family::{GrowthFamily, IncidenceFamily};

/// Sign-test tolerance.
const TOL: f64 = 1e-8;

/// Result of one condition check.
#[derive(Debug, Clone)]
pub struct AssumptionItem {
    /// Short name of the condition.
    pub name: &'static str,
    pub passed: bool,
    /// Signed slack of the worst sampled point; negative values quantify the
    /// violation.
    pub margin: f64,
    /// `(u, v)` of the worst violation when the check fails (the `v`
    /// component is 0 for growth-only conditions).
    pub witness: Option<(f64, f64)>,
}

/// Full six-item report plus the sampled carrying capacity.
#[derive(Debug, Clone)]
pub struct AssumptionReport {
    pub items: [AssumptionItem; 6],
    /// First sampled `u` with `F(u) < 0`, when one exists below `u_max`.
    pub k0: Option<f64>,
}

impl AssumptionReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

impl std::fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (idx, item) in self.items.iter().enumerate() {
            let status = if item.passed { "PASS" } else { "FAIL" };
            write!(f, "({}) {:<28} {}  margin {:+.3e}", idx + 1, item.name, status, item.margin)?;
            if let Some((u, v)) = item.witness {
                write!(f, "  witness (u={u:.6e}, v={v:.6e})")?;
            }
            writeln!(f)?;
        }
        match self.k0 {
            Some(k0) => writeln!(f, "sampled K0 = {k0:.6e}"),
            None => writeln!(f, "no K0 found below u_max"),
        }
    }
}

/// Validate the shipped family pair. See [`validate_assumption_fns`].
pub fn validate_assumptions(
    growth: &GrowthFamily,
    incidence: &IncidenceFamily,
    u_max: f64,
    v_max: f64,
    samples: usize,
) -> AssumptionReport {
    validate_assumption_fns(|u| growth.rate(u), |u, v| incidence.rate(u, v), u_max, v_max, samples)
}

/// Validate an arbitrary `(F, G)` pair given as plain functions.
///
/// `samples` points per axis, at least 16. Never aborts: every violation is
/// recorded in the report with its worst witness.
pub fn validate_assumption_fns(
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64, f64) -> f64,
    u_max: f64,
    v_max: f64,
    samples: usize,
) -> AssumptionReport {
    assert!(u_max > 0.0 && v_max > 0.0, "sample bounds must be positive");
    assert!(samples >= 16, "need at least 16 samples per axis");

    let u_grid = linspace(0.0, u_max, samples);
    let v_grid = linspace(0.0, v_max, samples);
    // Positive sub-lattices for derivative checks; log-spaced low end so
    // behavior as u -> 0 is exercised.
    let u_pos = positive_lattice(u_max, samples);
    let v_pos: Vec<f64> = v_grid.iter().copied().filter(|v| *v > 0.0).collect();
    let h_u = 1e-6 * u_max.max(1.0);
    let h_v = 1e-6 * v_max.max(1.0);

    let (item1, k0) = check_carrying_capacity(&f, u_max, samples);
    let item2 = check_growth_decreasing(&f, &u_grid);
    let item3 = check_vanishes_on_axes(&g, &u_grid, &v_grid);
    let item4 = check_partials_positive(&g, &u_pos, &v_pos, h_u, h_v);
    let item5 = check_linear_bound(&g, &u_pos, &v_pos, h_v);
    let item6 = check_ratio_monotone(&g, &u_pos, &v_pos, h_u);

    AssumptionReport { items: [item1, item2, item3, item4, item5, item6], k0 }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn positive_lattice(max: f64, samples: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = linspace(0.0, max, samples).into_iter().filter(|u| *u > 0.0).collect();
    // log-spaced tail toward zero
    for k in 1..=6 {
        pts.push(max * 10f64.powi(-k));
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts
}

fn check_carrying_capacity(
    f: &impl Fn(f64) -> f64,
    u_max: f64,
    samples: usize,
) -> (AssumptionItem, Option<f64>) {
    let name = "carrying-capacity";
    let f0 = f(0.0);
    // log-spaced scan; the first sign change fixes K0
    let mut k0 = None;
    let lo = u_max * 1e-8;
    let ratio = (u_max / lo).powf(1.0 / (samples - 1) as f64);
    let mut u = lo;
    for _ in 0..samples {
        if f(u) < 0.0 {
            k0 = Some(u);
            break;
        }
        u *= ratio;
    }
    if f0 <= TOL {
        let item =
            AssumptionItem { name, passed: false, margin: f0, witness: Some((0.0, 0.0)) };
        return (item, k0);
    }
    match k0 {
        Some(k) => {
            let margin = f0.min(-f(k));
            (AssumptionItem { name, passed: true, margin, witness: None }, k0)
        }
        None => {
            let item = AssumptionItem {
                name,
                passed: false,
                margin: -f(u_max),
                witness: Some((u_max, 0.0)),
            };
            (item, None)
        }
    }
}

fn check_growth_decreasing(f: &impl Fn(f64) -> f64, u_grid: &[f64]) -> AssumptionItem {
    let name = "growth-decreasing";
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for pair in u_grid.windows(2) {
        let drop = f(pair[0]) - f(pair[1]);
        if drop < worst {
            worst = drop;
            witness = Some((pair[1], 0.0));
        }
    }
    let strict = f(u_grid[0]) - f(*u_grid.last().unwrap()) > TOL;
    let passed = worst >= -TOL && strict;
    AssumptionItem { name, passed, margin: worst, witness: if passed { None } else { witness } }
}

fn check_vanishes_on_axes(
    g: &impl Fn(f64, f64) -> f64,
    u_grid: &[f64],
    v_grid: &[f64],
) -> AssumptionItem {
    let name = "incidence-vanishes-on-axes";
    let mut worst = 0.0f64;
    let mut witness = None;
    for &u in u_grid {
        let val = g(u, 0.0).abs();
        if val > worst {
            worst = val;
            witness = Some((u, 0.0));
        }
    }
    for &v in v_grid {
        let val = g(0.0, v).abs();
        if val > worst {
            worst = val;
            witness = Some((0.0, v));
        }
    }
    let passed = worst <= TOL;
    AssumptionItem {
        name,
        passed,
        margin: -worst,
        witness: if passed { None } else { witness },
    }
}

fn check_partials_positive(
    g: &impl Fn(f64, f64) -> f64,
    u_pos: &[f64],
    v_pos: &[f64],
    h_u: f64,
    h_v: f64,
) -> AssumptionItem {
    let name = "incidence-partials-positive";
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for &u in u_pos {
        for &v in v_pos {
            // centered difference, clamped at the axis
            let (u_lo, v_lo) = ((u - h_u).max(0.0), (v - h_v).max(0.0));
            let du = (g(u + h_u, v) - g(u_lo, v)) / (u + h_u - u_lo);
            let dv = (g(u, v + h_v) - g(u, v_lo)) / (v + h_v - v_lo);
            let m = du.min(dv);
            if m < worst {
                worst = m;
                witness = Some((u, v));
            }
        }
    }
    let passed = worst > 0.0;
    AssumptionItem { name, passed, margin: worst, witness: if passed { None } else { witness } }
}

fn check_linear_bound(
    g: &impl Fn(f64, f64) -> f64,
    u_pos: &[f64],
    v_pos: &[f64],
    h_v: f64,
) -> AssumptionItem {
    let name = "incidence-linear-bound";
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for &u in u_pos {
        // second-order one-sided difference for dG/dv at v = 0
        let slope = (4.0 * g(u, h_v) - g(u, 2.0 * h_v) - 3.0 * g(u, 0.0)) / (2.0 * h_v);
        for &v in v_pos {
            let slack = slope * v - g(u, v);
            if slack < worst {
                worst = slack;
                witness = Some((u, v));
            }
        }
    }
    let passed = worst >= -TOL;
    AssumptionItem { name, passed, margin: worst, witness: if passed { None } else { witness } }
}

fn check_ratio_monotone(
    g: &impl Fn(f64, f64) -> f64,
    u_pos: &[f64],
    v_pos: &[f64],
    h_u: f64,
) -> AssumptionItem {
    let name = "incidence-ratio-monotone";
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for &u in u_pos {
        let h = h_u.min(0.5 * u);
        for &v in v_pos {
            let ratio_hi = g(u + h, v) / (u + h);
            let ratio_lo = g(u - h, v) / (u - h);
            if !ratio_hi.is_finite() || !ratio_lo.is_finite() {
                return AssumptionItem {
                    name,
                    passed: false,
                    margin: f64::NEG_INFINITY,
                    witness: Some((u, v)),
                };
            }
            let deriv = (ratio_hi - ratio_lo) / (2.0 * h);
            if deriv < worst {
                worst = deriv;
                witness = Some((u, v));
            }
        }
    }
    let passed = worst >= -TOL;
    AssumptionItem { name, passed, margin: worst, witness: if passed { None } else { witness } }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_pair_passes_everything() {
        let f = GrowthFamily::Logistic { b: 1.0, d: 1.0 };
        let g = IncidenceFamily::HollingII { beta: 1.0, h: 1.0 };
        let report = validate_assumptions(&f, &g, 10.0, 10.0, 32);
        assert!(report.all_passed(), "{report}");
        let k0 = report.k0.expect("K0 exists");
        assert!(k0 <= 10.0 && f.rate(k0) < 0.0);
    }

    #[test]
    fn all_family_combinations_pass() {
        let growths = [
            GrowthFamily::Logistic { b: 0.5, d: 0.3 },
            GrowthFamily::Gompertz { b: 1.0, d: 0.8, floor: 1e-8 },
        ];
        let incidences = [
            IncidenceFamily::MassAction { beta: 2.0 },
            IncidenceFamily::HollingII { beta: 0.7, h: 2.5 },
        ];
        for f in &growths {
            for g in &incidences {
                let report = validate_assumptions(f, g, 10.0, 10.0, 32);
                assert!(report.all_passed(), "{f:?} + {g:?}:\n{report}");
            }
        }
    }

    #[test]
    fn negative_b_fails_carrying_capacity_at_zero() {
        let f = GrowthFamily::Logistic { b: -1.0, d: 1.0 };
        let g = IncidenceFamily::MassAction { beta: 1.0 };
        let report = validate_assumptions(&f, &g, 10.0, 10.0, 32);
        let item = &report.items[0];
        assert!(!item.passed);
        assert_eq!(item.witness, Some((0.0, 0.0)));
        assert!((item.margin - -1.0).abs() < 1e-12); // F(0) = b
    }

    #[test]
    fn quadratic_incidence_fails_linear_bound() {
        // G = beta*u*v^2 has dG/dv(u, 0) = 0 while G > 0 inside the quadrant.
        let report =
            validate_assumption_fns(|u| 1.0 - u, |u, v| 0.5 * u * v * v, 10.0, 10.0, 32);
        let item = &report.items[4];
        assert!(!item.passed, "{report}");
        assert!(item.margin < 0.0);
        let (u, v) = item.witness.expect("violation carries a witness");
        assert!(u > 0.0 && v > 0.0);
    }

    #[test]
    fn incidence_monotone_in_each_argument() {
        // condition (4) holds on the lattice for both shipped incidences
        for g in [
            IncidenceFamily::MassAction { beta: 1.3 },
            IncidenceFamily::HollingII { beta: 1.3, h: 0.4 },
        ] {
            let us = linspace(0.0, 10.0, 24);
            let vs = linspace(0.0, 10.0, 24);
            for win_u in us.windows(2) {
                for win_v in vs.windows(2) {
                    assert!(g.rate(win_u[1], vs[12]) >= g.rate(win_u[0], vs[12]));
                    assert!(g.rate(us[12], win_v[1]) >= g.rate(us[12], win_v[0]));
                }
            }
        }
    }

    #[test]
    fn holling_dominated_by_mass_action() {
        // condition (5) with slope beta*u
        let g = IncidenceFamily::HollingII { beta: 2.0, h: 1.5 };
        for &u in &linspace(0.0, 10.0, 33) {
            for &v in &linspace(0.0, 10.0, 33) {
                assert!(g.rate(u, v) <= 2.0 * u * v + 1e-12);
            }
        }
    }

    #[test]
    fn constant_growth_fails_strict_decrease() {
        let report = validate_assumption_fns(|_| 0.5, |u, v| u * v, 10.0, 10.0, 32);
        assert!(!report.items[1].passed);
    }
}
