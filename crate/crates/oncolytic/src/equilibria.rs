//! Constant steady states, regime classification, and persistence lower
//! bounds for the logistic/Holling specialization of the model (constant
//! virus death rate, Neumann-style homogeneous states).
//!
//! The invasion index `ratio = beta*b / (alpha*d*e^{alpha tau})` organizes
//! everything: below 1 the virus dies out of the tumor-only state, above 1
//! a unique coexistence state appears and the dynamics are uniformly
//! persistent.
//!
//! Two coefficient modes are exposed for the coexistence root. `Exact`
//! derives it by bisection on the steady-state residual of the governing
//! system, whose crowding term is `u * (b - d*(u + I*))` with
//! `I* = (beta/(alpha kappa))(1 - e^{-alpha tau}) uv/(1+hv)`. `Paper`
//! reproduces a published quadratic whose coefficients drop the factor
//! `d/alpha` on the `I*` term and scale inconsistently between rows; the
//! two modes coincide at `tau = 0` and differ measurably otherwise.
//! Residuals are always evaluated against the exact equations so the
//! discrepancy is visible data rather than a silent choice.

use crate::error::{ModelError, Result};
use crate::family::{GrowthFamily, IncidenceFamily};
use crate::params::ModelParams;
use crate::spectral::lambda1_closed_form;

/// How the coexistence root is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientMode {
    /// Bisection on the exact steady-state residual.
    Exact,
    /// The printed quadratic coefficients, kept for comparison.
    Paper,
}

/// Scalar parameters of the specialization.
#[derive(Debug, Clone, Copy)]
pub struct LogisticHolling {
    pub b: f64,
    pub d: f64,
    pub beta: f64,
    pub h: f64,
    pub alpha: f64,
    pub tau: f64,
    pub kappa: f64,
}

impl LogisticHolling {
    /// Extract the specialization from a full parameter set; errors when
    /// the families or the death rate fall outside it.
    pub fn from_params(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let (b, d) = match params.growth {
            GrowthFamily::Logistic { b, d } => (b, d),
            ref other => {
                return Err(ModelError::input(format!(
                    "constant-equilibrium analysis needs logistic growth, got {other:?}"
                )))
            }
        };
        let (beta, h) = match params.incidence {
            IncidenceFamily::MassAction { beta } => (beta, 0.0),
            IncidenceFamily::HollingII { beta, h } => (beta, h),
        };
        let alpha = params.alpha.as_constant().ok_or_else(|| {
            ModelError::input("constant-equilibrium analysis needs a constant alpha")
        })?;
        if d <= 0.0 {
            return Err(ModelError::input(format!("logistic d must be > 0 here, got {d}")));
        }
        Ok(LogisticHolling { b, d, beta, h, alpha, tau: params.tau, kappa: params.kappa })
    }

    /// The invasion index `beta*b / (alpha*d*e^{alpha tau})`.
    pub fn ratio(&self) -> f64 {
        self.beta * self.b / (self.alpha * self.d * (self.alpha * self.tau).exp())
    }
}

/// One constant state with its exact-equation residuals.
#[derive(Debug, Clone, Copy)]
pub struct Equilibrium {
    pub u: f64,
    pub v: f64,
    pub residual: (f64, f64),
}

/// All constant steady states of a parameter set.
#[derive(Debug, Clone)]
pub struct EquilibriumSet {
    pub mode: CoefficientMode,
    pub ratio: f64,
    /// Total-extinction state `(0, 0)`; always present.
    pub origin: Equilibrium,
    /// Untreated-tumor state `(b/d, 0)`; present iff `b > 0`.
    pub tumor_only: Option<Equilibrium>,
    /// Treated coexistence state; present iff `ratio > 1`.
    pub coexistence: Option<Equilibrium>,
}

/// Residuals of the exact steady-state equations at `(u, v)`:
///
/// `r1 = -beta u v/(1+h v) + u (b - d (u + I*))`
/// `r2 = -alpha v + beta e^{-alpha tau} u v/(1+h v)`
///
/// with `I* = (beta/(alpha kappa))(1 - e^{-alpha tau}) u v/(1+h v)`. Both
/// vanish exactly at true equilibria.
pub fn steady_state_residual(params: &ModelParams, u: f64, v: f64) -> Result<(f64, f64)> {
    let p = LogisticHolling::from_params(params)?;
    if u < 0.0 || v < 0.0 {
        return Err(ModelError::input("steady-state residual needs u, v >= 0"));
    }
    Ok(residual_raw(&p, u, v))
}

fn residual_raw(p: &LogisticHolling, u: f64, v: f64) -> (f64, f64) {
    let infection = p.beta * u * v / (1.0 + p.h * v);
    let decay = (-p.alpha * p.tau).exp();
    let i_star = (1.0 - decay) / (p.alpha * p.kappa) * infection;
    let r1 = -infection + u * (p.b - p.d * (u + i_star));
    let r2 = -p.alpha * v + decay * infection;
    (r1, r2)
}

/// `u` on the curve where the virus equation balances: `r2 = 0` for `v > 0`.
fn u_on_virus_balance(p: &LogisticHolling, v: f64) -> f64 {
    p.alpha * (p.alpha * p.tau).exp() / p.beta * (1.0 + p.h * v)
}

/// Exact-mode root function: `r1 / u` along the virus-balance curve.
/// Strictly decreasing in `v`, positive at 0 iff `ratio > 1`.
fn tumor_balance(p: &LogisticHolling, v: f64) -> f64 {
    let u = u_on_virus_balance(p, v);
    let infection_per_u = p.beta * v / (1.0 + p.h * v);
    let decay = (-p.alpha * p.tau).exp();
    let i_star_per_u = (1.0 - decay) / (p.alpha * p.kappa) * infection_per_u;
    -infection_per_u + p.b - p.d * (u + u * i_star_per_u)
}

/// Find all constant steady states. `d <= 0` is rejected; the coexistence
/// state exists exactly when the invasion index exceeds 1.
pub fn find_constant_equilibria(
    params: &ModelParams,
    mode: CoefficientMode,
) -> Result<EquilibriumSet> {
    let p = LogisticHolling::from_params(params)?;
    let ratio = p.ratio();
    let origin = Equilibrium { u: 0.0, v: 0.0, residual: residual_raw(&p, 0.0, 0.0) };
    let tumor_only = (p.b > 0.0).then(|| {
        let u1 = p.b / p.d;
        Equilibrium { u: u1, v: 0.0, residual: residual_raw(&p, u1, 0.0) }
    });
    let coexistence = if ratio > 1.0 {
        let v3 = match mode {
            CoefficientMode::Exact => bisect_coexistence(&p)?,
            CoefficientMode::Paper => paper_quadratic_root(&p)?,
        };
        let u3 = u_on_virus_balance(&p, v3);
        Some(Equilibrium { u: u3, v: v3, residual: residual_raw(&p, u3, v3) })
    } else {
        None
    };
    Ok(EquilibriumSet { mode, ratio, origin, tumor_only, coexistence })
}

fn bisect_coexistence(p: &LogisticHolling) -> Result<f64> {
    let mut hi = 1.0;
    let mut grow = 0;
    while tumor_balance(p, hi) > 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(ModelError::Numerical(
                "could not bracket the coexistence root".into(),
            ));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-14 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if tumor_balance(p, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Positive root of the printed quadratic `A v^2 + B v + C = 0`.
fn paper_quadratic_root(p: &LogisticHolling) -> Result<f64> {
    let e = (p.alpha * p.tau).exp();
    let a2 = p.alpha * p.alpha;
    let coef_a = -p.d * a2 * e * e * p.h * p.h - p.beta * a2 * e * p.h / p.kappa * (e - 1.0);
    let coef_b = p.alpha
        * e
        * (-p.beta * p.beta + p.beta * p.b * p.h
            - 2.0 * p.d * p.alpha * e * p.h
            - p.alpha * p.beta / p.kappa * (e - 1.0));
    let coef_c = p.alpha * (p.beta * p.b - p.d * p.alpha * e);
    if coef_a.abs() < 1e-14 * coef_b.abs().max(coef_c.abs()) {
        // mass-action limit: the quadratic degenerates to B v + C = 0
        let v = -coef_c / coef_b;
        if v <= 0.0 {
            return Err(ModelError::Numerical("printed linear root is not positive".into()));
        }
        return Ok(v);
    }
    let disc = coef_b * coef_b - 4.0 * coef_a * coef_c;
    if disc < 0.0 {
        return Err(ModelError::Numerical("printed quadratic has no real root".into()));
    }
    let sq = disc.sqrt();
    let roots = [(-coef_b + sq) / (2.0 * coef_a), (-coef_b - sq) / (2.0 * coef_a)];
    roots
        .into_iter()
        .find(|v| *v > 0.0)
        .ok_or_else(|| ModelError::Numerical("printed quadratic has no positive root".into()))
}

/// Classified long-run outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum RegimeKind {
    /// Tumor dies out on its own (`b < 0`).
    Extinction,
    /// Tumor saturates, virus dies out (`b > 0`, ratio < 1).
    TumorOnly,
    /// Tumor and virus persist together (`b > 0`, ratio > 1).
    Persistent,
    /// On a threshold boundary the strict-inequality theory does not cover.
    Indeterminate(String),
}

impl std::fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeKind::Extinction => write!(f, "Extinction"),
            RegimeKind::TumorOnly => write!(f, "TumorOnly"),
            RegimeKind::Persistent => write!(f, "Persistent"),
            RegimeKind::Indeterminate(_) => write!(f, "Indeterminate"),
        }
    }
}

/// Regime plus the thresholds that decided it.
#[derive(Debug, Clone)]
pub struct Regime {
    pub kind: RegimeKind,
    pub sigma1: f64,
    pub lambda1: f64,
    pub ratio: f64,
}

/// Width of the boundary bands classified as indeterminate.
const BOUNDARY_BAND: f64 = 1e-8;

/// Classify by the homogeneous thresholds: `sigma1 = b` and the closed-form
/// `lambda1`. Boundary bands (`|b|` or `|ratio - 1|` below 1e-8) are
/// indeterminate because the classification theorems use strict
/// inequalities.
pub fn classify_regime(params: &ModelParams) -> Result<Regime> {
    let p = LogisticHolling::from_params(params)?;
    let ratio = p.ratio();
    let sigma1 = p.b;
    let lambda1 = lambda1_closed_form(p.alpha, p.beta, p.b, p.d, p.tau)?;
    let kind = if p.b.abs() < BOUNDARY_BAND {
        RegimeKind::Indeterminate(format!("b = {:e} sits on the growth threshold", p.b))
    } else if p.b < 0.0 {
        RegimeKind::Extinction
    } else if (ratio - 1.0).abs() < BOUNDARY_BAND {
        RegimeKind::Indeterminate(format!("invasion index {ratio} sits on the threshold"))
    } else if ratio < 1.0 {
        RegimeKind::TumorOnly
    } else {
        RegimeKind::Persistent
    };
    Ok(Regime { kind, sigma1, lambda1, ratio })
}

/// Which printed form of the persistence bound to evaluate; the source
/// carries `e^{-alpha tau}+1` in the theorem statement and `e^{alpha tau}+1`
/// in the proof's final line, and no ground to prefer one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    Statement,
    Proof,
}

/// Persistence lower bounds for the coexistence regime.
#[derive(Debug, Clone, Copy)]
pub struct PersistenceBounds {
    pub u_lb: f64,
    pub v_lb: f64,
    /// Threshold on the Holling saturation `h` above which this variant's
    /// bounds are positive.
    pub h_min: f64,
    pub variant: BoundVariant,
    /// True when `h > h_min`; bounds are reported either way.
    pub applicable: bool,
}

/// Lower bounds on the asymptotic tumor and virus levels in the persistent
/// regime (`ratio > 1`, `b > 0`), meaningful when `h > h_min`.
pub fn persistence_lower_bounds(
    params: &ModelParams,
    variant: BoundVariant,
) -> Result<PersistenceBounds> {
    let p = LogisticHolling::from_params(params)?;
    let ratio = p.ratio();
    if !(ratio > 1.0 && p.b > 0.0) {
        return Err(ModelError::input(format!(
            "persistence bounds need b > 0 and invasion index > 1, got b = {}, index = {ratio}",
            p.b
        )));
    }
    let e = (p.alpha * p.tau).exp();
    let e_neg = (-p.alpha * p.tau).exp();
    let excess = p.beta * p.b - p.alpha * p.d * e; // > 0 here
    let denom = p.alpha * p.kappa * p.b * p.d * p.h + (1.0 - e_neg) * excess;
    let u_lb = p.alpha * p.kappa * (p.b * p.b * p.h - excess) / denom;
    let kappa_term = match variant {
        BoundVariant::Statement => p.h * p.b * p.kappa - p.beta * p.kappa - e_neg + 1.0,
        BoundVariant::Proof => p.h * p.b * p.kappa - p.beta * p.kappa - e + 1.0,
    };
    let v_lb = excess * kappa_term / (p.h * e * denom);
    let kappa_floor = match variant {
        BoundVariant::Statement => (p.beta * p.kappa + e_neg - 1.0) / (p.b * p.kappa),
        BoundVariant::Proof => (p.beta * p.kappa + e - 1.0) / (p.b * p.kappa),
    };
    let h_min = (excess / (p.b * p.b)).max(kappa_floor);
    Ok(PersistenceBounds { u_lb, v_lb, h_min, variant, applicable: p.h > h_min })
}
