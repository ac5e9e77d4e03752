//! Checks of the two standing conditions on φ: symmetry in the marks with
//! monotone decay in distance, and finiteness of
//! ∫₀¹∫₀¹∫_{R^d} φ(s, t, |z|) dz ds dt.
//!
//! The spatial integral is reduced radially, ∫ φ(s,t,ρ) σ_d ρ^{d−1} dρ, and
//! evaluated with adaptive quadrature plus dyadic tail extrapolation. The mark
//! integrals use dyadic pieces toward both endpoints, since heavy-tailed
//! weights or radii make the integrand singular at marks near 0.

use super::{ModelSpec, Variant};
use crate::error::{PercoError, Result};
use crate::geometry::unit_sphere_area;
use crate::quadrature::{
    combine, integrate_with_breaks, semi_infinite, unit_interval_singular, TailOptions, TailSum,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::Cell;

/// A mark-and-distance function φ(s, t, ρ) to be checked.
pub trait PairFunction {
    fn dim(&self) -> usize;
    fn phi(&self, s: f64, t: f64, rho: f64) -> f64;
    /// Distances where φ(s, t, ·) is not smooth.
    fn radial_breaks(&self, _s: f64, _t: f64) -> Vec<f64> {
        Vec::new()
    }
    /// Radius beyond which φ(s, t, ·) vanishes, if known.
    fn radial_support(&self, _s: f64, _t: f64) -> Option<f64> {
        None
    }
    fn describe(&self) -> String;
}

impl PairFunction for ModelSpec {
    fn dim(&self) -> usize {
        self.dim
    }
    fn phi(&self, s: f64, t: f64, rho: f64) -> f64 {
        self.pair_phi(s, t, rho)
    }
    fn radial_breaks(&self, s: f64, t: f64) -> Vec<f64> {
        ModelSpec::radial_breaks(self, s, t)
    }
    fn radial_support(&self, s: f64, t: f64) -> Option<f64> {
        ModelSpec::radial_support(self, s, t)
    }
    fn describe(&self) -> String {
        ModelSpec::describe(self)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureBudget {
    pub rel_tol: f64,
    pub max_levels: usize,
    /// random triples per symmetry / monotonicity check
    pub random_checks: usize,
    pub seed: u64,
}

impl Default for QuadratureBudget {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            max_levels: 400,
            random_checks: 10_000,
            seed: 0x5eed,
        }
    }
}

impl QuadratureBudget {
    fn tail_options(&self) -> TailOptions {
        TailOptions {
            rel_tol: self.rel_tol,
            max_levels: self.max_levels,
            ..TailOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub trials: usize,
    pub failures: usize,
    /// first failing (s, t, r) or (s, t, r1, r2)
    pub first_failure: Option<Vec<f64>>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IntegralVerdict {
    Finite { value: f64, error: f64 },
    /// dyadic piece ratio ≥ 1, i.e. fitted power-law exponent ≥ −1
    Divergent { piece_ratio: f64 },
    Inconclusive { diagnostics: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub description: String,
    pub symmetry: CheckOutcome,
    pub monotonicity: CheckOutcome,
    pub integral: IntegralVerdict,
}

impl ValidationReport {
    pub fn conditions_hold(&self) -> bool {
        self.symmetry.passed()
            && self.monotonicity.passed()
            && matches!(self.integral, IntegralVerdict::Finite { .. })
    }
}

/// Validates a Boolean or classical model.
pub fn validate_framework(model: &ModelSpec, budget: &QuadratureBudget) -> Result<ValidationReport> {
    model.validate()?;
    if model.is_generalized() {
        return Err(PercoError::Contract(
            "framework validation needs a pairwise (Boolean or classical) model".into(),
        ));
    }
    let symmetry = check_symmetry(model, budget);
    let monotonicity = check_monotonicity(model, budget);
    let integral = match &model.variant {
        Variant::Classical(c) => {
            // ∫ ρ_prof(g r^d/β) dz = (β/g)·K with K = ∫_{R^d} ρ_prof(|z|^d) dz
            let d = model.dim;
            let prof = c.profile.clone();
            let unit = UnitProfile { d, profile: prof };
            let k = radial_integral(&unit, 0.5, 0.5, budget);
            let marks = mark_integral(
                |s, t| {
                    let g = c.kernel.eval(c.weight(s), c.weight(t));
                    TailSum::Finite {
                        value: c.beta / g,
                        tail: 0.0,
                        error: 0.0,
                    }
                },
                budget,
            );
            product_verdict(k, marks)
        }
        _ => verdict(nested_integral(model, budget)),
    };
    Ok(ValidationReport {
        description: model.describe(),
        symmetry,
        monotonicity,
        integral,
    })
}

/// Validates an arbitrary φ with the generic nested route.
pub fn validate_pair_function(f: &dyn PairFunction, budget: &QuadratureBudget) -> ValidationReport {
    ValidationReport {
        description: f.describe(),
        symmetry: check_symmetry(f, budget),
        monotonicity: check_monotonicity(f, budget),
        integral: verdict(nested_integral(f, budget)),
    }
}

fn random_mark(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

fn random_distance(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-3.0..3.0))
}

fn check_symmetry(f: &dyn PairFunction, budget: &QuadratureBudget) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut out = CheckOutcome {
        trials: budget.random_checks,
        failures: 0,
        first_failure: None,
    };
    for _ in 0..budget.random_checks {
        let (s, t, r) = (random_mark(&mut rng), random_mark(&mut rng), random_distance(&mut rng));
        if f.phi(s, t, r) != f.phi(t, s, r) {
            out.failures += 1;
            out.first_failure.get_or_insert(vec![s, t, r]);
        }
    }
    out
}

fn check_monotonicity(f: &dyn PairFunction, budget: &QuadratureBudget) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0xa5a5);
    let mut out = CheckOutcome {
        trials: budget.random_checks,
        failures: 0,
        first_failure: None,
    };
    for _ in 0..budget.random_checks {
        let (s, t) = (random_mark(&mut rng), random_mark(&mut rng));
        let (a, b) = (random_distance(&mut rng), random_distance(&mut rng));
        let (r1, r2) = if a <= b { (a, b) } else { (b, a) };
        let (p1, p2) = (f.phi(s, t, r1), f.phi(s, t, r2));
        if p1 < p2 || !(0.0..=1.0).contains(&p1) {
            out.failures += 1;
            out.first_failure.get_or_insert(vec![s, t, r1, r2]);
        }
    }
    out
}

/// ∫_0^∞ φ(s, t, ρ) σ_d ρ^{d−1} dρ.
fn radial_integral(f: &dyn PairFunction, s: f64, t: f64, budget: &QuadratureBudget) -> TailSum {
    let d = f.dim();
    let sigma = unit_sphere_area(d);
    let integrand = |rho: f64| sigma * rho.powi(d as i32 - 1) * f.phi(s, t, rho);
    let breaks = f.radial_breaks(s, t);
    if let Some(sup) = f.radial_support(s, t) {
        let q = integrate_with_breaks(integrand, 0.0, sup, &breaks, 1e-300, budget.rel_tol, 400);
        return if q.converged {
            TailSum::Finite {
                value: q.value,
                tail: 0.0,
                error: q.error,
            }
        } else {
            TailSum::Inconclusive {
                partial: q.value,
                last_ratios: Vec::new(),
            }
        };
    }
    let head_end = breaks
        .iter()
        .copied()
        .filter(|b| b.is_finite())
        .fold(1.0f64, f64::max);
    let head = integrate_with_breaks(integrand, 0.0, head_end, &breaks, 1e-300, budget.rel_tol, 400);
    let tail = semi_infinite(integrand, head_end, 1e-300, budget.tail_options());
    combine(
        TailSum::Finite {
            value: head.value,
            tail: 0.0,
            error: head.error,
        },
        tail,
    )
}

/// ∫₀¹∫₀¹ h(s, t) ds dt where h may itself be improper.
fn mark_integral<H: Fn(f64, f64) -> TailSum>(h: H, budget: &QuadratureBudget) -> TailSum {
    let opts = budget.tail_options();
    let status: Cell<Option<TailSum>> = Cell::new(None);
    let outer = unit_interval_singular(
        |s| {
            let inner = unit_interval_singular(
                |t| match h(s, t) {
                    TailSum::Finite { value, .. } => value,
                    other => {
                        flag(&status, other);
                        f64::NAN
                    }
                },
                1e-300,
                opts,
            );
            match inner {
                TailSum::Finite { value, .. } => value,
                other => {
                    flag(&status, other);
                    f64::NAN
                }
            }
        },
        1e-300,
        opts,
    );
    match status.take() {
        Some(bad) => bad,
        None => outer,
    }
}

fn flag(status: &Cell<Option<TailSum>>, s: TailSum) {
    let current = status.take();
    let keep = match (&current, &s) {
        (Some(TailSum::Divergent { .. }), _) => current,
        _ => Some(s),
    };
    status.set(keep);
}

fn nested_integral(f: &dyn PairFunction, budget: &QuadratureBudget) -> TailSum {
    mark_integral(|s, t| radial_integral(f, s, t, budget), budget)
}

fn verdict(t: TailSum) -> IntegralVerdict {
    t.into()
}

impl From<TailSum> for IntegralVerdict {
    fn from(t: TailSum) -> Self {
        match t {
            TailSum::Finite { value, error, .. } => IntegralVerdict::Finite { value, error },
            TailSum::Divergent { ratio } => IntegralVerdict::Divergent { piece_ratio: ratio },
            TailSum::Inconclusive {
                partial,
                last_ratios,
            } => IntegralVerdict::Inconclusive {
                diagnostics: format!(
                    "no stable power-law tail; partial sum {partial}, last piece ratios {last_ratios:?}"
                ),
            },
        }
    }
}

impl IntegralVerdict {
    pub fn value(&self) -> Option<f64> {
        match self {
            IntegralVerdict::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }
}

fn product_verdict(a: TailSum, b: TailSum) -> IntegralVerdict {
    match (verdict(a), verdict(b)) {
        (IntegralVerdict::Finite { value: x, error: ex }, IntegralVerdict::Finite { value: y, error: ey }) => {
            IntegralVerdict::Finite {
                value: x * y,
                error: ex * y.abs() + ey * x.abs(),
            }
        }
        (d @ IntegralVerdict::Divergent { .. }, _) | (_, d @ IntegralVerdict::Divergent { .. }) => d,
        (i @ IntegralVerdict::Inconclusive { .. }, _) | (_, i @ IntegralVerdict::Inconclusive { .. }) => i,
    }
}

/// ρ_prof(|z|^d) as a pair function (marks unused).
struct UnitProfile {
    d: usize,
    profile: super::Profile,
}

impl PairFunction for UnitProfile {
    fn dim(&self) -> usize {
        self.d
    }
    fn phi(&self, _s: f64, _t: f64, rho: f64) -> f64 {
        self.profile.value(rho.powi(self.d as i32))
    }
    fn radial_breaks(&self, _s: f64, _t: f64) -> Vec<f64> {
        self.profile
            .breakpoints()
            .into_iter()
            .map(|b| b.powf(1.0 / self.d as f64))
            .collect()
    }
    fn radial_support(&self, _s: f64, _t: f64) -> Option<f64> {
        self.profile.support().map(|t| t.powf(1.0 / self.d as f64))
    }
    fn describe(&self) -> String {
        self.profile.formula()
    }
}
