//! Connection models: the Boolean model, classical weight-dependent random
//! connection models φ(s, t, ρ) = ρ_prof(β⁻¹ g(W_s, W_t) ρ^d), and a
//! generalized variant whose edge probability also depends on nearby points.
//!
//! Weights are derived from marks by W = u^{-1/(τ−1)} (Pareto, tail
//! exponent τ − 1). The catalog of kernels and profiles is one concrete
//! instantiation; every formula is printed by [`ModelSpec::describe`].

mod catalog;
mod validate;

pub use catalog::{Kernel, Profile, RadiusLaw};
pub use validate::{
    validate_framework, validate_pair_function, CheckOutcome, IntegralVerdict, PairFunction,
    QuadratureBudget, ValidationReport,
};

use crate::error::{PercoError, Result};
use crate::geometry::dist2;
use crate::ppp::{PointRef, MAX_DIM};

/// W = u^{-1/(τ−1)}.
pub fn weight_from_mark(u: f64, tau: f64) -> Result<f64> {
    if !(tau > 1.0) || !tau.is_finite() {
        return Err(PercoError::Config(format!("weight exponent τ must exceed 1, got {tau}")));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(PercoError::Config(format!("mark {u} outside (0,1)")));
    }
    Ok(u.powf(-1.0 / (tau - 1.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classical {
    pub kernel: Kernel,
    pub profile: Profile,
    /// weight exponent τ > 1 (ignored by the plain kernel)
    pub tau: f64,
    /// amplitude β > 0
    pub beta: f64,
}

impl Classical {
    pub fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        if self.kernel.uses_weights() && !(self.tau > 1.0 && self.tau.is_finite()) {
            return Err(PercoError::Config(format!(
                "kernel {} needs τ > 1, got {}",
                self.kernel.name(),
                self.tau
            )));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(PercoError::Config(format!("β must be positive, got {}", self.beta)));
        }
        Ok(())
    }

    #[inline]
    pub fn weight(&self, u: f64) -> f64 {
        if self.kernel.uses_weights() {
            u.powf(-1.0 / (self.tau - 1.0))
        } else {
            1.0
        }
    }

    #[inline]
    fn mark_for_weight(&self, w: f64) -> Option<f64> {
        let u = w.powf(-(self.tau - 1.0));
        (u > 0.0 && u < 1.0).then_some(u)
    }

    #[inline]
    fn phi_weights(&self, d: usize, ws: f64, wt: f64, rho: f64) -> f64 {
        self.profile
            .value(self.kernel.eval(ws, wt) * rho.powi(d as i32) / self.beta)
    }
}

/// Multiplies the base probability by `factor^N`, N = number of other points
/// within `radius` of the midpoint of the pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDamping {
    pub radius: f64,
    pub factor: f64,
}

impl Default for LocalDamping {
    fn default() -> Self {
        Self {
            radius: 1.0,
            factor: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    Boolean(RadiusLaw),
    Classical(Classical),
    Generalized {
        base: Classical,
        damping: LocalDamping,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub dim: usize,
    pub variant: Variant,
}

impl ModelSpec {
    pub fn boolean(dim: usize, law: RadiusLaw) -> Self {
        Self {
            dim,
            variant: Variant::Boolean(law),
        }
    }

    pub fn classical(dim: usize, kernel: Kernel, profile: Profile, tau: f64, beta: f64) -> Self {
        Self {
            dim,
            variant: Variant::Classical(Classical {
                kernel,
                profile,
                tau,
                beta,
            }),
        }
    }

    pub fn generalized(dim: usize, base: Classical, damping: LocalDamping) -> Self {
        Self {
            dim,
            variant: Variant::Generalized { base, damping },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(PercoError::Config(format!(
                "dimension {} outside 1..={MAX_DIM}",
                self.dim
            )));
        }
        match &self.variant {
            Variant::Boolean(law) => law.validate(),
            Variant::Classical(c) => c.validate(),
            Variant::Generalized { base, damping } => {
                base.validate()?;
                if !(damping.radius >= 0.0 && (0.0..=1.0).contains(&damping.factor)) {
                    return Err(PercoError::Config(format!("invalid damping rule {damping:?}")));
                }
                Ok(())
            }
        }
    }

    pub fn is_generalized(&self) -> bool {
        matches!(self.variant, Variant::Generalized { .. })
    }

    /// Pairwise part of the model: the classical base for generalized models.
    pub fn base(&self) -> Option<&Classical> {
        match &self.variant {
            Variant::Boolean(_) => None,
            Variant::Classical(c) | Variant::Generalized { base: c, .. } => Some(c),
        }
    }

    /// φ(s, t, ρ) for the pairwise part of the model (the base probability
    /// for generalized models).
    #[inline]
    pub fn pair_phi(&self, s: f64, t: f64, rho: f64) -> f64 {
        match &self.variant {
            Variant::Boolean(law) => {
                if rho < law.radius(s) + law.radius(t) {
                    1.0
                } else {
                    0.0
                }
            }
            Variant::Classical(c) | Variant::Generalized { base: c, .. } => {
                c.phi_weights(self.dim, c.weight(s), c.weight(t), rho)
            }
        }
    }

    /// The pairwise model bounding this one: the classical base of a
    /// generalized model, otherwise the model itself.
    pub fn pairwise_bound(&self) -> ModelSpec {
        match &self.variant {
            Variant::Generalized { base, .. } => ModelSpec {
                dim: self.dim,
                variant: Variant::Classical(base.clone()),
            },
            _ => self.clone(),
        }
    }

    /// Per-point scalar controlling reach: the radius (Boolean) or the weight.
    #[inline]
    pub fn reach(&self, mark: f64) -> f64 {
        match &self.variant {
            Variant::Boolean(law) => law.radius(mark),
            Variant::Classical(c) | Variant::Generalized { base: c, .. } => c.weight(mark),
        }
    }

    /// Upper bound on the pair probability over all pairs whose reaches are
    /// at most `ra`, `rb` and whose distance is at least `min_dist`.
    #[inline]
    pub fn pair_bound(&self, ra: f64, rb: f64, min_dist: f64) -> f64 {
        match &self.variant {
            Variant::Boolean(_) => {
                if min_dist < ra + rb {
                    1.0
                } else {
                    0.0
                }
            }
            Variant::Classical(c) | Variant::Generalized { base: c, .. } => {
                c.phi_weights(self.dim, ra, rb, min_dist)
            }
        }
    }

    /// Distance beyond which pairs with these reaches never connect.
    pub fn support_radius(&self, ra: f64, rb: f64) -> Option<f64> {
        match &self.variant {
            Variant::Boolean(_) => Some(ra + rb),
            Variant::Classical(c) | Variant::Generalized { base: c, .. } => {
                let ts = c.profile.support()?;
                Some((ts * c.beta / c.kernel.eval(ra, rb)).powf(1.0 / self.dim as f64))
            }
        }
    }

    /// Distances where φ(s, t, ·) is not smooth.
    pub fn radial_breaks(&self, s: f64, t: f64) -> Vec<f64> {
        match &self.variant {
            Variant::Boolean(law) => vec![law.radius(s) + law.radius(t)],
            Variant::Classical(c) | Variant::Generalized { base: c, .. } => {
                let g = c.kernel.eval(c.weight(s), c.weight(t));
                c.profile
                    .breakpoints()
                    .into_iter()
                    .map(|b| (b * c.beta / g).powf(1.0 / self.dim as f64))
                    .collect()
            }
        }
    }

    /// Exact support of φ(s, t, ·) when bounded.
    pub fn radial_support(&self, s: f64, t: f64) -> Option<f64> {
        self.support_radius(self.reach(s), self.reach(t))
    }

    /// Marks t in (0, 1) where φ(s, ·, ρ) is not smooth.
    pub fn mark_breaks(&self, s: f64, rho: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match &self.variant {
            Variant::Boolean(law) => {
                if let Some(t) = law.mark_for_radius(rho - law.radius(s)) {
                    out.push(t);
                }
            }
            Variant::Classical(c) | Variant::Generalized { base: c, .. } => {
                if !c.kernel.uses_weights() {
                    return out;
                }
                let ws = c.weight(s);
                let rd = rho.powi(self.dim as i32);
                for b in c.profile.breakpoints() {
                    if b <= 0.0 {
                        continue;
                    }
                    // kernel value at which the profile argument hits b
                    let g_star = b * c.beta / rd;
                    let wt = match c.kernel {
                        Kernel::Plain => continue,
                        Kernel::Product => 1.0 / (g_star * ws),
                        Kernel::Sum => 1.0 / g_star - ws,
                        Kernel::Max => {
                            let w = 1.0 / g_star;
                            if w > ws {
                                w
                            } else {
                                continue;
                            }
                        }
                    };
                    if wt > 0.0 {
                        out.extend(c.mark_for_weight(wt));
                    }
                }
                if c.kernel == Kernel::Max {
                    out.push(s);
                }
            }
        }
        out
    }

    /// Human-readable formulas for reports.
    pub fn describe(&self) -> String {
        match &self.variant {
            Variant::Boolean(law) => format!(
                "boolean d={}: phi(s,t,r) = 1{{r < R(s)+R(t)}}, {}",
                self.dim,
                law.formula()
            ),
            Variant::Classical(c) => format!(
                "classical d={}: phi(s,t,r) = rho(g(W_s,W_t) r^{} / {}), {}, {}, W = u^(-1/({}-1))",
                self.dim,
                self.dim,
                c.beta,
                c.kernel.formula(),
                c.profile.formula(),
                c.tau
            ),
            Variant::Generalized { base, damping } => format!(
                "generalized d={}: p = base * {}^N, N = #points within {} of the pair midpoint; base: rho(g(W_s,W_t) r^{} / {}), {}, {}, W = u^(-1/({}-1))",
                self.dim,
                damping.factor,
                damping.radius,
                self.dim,
                base.beta,
                base.kernel.formula(),
                base.profile.formula(),
                base.tau
            ),
        }
    }

    /// Number of context points within the damping radius of the midpoint.
    pub fn damping_count<'a, I>(&self, a: &[f64], b: &[f64], context: I) -> usize
    where
        I: IntoIterator<Item = PointRef<'a>>,
    {
        let Variant::Generalized { damping, .. } = &self.variant else {
            return 0;
        };
        let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
        let r2 = damping.radius * damping.radius;
        context
            .into_iter()
            .filter(|p| dist2(p.position, &mid) <= r2)
            .count()
    }

    /// Damping multiplier for `n` nearby points.
    pub fn damping_factor(&self, n: usize) -> f64 {
        match &self.variant {
            Variant::Generalized { damping, .. } => damping.factor.powi(n as i32),
            _ => 1.0,
        }
    }
}

/// φ(u_a, u_b, |a − b|) for Boolean and classical models.
pub fn connection_prob(model: &ModelSpec, a: PointRef<'_>, b: PointRef<'_>) -> Result<f64> {
    if model.is_generalized() {
        return Err(PercoError::Contract(
            "generalized models depend on surrounding points; use connection_prob_ctx".into(),
        ));
    }
    check_dims(model, a, b)?;
    Ok(model.pair_phi(a.mark, b.mark, dist2(a.position, b.position).sqrt()))
}

/// p(a, b, context) for any model variant. `context` must exclude a and b.
pub fn connection_prob_ctx<'a, I>(
    model: &ModelSpec,
    a: PointRef<'_>,
    b: PointRef<'_>,
    context: I,
) -> Result<f64>
where
    I: IntoIterator<Item = PointRef<'a>>,
{
    check_dims(model, a, b)?;
    let base = model.pair_phi(a.mark, b.mark, dist2(a.position, b.position).sqrt());
    if !model.is_generalized() {
        return Ok(base);
    }
    let n = model.damping_count(a.position, b.position, context);
    Ok(base * model.damping_factor(n))
}

fn check_dims(model: &ModelSpec, a: PointRef<'_>, b: PointRef<'_>) -> Result<()> {
    if a.position.len() != model.dim || b.position.len() != model.dim {
        return Err(PercoError::Config(format!(
            "point dimension differs from model dimension {}",
            model.dim
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ppp::MarkedPoint;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(x: &[f64], u: f64) -> MarkedPoint {
        MarkedPoint::new(x.to_vec(), u).unwrap()
    }

    pub(crate) fn catalog(dim: usize) -> Vec<ModelSpec> {
        let poly = Profile::Polynomial { delta: 1.8 };
        let ind = Profile::Indicator { theta: 1.0 };
        vec![
            ModelSpec::boolean(dim, RadiusLaw::Fixed { radius: 0.5 }),
            ModelSpec::boolean(dim, RadiusLaw::Uniform { lo: 0.1, hi: 0.6 }),
            ModelSpec::boolean(
                dim,
                RadiusLaw::Pareto {
                    scale: 0.3,
                    shape: 1.5,
                },
            ),
            ModelSpec::classical(dim, Kernel::Plain, ind.clone(), 2.0, 1.0),
            ModelSpec::classical(dim, Kernel::Plain, poly.clone(), 2.0, 1.0),
            ModelSpec::classical(dim, Kernel::Product, poly.clone(), 2.5, 0.5),
            ModelSpec::classical(dim, Kernel::Sum, ind.clone(), 2.2, 1.0),
            ModelSpec::classical(dim, Kernel::Max, poly.clone(), 3.0, 1.0),
            ModelSpec::classical(
                dim,
                Kernel::Product,
                Profile::Tabulated {
                    knots: vec![(0.0, 1.0), (0.5, 0.8), (2.0, 0.1), (3.0, 0.0)],
                },
                2.5,
                1.0,
            ),
        ]
    }

    #[test]
    fn boolean_connects_when_balls_overlap() {
        let m = ModelSpec::boolean(2, RadiusLaw::Fixed { radius: 1.0 });
        let a = pt(&[0.0, 0.0], 0.3);
        let b = pt(&[1.5, 0.0], 0.7);
        assert_eq!(connection_prob(&m, a.as_ref(), b.as_ref()).unwrap(), 1.0);
        let c = pt(&[2.0, 0.0], 0.7);
        // strict inequality |x−y| < R_x + R_y
        assert_eq!(connection_prob(&m, a.as_ref(), c.as_ref()).unwrap(), 0.0);
    }

    #[test]
    fn plain_indicator_is_unit_ball() {
        let m = ModelSpec::classical(2, Kernel::Plain, Profile::Indicator { theta: 1.0 }, 2.0, 1.0);
        let a = pt(&[0.0, 0.0], 0.3);
        assert_eq!(connection_prob(&m, a.as_ref(), pt(&[1.0, 0.0], 0.9).as_ref()).unwrap(), 1.0);
        assert_eq!(connection_prob(&m, a.as_ref(), pt(&[0.6, 0.8], 0.9).as_ref()).unwrap(), 1.0);
        assert_eq!(
            connection_prob(&m, a.as_ref(), pt(&[1.0 + 1e-9, 0.0], 0.9).as_ref()).unwrap(),
            0.0
        );
    }

    #[test]
    fn polynomial_profile_decays_to_zero_monotonically() {
        let m = ModelSpec::classical(
            3,
            Kernel::Product,
            Profile::Polynomial { delta: 1.5 },
            2.5,
            1.0,
        );
        let mut prev = 1.0;
        for k in 0..40 {
            let r = 1.5f64.powi(k);
            let p = m.pair_phi(0.2, 0.7, r);
            assert!(p <= prev);
            prev = p;
        }
        assert!(prev < 1e-12);
    }

    #[test]
    fn weight_examples() {
        assert!((weight_from_mark(0.25, 2.0).unwrap() - 4.0).abs() < 1e-15);
        assert!((weight_from_mark(0.01, 3.0).unwrap() - 10.0).abs() < 1e-12);
        let w = weight_from_mark(1.0 - 1e-12, 2.5).unwrap();
        assert!(w > 1.0 && w < 1.0 + 1e-10);
        assert!(matches!(weight_from_mark(0.5, 1.0), Err(PercoError::Config(_))));
        assert!(matches!(weight_from_mark(0.5, 0.3), Err(PercoError::Config(_))));
    }

    #[test]
    fn generalized_requires_context_variant() {
        let base = Classical {
            kernel: Kernel::Plain,
            profile: Profile::Indicator { theta: 8.0 },
            tau: 2.0,
            beta: 1.0,
        };
        let m = ModelSpec::generalized(2, base.clone(), LocalDamping::default());
        let a = pt(&[0.0, 0.0], 0.3);
        let b = pt(&[2.0, 0.0], 0.6);
        assert!(matches!(
            connection_prob(&m, a.as_ref(), b.as_ref()),
            Err(PercoError::Contract(_))
        ));
        let base_p = m.pair_phi(0.3, 0.6, 2.0);
        let empty: Vec<PointRef> = vec![];
        assert_eq!(connection_prob_ctx(&m, a.as_ref(), b.as_ref(), empty).unwrap(), base_p);
        // context: 3 points within 1 of midpoint (1,0), 2 points farther away
        let ctx = [
            pt(&[1.0, 0.5], 0.1),
            pt(&[1.5, -0.5], 0.2),
            pt(&[0.2, 0.0], 0.3),
            pt(&[1.0, 1.2], 0.4),
            pt(&[3.0, 0.0], 0.5),
        ];
        let brute = ctx
            .iter()
            .filter(|p| ((p.position[0] - 1.0).powi(2) + p.position[1].powi(2)).sqrt() <= 1.0)
            .count();
        assert_eq!(brute, 3);
        let p = connection_prob_ctx(&m, a.as_ref(), b.as_ref(), ctx.iter().map(|p| p.as_ref()))
            .unwrap();
        assert_eq!(p, base_p * 0.5f64.powi(3));
        // classical ignores context
        let mc = ModelSpec::classical(2, base.kernel, base.profile.clone(), 2.0, 1.0);
        assert_eq!(
            connection_prob_ctx(&mc, a.as_ref(), b.as_ref(), ctx.iter().map(|p| p.as_ref()))
                .unwrap(),
            connection_prob(&mc, a.as_ref(), b.as_ref()).unwrap()
        );
    }

    #[test]
    fn symmetry_monotonicity_and_range_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [1, 2, 3] {
            for m in catalog(dim) {
                for _ in 0..10_000 {
                    let a: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
                    let b: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
                    let (ua, ub) = (rng.random::<f64>(), rng.random::<f64>());
                    let pa = pt(&a, ua.max(1e-300));
                    let pb = pt(&b, ub.max(1e-300));
                    let p1 = connection_prob(&m, pa.as_ref(), pb.as_ref()).unwrap();
                    let p2 = connection_prob(&m, pb.as_ref(), pa.as_ref()).unwrap();
                    assert_eq!(p1, p2);
                    assert!((0.0..=1.0).contains(&p1));
                    let r1 = rng.random_range(0.0..10.0);
                    let r2 = r1 + rng.random_range(0.0..10.0);
                    assert!(m.pair_phi(ua, ub, r1) >= m.pair_phi(ua, ub, r2));
                }
            }
        }
    }

    #[test]
    fn pair_bound_dominates_exact_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in catalog(2) {
            for _ in 0..5000 {
                let (s, t) = (rng.random::<f64>(), rng.random::<f64>());
                let rho = rng.random_range(0.0..6.0);
                let slack_a = rng.random_range(1.0..3.0);
                let ra = match &m.variant {
                    Variant::Boolean(_) => m.reach(s) * slack_a,
                    _ => m.reach(s) * slack_a,
                };
                let rb = m.reach(t);
                let dmin = rho * rng.random::<f64>();
                assert!(m.pair_bound(ra, rb, dmin) >= m.pair_phi(s, t, rho));
                if let Some(sup) = m.support_radius(m.reach(s), m.reach(t)) {
                    if rho > sup {
                        assert_eq!(m.pair_phi(s, t, rho), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn mark_breaks_locate_discontinuities() {
        let m = ModelSpec::classical(2, Kernel::Product, Profile::Indicator { theta: 1.0 }, 2.5, 1.0);
        let (s, rho) = (0.3, 2.0);
        let breaks = m.mark_breaks(s, rho);
        assert_eq!(breaks.len(), 1);
        let t = breaks[0];
        assert_eq!(m.pair_phi(s, t * (1.0 - 1e-9), rho), 1.0);
        assert_eq!(m.pair_phi(s, t * (1.0 + 1e-9), rho), 0.0);
        let b = ModelSpec::boolean(2, RadiusLaw::Uniform { lo: 0.1, hi: 1.0 });
        let t = b.mark_breaks(0.5, 1.0)[0];
        assert_eq!(b.pair_phi(0.5, t + 1e-9, 1.0), 1.0);
        assert_eq!(b.pair_phi(0.5, t - 1e-9, 1.0), 0.0);
    }

    fn random_rotation(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
        // Gram–Schmidt on a random Gaussian-ish matrix
        let mut rows: Vec<Vec<f64>> = Vec::new();
        while rows.len() < d {
            let mut v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            for r in &rows {
                let dot: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= dot * y;
                }
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-3 {
                rows.push(v.into_iter().map(|x| x / n).collect());
            }
        }
        rows
    }

    #[test]
    fn context_probability_is_invariant_under_rigid_motions() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let base = Classical {
            kernel: Kernel::Product,
            profile: Profile::Polynomial { delta: 2.0 },
            tau: 2.5,
            beta: 2.0,
        };
        let m = ModelSpec::generalized(3, base, LocalDamping::default());
        for _ in 0..500 {
            let mk = |rng: &mut ChaCha8Rng| {
                pt(
                    &(0..3).map(|_| rng.random_range(-2.0..2.0)).collect::<Vec<_>>(),
                    rng.random_range(0.01..0.99),
                )
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let ctx: Vec<MarkedPoint> = (0..20).map(|_| mk(&mut rng)).collect();
            let p = connection_prob_ctx(&m, a.as_ref(), b.as_ref(), ctx.iter().map(|c| c.as_ref()))
                .unwrap();
            let rot = random_rotation(&mut rng, 3);
            let shift: Vec<f64> = (0..3).map(|_| rng.random_range(-10.0..10.0)).collect();
            let motion = |q: &MarkedPoint| {
                let y: Vec<f64> = (0..3)
                    .map(|i| rot[i].iter().zip(&q.position).map(|(r, x)| r * x).sum::<f64>() + shift[i])
                    .collect();
                pt(&y, q.mark)
            };
            let a2 = motion(&a);
            let b2 = motion(&b);
            let ctx2: Vec<MarkedPoint> = ctx.iter().map(motion).collect();
            let p2 =
                connection_prob_ctx(&m, a2.as_ref(), b2.as_ref(), ctx2.iter().map(|c| c.as_ref()))
                    .unwrap();
            assert!((p - p2).abs() <= 1e-12, "{p} vs {p2}");
        }
    }

    proptest! {
        #[test]
        fn weights_are_pareto_and_decreasing(u in 1e-6f64..0.999_999, v in 1e-6f64..0.999_999, tau in 1.1f64..5.0) {
            let wu = weight_from_mark(u, tau).unwrap();
            let wv = weight_from_mark(v, tau).unwrap();
            prop_assert!(wu > 1.0);
            if u < v { prop_assert!(wu >= wv); }
            // P(W > w) = w^{-(τ-1)} ⇔ u = W^{-(τ-1)}
            prop_assert!((wu.powf(-(tau - 1.0)) - u).abs() < 1e-9 * u.max(1e-3));
        }
    }
}
