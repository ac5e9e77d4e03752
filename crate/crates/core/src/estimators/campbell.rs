//! Expected edge counts from the Mecke formula.
//!
//! For a pairwise model and a PPP of intensity λ, the expected number of
//! edges {x, y} with (x, y) ∈ A × B is λ² ∫_A ∫_B φ̄(|y − x|) dy dx, where
//! φ̄(ρ) = ∫₀¹∫₀¹ φ(s, t, ρ) ds dt. With balls for A and B the double
//! integral reduces to ∫ φ̄(ρ) σ_d ρ^{d−1} V(ρ) dρ, V(ρ) being the volume of
//! {x ∈ A : x + ρe ∈ B} (a difference of lens volumes).
//!
//! Generalized models are rejected except in [`campbell_exterior_edges`]
//! and [`truncation_bound`], where the base probability is used as an upper
//! bound (damping only lowers probabilities).

use crate::error::{PercoError, Result};
use crate::events::EventSpec;
use crate::geometry::{ball_volume, lens_volume, unit_sphere_area};
use crate::model::{IntegralVerdict, Kernel, ModelSpec, RadiusLaw, Variant};
use crate::ppp::Window;
use crate::quadrature::{integrate_with_breaks, semi_infinite, TailOptions, TailSum};

/// φ̄(ρ) = ∫₀¹∫₀¹ φ(s, t, ρ) ds dt for the pairwise part of the model.
pub fn pair_mean(model: &ModelSpec, rho: f64, rel_tol: f64) -> f64 {
    let mark_free = match &model.variant {
        Variant::Boolean(law) => matches!(law, RadiusLaw::Fixed { .. }),
        Variant::Classical(c) | Variant::Generalized { base: c, .. } => c.kernel == Kernel::Plain,
    };
    if mark_free {
        return model.pair_phi(0.5, 0.5, rho);
    }
    let inner = |s: f64| {
        let breaks = model.mark_breaks(s, rho);
        integrate_with_breaks(
            |t| model.pair_phi(s, t, rho),
            0.0,
            1.0,
            &breaks,
            1e-300,
            rel_tol,
            400,
        )
        .value
    };
    let mut outer_breaks = model.mark_breaks(1e-12, rho);
    outer_breaks.extend(model.mark_breaks(1.0 - 1e-12, rho));
    integrate_with_breaks(inner, 0.0, 1.0, &outer_breaks, 1e-300, rel_tol, 400).value
}

/// Distance beyond which φ̄ vanishes.
fn pair_support(model: &ModelSpec) -> Option<f64> {
    match &model.variant {
        Variant::Boolean(law) => law.max_radius().map(|r| 2.0 * r),
        Variant::Classical(c) | Variant::Generalized { base: c, .. } => {
            if c.kernel != Kernel::Plain {
                return None;
            }
            let ts = c.profile.support()?;
            Some((ts * c.beta).powf(1.0 / model.dim as f64))
        }
    }
}

/// Distances where φ̄ has kinks.
fn pair_breaks(model: &ModelSpec) -> Vec<f64> {
    match &model.variant {
        Variant::Boolean(RadiusLaw::Fixed { radius }) => vec![2.0 * radius],
        Variant::Boolean(RadiusLaw::Uniform { lo, hi }) => vec![2.0 * lo, lo + hi, 2.0 * hi],
        Variant::Boolean(RadiusLaw::Pareto { scale, .. }) => vec![2.0 * scale],
        Variant::Classical(c) | Variant::Generalized { base: c, .. } => {
            if c.kernel != Kernel::Plain {
                return Vec::new();
            }
            c.profile
                .breakpoints()
                .into_iter()
                .map(|b| (b * c.beta).powf(1.0 / model.dim as f64))
                .collect()
        }
    }
}

/// ∫_from^to φ̄(ρ) σ_d ρ^{d−1} geo(ρ) dρ, `to` possibly infinite.
fn radial_mean<G: Fn(f64) -> f64>(
    model: &ModelSpec,
    geo: G,
    from: f64,
    to: f64,
    extra_breaks: &[f64],
    rel_tol: f64,
) -> IntegralVerdict {
    let d = model.dim;
    let sigma = unit_sphere_area(d);
    let integrand = |rho: f64| {
        let g = geo(rho);
        if g <= 0.0 {
            return 0.0;
        }
        pair_mean(model, rho, rel_tol * 1e-2) * sigma * rho.powi(d as i32 - 1) * g
    };
    let upper = match pair_support(model) {
        Some(s) => s.min(to),
        None => to,
    };
    if !(upper > from) {
        return IntegralVerdict::Finite {
            value: 0.0,
            error: 0.0,
        };
    }
    let mut breaks = pair_breaks(model);
    breaks.extend_from_slice(extra_breaks);
    let finite = |q: crate::quadrature::Quad| {
        if q.converged || q.error <= 1e-3 * q.value.abs() {
            IntegralVerdict::Finite {
                value: q.value,
                error: q.error,
            }
        } else {
            IntegralVerdict::Inconclusive {
                diagnostics: format!("quadrature estimate {} with error {}", q.value, q.error),
            }
        }
    };
    if upper.is_finite() {
        return finite(integrate_with_breaks(
            integrand, from, upper, &breaks, 1e-300, rel_tol, 2000,
        ));
    }
    let head_end = breaks
        .iter()
        .copied()
        .filter(|b| b.is_finite())
        .fold(from.max(1.0), f64::max)
        * 2.0;
    let head = integrate_with_breaks(integrand, from, head_end, &breaks, 1e-300, rel_tol, 2000);
    let opts = TailOptions {
        rel_tol,
        ..TailOptions::default()
    };
    match semi_infinite(integrand, head_end, 1e-300, opts) {
        TailSum::Finite { value, error, .. } => IntegralVerdict::Finite {
            value: head.value + value,
            error: head.error + error,
        },
        other => other.into(),
    }
}

fn scale(v: IntegralVerdict, factor: f64) -> IntegralVerdict {
    match v {
        IntegralVerdict::Finite { value, error } => IntegralVerdict::Finite {
            value: value * factor,
            error: error * factor,
        },
        other => other,
    }
}

fn require_pairwise(model: &ModelSpec) -> Result<()> {
    model.validate()?;
    if model.is_generalized() {
        return Err(PercoError::Contract(
            "Mecke-formula means need a pairwise (Boolean or classical) model".into(),
        ));
    }
    Ok(())
}

fn require_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(PercoError::Config(format!("{name} must be positive and finite, got {x}")))
    }
}

fn origin_ball_radius(window: &Window) -> Result<f64> {
    match window {
        Window::Ball { center, radius } if center.iter().all(|&c| c == 0.0) => Ok(*radius),
        _ => Err(PercoError::Config(
            "this mean needs a ball window centered at the origin".into(),
        )),
    }
}

/// E[# edges with an endpoint in B(0, r) and length > c·r], in infinite
/// volume (`window = None`) or counting only edges inside an origin-centered
/// ball window.
pub fn campbell_long_edges(
    model: &ModelSpec,
    intensity: f64,
    r: f64,
    c: f64,
    window: Option<&Window>,
    rel_tol: f64,
) -> Result<IntegralVerdict> {
    require_pairwise(model)?;
    require_positive("r", r)?;
    require_positive("c", c)?;
    if !(intensity >= 0.0) {
        return Err(PercoError::Config(format!("intensity must be >= 0, got {intensity}")));
    }
    let d = model.dim;
    let lam2 = intensity * intensity;
    let v = match window {
        None => {
            let vr = ball_volume(d, r);
            radial_mean(
                model,
                |rho| vr - 0.5 * lens_volume(d, r, r, rho),
                c * r,
                f64::INFINITY,
                &[2.0 * r],
                rel_tol,
            )
        }
        Some(w) => {
            let rw = origin_ball_radius(w)?;
            if rw < r {
                return Err(PercoError::Config(format!(
                    "window radius {rw} is smaller than the event ball {r}"
                )));
            }
            radial_mean(
                model,
                |rho| lens_volume(d, r, rw, rho) - 0.5 * lens_volume(d, r, r, rho),
                c * r,
                r + rw,
                &[2.0 * r, rw - r],
                rel_tol,
            )
        }
    };
    Ok(scale(v, lam2))
}

/// E[# edges between B(0, a) and the exterior of B(0, R)], R ≥ a. For a
/// generalized model this bounds the mean through the base probability.
pub fn campbell_exterior_edges(
    model: &ModelSpec,
    intensity: f64,
    source_radius: f64,
    window_radius: f64,
    rel_tol: f64,
) -> Result<IntegralVerdict> {
    model.validate()?;
    require_positive("source radius", source_radius)?;
    if window_radius < source_radius {
        return Err(PercoError::Config(
            "window radius must be at least the source radius".into(),
        ));
    }
    let d = model.dim;
    let va = ball_volume(d, source_radius);
    let v = radial_mean(
        model,
        |rho| va - lens_volume(d, source_radius, window_radius, rho),
        window_radius - source_radius,
        f64::INFINITY,
        &[window_radius + source_radius],
        rel_tol,
    );
    Ok(scale(v, intensity * intensity))
}

/// Expected number of edges the window misses that could change `event`:
/// edges from the inspected ball to the window exterior. Zero for events
/// local to the window.
pub fn truncation_bound(
    model: &ModelSpec,
    intensity: f64,
    event: &EventSpec,
    window: &Window,
    rel_tol: f64,
) -> Result<IntegralVerdict> {
    let Some(a) = event.truncation_source() else {
        return Ok(IntegralVerdict::Finite {
            value: 0.0,
            error: 0.0,
        });
    };
    let rw = origin_ball_radius(window)?;
    campbell_exterior_edges(model, intensity, a, rw, rel_tol)
}

/// E[# edges with both endpoints in the window]. Box windows need d ≤ 3.
pub fn campbell_edges_in_window(
    model: &ModelSpec,
    intensity: f64,
    window: &Window,
    rel_tol: f64,
) -> Result<f64> {
    require_pairwise(model)?;
    window.validate()?;
    let d = model.dim;
    if window.dim() != d {
        return Err(PercoError::Config("window and model dimensions differ".into()));
    }
    let half_lam2 = 0.5 * intensity * intensity;
    let v = match window {
        Window::Ball { radius, .. } => {
            let rw = *radius;
            radial_mean(
                model,
                |rho| lens_volume(d, rw, rw, rho),
                0.0,
                2.0 * rw,
                &[],
                rel_tol,
            )
        }
        Window::Box { lower, upper } => {
            if d > 3 {
                return Err(PercoError::Config(
                    "box-window edge means are implemented for d <= 3".into(),
                ));
            }
            let sides: Vec<f64> = lower.iter().zip(upper).map(|(l, u)| u - l).collect();
            let diag = sides.iter().map(|s| s * s).sum::<f64>().sqrt();
            let mut breaks = sides.clone();
            for i in 0..d {
                for j in i + 1..d {
                    breaks.push(sides[i].hypot(sides[j]));
                }
            }
            let sigma = unit_sphere_area(d);
            // radial_mean multiplies by σ_d; pass the angular covariogram average
            radial_mean(
                model,
                |rho| box_covariogram_sphere(&sides, rho) / sigma,
                0.0,
                diag,
                &breaks,
                rel_tol,
            )
        }
    };
    match v {
        IntegralVerdict::Finite { value, .. } => Ok(half_lam2 * value),
        other => Err(PercoError::Consistency(format!(
            "edge-count quadrature failed: {other:?}"
        ))),
    }
}

/// ∫_{S^{d−1}} ∏_a (L_a − ρ|θ_a|)₊ dθ.
fn box_covariogram_sphere(sides: &[f64], rho: f64) -> f64 {
    let pos = |x: f64| x.max(0.0);
    let tol = 1e-11;
    match sides.len() {
        1 => 2.0 * pos(sides[0] - rho),
        2 => {
            let (l1, l2) = (sides[0], sides[1]);
            let mut br = Vec::new();
            if rho > l1 {
                br.push((l1 / rho).acos());
            }
            if rho > l2 {
                br.push((l2 / rho).asin());
            }
            let f = |t: f64| pos(l1 - rho * t.cos()) * pos(l2 - rho * t.sin());
            4.0 * integrate_with_breaks(f, 0.0, std::f64::consts::FRAC_PI_2, &br, 1e-300, tol, 400)
                .value
        }
        3 => {
            let (l1, l2, l3) = (sides[0], sides[1], sides[2]);
            let mut br_phi = Vec::new();
            if rho > l3 {
                br_phi.push((l3 / rho).acos());
            }
            for l in [l1, l2] {
                if rho > l {
                    br_phi.push((l / rho).asin());
                }
            }
            let outer = |phi: f64| {
                let (sp, cp) = phi.sin_cos();
                let z = pos(l3 - rho * cp);
                if z == 0.0 || sp == 0.0 {
                    return 0.0;
                }
                let rr = rho * sp;
                let mut br = Vec::new();
                if rr > l1 {
                    br.push((l1 / rr).acos());
                }
                if rr > l2 {
                    br.push((l2 / rr).asin());
                }
                let inner = integrate_with_breaks(
                    |t| pos(l1 - rr * t.cos()) * pos(l2 - rr * t.sin()),
                    0.0,
                    std::f64::consts::FRAC_PI_2,
                    &br,
                    1e-300,
                    tol,
                    400,
                );
                sp * z * inner.value
            };
            8.0 * integrate_with_breaks(outer, 0.0, std::f64::consts::FRAC_PI_2, &br_phi, 1e-300, tol, 400)
                .value
        }
        _ => unreachable!("checked by caller"),
    }
}
