//! Concrete profile functions, kernels and radius laws.

use crate::error::{PercoError, Result};

/// Nonincreasing profile ρ: [0, ∞) → [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// ρ(t) = 1 if t ≤ θ, else 0 (right-continuous at θ in the sense ρ(θ) = 1).
    Indicator { theta: f64 },
    /// ρ(t) = min(1, t^{-δ}), δ > 1.
    Polynomial { delta: f64 },
    /// Piecewise-linear through knots (t_k, v_k); constant outside the knot range.
    Tabulated { knots: Vec<(f64, f64)> },
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::Indicator { theta } => {
                if !(*theta >= 0.0 && theta.is_finite()) {
                    return Err(PercoError::Config(format!("indicator θ must be ≥ 0, got {theta}")));
                }
            }
            Profile::Polynomial { delta } => {
                if !(*delta > 1.0 && delta.is_finite()) {
                    return Err(PercoError::Config(format!(
                        "polynomial profile needs δ > 1, got {delta}"
                    )));
                }
            }
            Profile::Tabulated { knots } => {
                if knots.is_empty() {
                    return Err(PercoError::Config("tabulated profile needs knots".into()));
                }
                for (t, v) in knots {
                    if !(*t >= 0.0 && t.is_finite()) || !(0.0..=1.0).contains(v) {
                        return Err(PercoError::Config(format!(
                            "tabulated knot ({t}, {v}) out of range"
                        )));
                    }
                }
                for w in knots.windows(2) {
                    if !(w[1].0 > w[0].0) || w[1].1 > w[0].1 {
                        return Err(PercoError::Config(
                            "tabulated knots must have increasing t and nonincreasing values"
                                .into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Profile::Indicator { theta } => {
                if t <= *theta {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Polynomial { delta } => {
                if t <= 1.0 {
                    1.0
                } else {
                    t.powf(-delta)
                }
            }
            Profile::Tabulated { knots } => {
                let first = knots[0];
                if t <= first.0 {
                    return first.1;
                }
                let idx = knots.partition_point(|k| k.0 < t);
                if idx >= knots.len() {
                    return knots[knots.len() - 1].1;
                }
                let (t0, v0) = knots[idx - 1];
                let (t1, v1) = knots[idx];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Arguments where ρ is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile::Indicator { theta } => vec![*theta],
            Profile::Polynomial { .. } => vec![1.0],
            Profile::Tabulated { knots } => knots.iter().map(|k| k.0).collect(),
        }
    }

    /// Smallest t₀ with ρ(t) = 0 for all t > t₀, if any.
    pub fn support(&self) -> Option<f64> {
        match self {
            Profile::Indicator { theta } => Some(*theta),
            Profile::Polynomial { .. } => None,
            Profile::Tabulated { knots } => {
                if knots[knots.len() - 1].1 > 0.0 {
                    return None;
                }
                match knots.iter().rposition(|k| k.1 > 0.0) {
                    Some(i) => Some(knots[i + 1].0),
                    None => Some(0.0),
                }
            }
        }
    }

    pub fn formula(&self) -> String {
        match self {
            Profile::Indicator { theta } => format!("rho(t) = 1{{t <= {theta}}}"),
            Profile::Polynomial { delta } => format!("rho(t) = min(1, t^-{delta})"),
            Profile::Tabulated { knots } => format!(
                "rho(t) = piecewise linear through {}",
                knots
                    .iter()
                    .map(|(t, v)| format!("({t}, {v})"))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        }
    }
}

/// Symmetric weight kernel g(w, v) > 0, nonincreasing in each weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// g = 1 (weight-free long-range percolation)
    Plain,
    /// g = (w·v)^{-1}
    Product,
    /// g = (w + v)^{-1}
    Sum,
    /// g = max(w, v)^{-1}
    Max,
}

impl Kernel {
    #[inline]
    pub fn eval(&self, w: f64, v: f64) -> f64 {
        match self {
            Kernel::Plain => 1.0,
            Kernel::Product => 1.0 / (w * v),
            Kernel::Sum => 1.0 / (w + v),
            Kernel::Max => 1.0 / w.max(v),
        }
    }

    pub fn uses_weights(&self) -> bool {
        !matches!(self, Kernel::Plain)
    }

    pub fn formula(&self) -> &'static str {
        match self {
            Kernel::Plain => "g(w,v) = 1",
            Kernel::Product => "g(w,v) = 1/(w*v)",
            Kernel::Sum => "g(w,v) = 1/(w+v)",
            Kernel::Max => "g(w,v) = 1/max(w,v)",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Plain => "plain",
            Kernel::Product => "product",
            Kernel::Sum => "sum",
            Kernel::Max => "max",
        }
    }
}

/// Boolean-model radius as a monotone function of the mark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusLaw {
    Fixed { radius: f64 },
    /// R = lo + (hi − lo)·u
    Uniform { lo: f64, hi: f64 },
    /// R = scale·u^{-1/shape}; P(R > x) = (x/scale)^{-shape} for x ≥ scale
    Pareto { scale: f64, shape: f64 },
}

impl RadiusLaw {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            RadiusLaw::Fixed { radius } => radius >= 0.0 && radius.is_finite(),
            RadiusLaw::Uniform { lo, hi } => lo >= 0.0 && hi > lo && hi.is_finite(),
            RadiusLaw::Pareto { scale, shape } => {
                scale > 0.0 && shape > 0.0 && scale.is_finite() && shape.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(PercoError::Config(format!("invalid radius law {self:?}")))
        }
    }

    #[inline]
    pub fn radius(&self, u: f64) -> f64 {
        match *self {
            RadiusLaw::Fixed { radius } => radius,
            RadiusLaw::Uniform { lo, hi } => lo + (hi - lo) * u,
            RadiusLaw::Pareto { scale, shape } => scale * u.powf(-1.0 / shape),
        }
    }

    pub fn max_radius(&self) -> Option<f64> {
        match *self {
            RadiusLaw::Fixed { radius } => Some(radius),
            RadiusLaw::Uniform { hi, .. } => Some(hi),
            RadiusLaw::Pareto { .. } => None,
        }
    }

    /// Mark at which the radius equals `r`, when the law is strictly monotone
    /// and `r` is attained on (0, 1).
    pub fn mark_for_radius(&self, r: f64) -> Option<f64> {
        let u = match *self {
            RadiusLaw::Fixed { .. } => return None,
            RadiusLaw::Uniform { lo, hi } => (r - lo) / (hi - lo),
            RadiusLaw::Pareto { scale, shape } => (r / scale).powf(-shape),
        };
        (u > 0.0 && u < 1.0).then_some(u)
    }

    /// Whether E[R^d] < ∞.
    pub fn finite_moment(&self, d: usize) -> bool {
        match *self {
            RadiusLaw::Pareto { shape, .. } => shape > d as f64,
            _ => true,
        }
    }

    pub fn formula(&self) -> String {
        match self {
            RadiusLaw::Fixed { radius } => format!("R = {radius}"),
            RadiusLaw::Uniform { lo, hi } => format!("R = {lo} + ({hi} - {lo})*u"),
            RadiusLaw::Pareto { scale, shape } => format!("R = {scale}*u^(-1/{shape})"),
        }
    }
}
