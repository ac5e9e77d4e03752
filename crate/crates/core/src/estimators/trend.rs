//! Finite-scale probe of whether long-edge probabilities vanish as r grows.
//!
//! The underlying property is a limsup and cannot be decided from finitely
//! many scales; the verdict rules and thresholds are explicit and reported.

use super::{campbell_long_edges, estimate_event, z_value, Estimate, McSettings};
use crate::error::{PercoError, Result};
use crate::events::EventSpec;
use crate::model::ModelSpec;
use crate::rng::derive_seed;

pub const TREND_LABEL: &str = "finite-scale proxy for non-vanishing long-edge probabilities";

/// Geometric grid r_min = r_0 < ... < r_{k-1} = r_max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
}

impl RGrid {
    pub fn geometric(r_min: f64, r_max: f64, count: usize) -> Result<Self> {
        let g = Self { r_min, r_max, count };
        g.validate()?;
        Ok(g)
    }

    /// Ratio-2 grid with `count` points.
    pub fn dyadic(r_min: f64, count: usize) -> Self {
        Self {
            r_min,
            r_max: r_min * 2f64.powi(count as i32 - 1),
            count,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) || self.count < 2 {
            return Err(PercoError::Config(format!(
                "r-grid needs 0 < r_min < r_max and at least 2 points, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let k = self.count;
        (0..k)
            .map(|i| {
                if i + 1 == k {
                    self.r_max
                } else {
                    self.r_min * (self.r_max / self.r_min).powf(i as f64 / (k - 1) as f64)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendOptions {
    /// persistent floor for the last third of ci_low values
    pub p_min: f64,
    /// required decrease first/final for a vanishing verdict
    pub decrease_factor: f64,
}

impl Default for TrendOptions {
    fn default() -> Self {
        Self {
            p_min: 0.05,
            decrease_factor: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Vanishing,
    Persistent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Vanishing => "vanishing",
            Verdict::Persistent => "persistent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    pub c: f64,
    pub rs: Vec<f64>,
    pub estimates: Vec<Estimate>,
    /// expected long-edge counts inside each simulation window (the base
    /// model's for generalized models); `None` when the quadrature failed
    pub campbell: Vec<Option<f64>>,
    /// weighted least-squares slope of log p̂ against log r
    pub slope: Option<f64>,
    pub slope_ci: Option<(f64, f64)>,
    pub verdict: Verdict,
    /// every estimate had zero hits
    pub all_zero: bool,
    /// every Campbell mean is below 0.1/n
    pub campbell_negligible: bool,
    pub options: TrendOptions,
    pub label: &'static str,
}

/// Estimates P(L(r, c)) on the grid and classifies the trend.
pub fn probe_h(
    model: &ModelSpec,
    intensity: f64,
    c: f64,
    grid: &RGrid,
    settings: &McSettings,
    options: &TrendOptions,
) -> Result<TrendReport> {
    grid.validate()?;
    if grid.count < 4 {
        return Err(PercoError::Config("trend probes need at least 4 grid points".into()));
    }
    let rs = grid.points();
    let pairwise = model.pairwise_bound();
    let mut estimates = Vec::with_capacity(rs.len());
    let mut campbell = Vec::with_capacity(rs.len());
    for (i, &r) in rs.iter().enumerate() {
        let event = EventSpec::LongEdge { r, c };
        let s = McSettings {
            seed: derive_seed(settings.seed, &[i as u64]),
            ..*settings
        };
        estimates.push(estimate_event(model, intensity, &event, &s)?);
        let window = event.policy_window(model.dim, settings.margin);
        campbell.push(campbell_long_edges(&pairwise, intensity, r, c, Some(&window), 1e-6)?.value());
    }
    let n = settings.trials as f64;
    let (slope, slope_ci) = match weighted_slope(&rs, &estimates) {
        Some((b, se)) => {
            let z = z_value(settings.confidence);
            (Some(b), Some((b - z * se, b + z * se)))
        }
        None => (None, None),
    };
    let all_zero = estimates.iter().all(|e| e.hits == 0);
    let campbell_negligible = campbell.iter().all(|m| m.is_some_and(|v| v < 0.1 / n));
    let tail = rs.len().div_ceil(3);
    let verdict = if all_zero {
        Verdict::Vanishing
    } else if estimates[rs.len() - tail..]
        .iter()
        .all(|e| e.ci_low > options.p_min)
    {
        Verdict::Persistent
    } else if slope_ci.is_some_and(|(_, hi)| hi < 0.0)
        && estimates[rs.len() - 1].p_hat * options.decrease_factor <= estimates[0].p_hat
    {
        Verdict::Vanishing
    } else {
        Verdict::Inconclusive
    };
    Ok(TrendReport {
        c,
        rs,
        estimates,
        campbell,
        slope,
        slope_ci,
        verdict,
        all_zero,
        campbell_negligible,
        options: *options,
        label: TREND_LABEL,
    })
}

/// Slope and standard error of log p̂ on log r over nonzero estimates, with
/// delta-method weights n·p̂ / (1 − p̂ + 1/n).
fn weighted_slope(rs: &[f64], est: &[Estimate]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64, f64)> = rs
        .iter()
        .zip(est)
        .filter(|(_, e)| e.hits > 0)
        .map(|(r, e)| {
            let n = e.trials as f64;
            (r.ln(), e.p_hat.ln(), n * e.p_hat / (1.0 - e.p_hat + 1.0 / n))
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    Some((sxy / sxx, (1.0 / sxx).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_geometric() {
        let g = RGrid::dyadic(1.0, 6);
        for (a, b) in g.points().iter().zip([1.0, 2.0, 4.0, 8.0, 16.0, 32.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let h = RGrid::geometric(2.0, 18.0, 3).unwrap();
        let p = h.points();
        assert!((p[1] - 6.0).abs() < 1e-12);
        assert!(RGrid::geometric(2.0, 1.0, 4).is_err());
    }

    #[test]
    fn slope_of_exact_power_law() {
        let rs = [1.0, 2.0, 4.0, 8.0];
        let est: Vec<Estimate> = rs
            .iter()
            .map(|r: &f64| {
                let hits = (4000.0 * 0.5 * r.powf(-1.0)).round() as u64;
                Estimate::wilson(hits, 4000, 0.95)
            })
            .collect();
        let (b, se) = weighted_slope(&rs, &est).unwrap();
        assert!((b + 1.0).abs() < 1e-3, "{b}");
        assert!(se > 0.0);
    }
}
