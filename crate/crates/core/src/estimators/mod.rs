//! Monte Carlo estimation of event probabilities, plus the analytic
//! quantities used to cross-check it.
//!
//! Replicate `k` of a run seeded by `seed` samples its cloud from
//! `derive_seed(seed, [k, 0])` and its edge variates from
//! `derive_seed(seed, [k, 1])`. Replicates run on the rayon pool and are
//! folded in index order, so results do not depend on the thread count.

mod campbell;
mod covering;
mod lemma1;
mod mixing;
mod trend;

pub use campbell::{
    campbell_edges_in_window, campbell_exterior_edges, campbell_long_edges, pair_mean,
    truncation_bound,
};
pub use covering::{covering_number, Covering};
pub use lemma1::{check_lemma1, Lemma1Report};
pub use mixing::{estimate_mixing_cov, MixingEstimate};
pub use trend::{probe_h, RGrid, TrendOptions, TrendReport, Verdict};

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{PercoError, Result};
use crate::events::{EventSpec, DEFAULT_MARGIN};
use crate::graph::{build_graph_budgeted, GeomGraph};
use crate::model::ModelSpec;
use crate::ppp::{sample_ppp_budgeted, Budget, Window};
use crate::rng::derive_seed;

/// Binomial proportion with a Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub hits: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
}

impl Estimate {
    pub fn wilson(hits: u64, trials: u64, confidence: f64) -> Self {
        assert!(trials > 0 && hits <= trials, "need 0 <= hits <= trials, trials > 0");
        let n = trials as f64;
        let p = hits as f64 / n;
        let z = z_value(confidence);
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        Self {
            hits,
            trials,
            p_hat: p,
            ci_low: (center - half).clamp(0.0, p),
            ci_high: (center + half).clamp(p, 1.0),
            confidence,
        }
    }

    /// Binomial standard deviation of p̂.
    pub fn sigma(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.trials as f64).sqrt()
    }
}

/// Two-sided standard normal quantile for the given confidence level.
pub fn z_value(confidence: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    normal.inverse_cdf(0.5 + 0.5 * confidence)
}

/// Shared Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    pub trials: usize,
    pub seed: u64,
    pub confidence: f64,
    /// window margin ε in units of the event scale
    pub margin: f64,
    pub budget: Budget,
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0,
            confidence: 0.95,
            margin: DEFAULT_MARGIN,
            budget: Budget::from_env(),
        }
    }
}

impl McSettings {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(PercoError::Config("trials must be at least 1".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(PercoError::Config(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        if !(self.margin >= 0.0 && self.margin.is_finite()) {
            return Err(PercoError::Config(format!("margin must be >= 0, got {}", self.margin)));
        }
        Ok(())
    }
}

/// Runs `f(k)` for k in 0..n in parallel; results in index order. The first
/// error by index is returned.
pub(crate) fn run_replicates<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = (0..n as u64).into_par_iter().map(&f).collect();
    results.into_iter().collect()
}

/// Cloud and graph of replicate `k`.
pub fn replicate_graph(
    model: &ModelSpec,
    intensity: f64,
    window: &Window,
    seed: u64,
    k: u64,
    budget: &Budget,
) -> Result<GeomGraph> {
    let cloud = sample_ppp_budgeted(window, intensity, derive_seed(seed, &[k, 0]), budget)?;
    build_graph_budgeted(cloud, model, derive_seed(seed, &[k, 1]), budget)
}

/// P_λ(event) from independent replicates on the event's policy window.
pub fn estimate_event(
    model: &ModelSpec,
    intensity: f64,
    event: &EventSpec,
    settings: &McSettings,
) -> Result<Estimate> {
    model.validate()?;
    settings.validate()?;
    event.validate(model.dim)?;
    let window = event.policy_window(model.dim, settings.margin);
    estimate_event_in(model, intensity, event, &window, settings)
}

/// As [`estimate_event`] on an explicit window.
pub fn estimate_event_in(
    model: &ModelSpec,
    intensity: f64,
    event: &EventSpec,
    window: &Window,
    settings: &McSettings,
) -> Result<Estimate> {
    settings.validate()?;
    let outcomes = run_replicates(settings.trials, |k| {
        let g = replicate_graph(model, intensity, window, settings.seed, k, &settings.budget)?;
        event.evaluate(&g)
    })?;
    let hits = outcomes.iter().filter(|&&h| h).count() as u64;
    Ok(Estimate::wilson(hits, settings.trials as u64, settings.confidence))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RadiusLaw;

    #[test]
    fn wilson_bounds_are_ordered() {
        for (h, n) in [(0, 10), (3, 10), (10, 10), (1, 1000), (500, 1000)] {
            let e = Estimate::wilson(h, n, 0.95);
            assert!(0.0 <= e.ci_low && e.ci_low <= e.p_hat && e.p_hat <= e.ci_high && e.ci_high <= 1.0);
        }
        let a = Estimate::wilson(10, 100, 0.95);
        let b = Estimate::wilson(100, 1000, 0.95);
        assert!(b.ci_high - b.ci_low < a.ci_high - a.ci_low);
    }

    #[test]
    fn wilson_matches_hand_computation() {
        // 0 of 20 at 95%: upper bound z²/(n+z²)
        let z = 1.959963984540054;
        let e = Estimate::wilson(0, 20, 0.95);
        assert!((e.ci_high - z * z / (20.0 + z * z)).abs() < 1e-12);
        assert_eq!(e.ci_low, 0.0);
    }

    #[test]
    fn zero_intensity_never_hits() {
        let model = ModelSpec::boolean(2, RadiusLaw::Fixed { radius: 1.0 });
        let s = McSettings {
            trials: 50,
            ..McSettings::default()
        };
        let e = estimate_event(&model, 0.0, &EventSpec::LongEdge { r: 1.0, c: 0.5 }, &s).unwrap();
        assert_eq!(e.hits, 0);
        assert_eq!(e.p_hat, 0.0);
    }

    #[test]
    fn replicates_do_not_depend_on_pool_size() {
        let model = ModelSpec::boolean(2, RadiusLaw::Uniform { lo: 0.2, hi: 0.8 });
        let event = EventSpec::Crossing { r: 2.0 };
        let s = McSettings {
            trials: 64,
            seed: 11,
            ..McSettings::default()
        };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_event(&model, 0.8, &event, &s).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
