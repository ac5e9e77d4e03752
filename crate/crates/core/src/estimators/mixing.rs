//! Covariance of the localized crossing indicators at 0 and at a far center.

use super::{run_replicates, replicate_graph, z_value, McSettings};
use crate::error::{PercoError, Result};
use crate::events::local_crossing_event;
use crate::geometry::norm;
use crate::model::ModelSpec;
use crate::ppp::Window;

/// Minimum replicate count for the normal approximation.
pub const MIN_MIXING_TRIALS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct MixingEstimate {
    pub trials: u64,
    /// P(G(r)), P(G(r, x)), P(both)
    pub p_origin: f64,
    pub p_far: f64,
    pub p_both: f64,
    pub cov: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
}

impl MixingEstimate {
    pub fn ci_contains_zero(&self) -> bool {
        self.ci_low <= 0.0 && 0.0 <= self.ci_high
    }
}

/// Sample covariance of 1{G(r)} and 1{G(r, x)} on shared graphs, with a
/// normal interval from the influence-function standard error. The window
/// is the bounding box of B(0, 3r) ∪ B(x, 3r) widened by the margin.
pub fn estimate_mixing_cov(
    model: &ModelSpec,
    intensity: f64,
    r: f64,
    x: &[f64],
    settings: &McSettings,
) -> Result<MixingEstimate> {
    model.validate()?;
    settings.validate()?;
    if x.len() != model.dim {
        return Err(PercoError::Config("center dimension differs from the model".into()));
    }
    if !(r > 0.0) || norm(x) <= 6.0 * r {
        return Err(PercoError::Config(format!(
            "need r > 0 and |x| > 6r, got r={r}, |x|={}",
            norm(x)
        )));
    }
    if settings.trials < MIN_MIXING_TRIALS {
        return Err(PercoError::Config(format!(
            "covariance estimates need at least {MIN_MIXING_TRIALS} trials, got {}",
            settings.trials
        )));
    }
    let reach = (3.0 + settings.margin) * r;
    let lower: Vec<f64> = x.iter().map(|&v| v.min(0.0) - reach).collect();
    let upper: Vec<f64> = x.iter().map(|&v| v.max(0.0) + reach).collect();
    let window = Window::Box { lower, upper };
    let origin = vec![0.0; model.dim];
    let pairs = run_replicates(settings.trials, |k| {
        let g = replicate_graph(model, intensity, &window, settings.seed, k, &settings.budget)?;
        Ok((
            local_crossing_event(&g, r, &origin)?,
            local_crossing_event(&g, r, x)?,
        ))
    })?;
    let n = pairs.len() as f64;
    let a: Vec<f64> = pairs.iter().map(|p| p.0 as u8 as f64).collect();
    let b: Vec<f64> = pairs.iter().map(|p| p.1 as u8 as f64).collect();
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let both = pairs.iter().filter(|p| p.0 && p.1).count() as f64 / n;
    let terms: Vec<f64> = a.iter().zip(&b).map(|(u, v)| (u - ma) * (v - mb)).collect();
    let cov = terms.iter().sum::<f64>() / (n - 1.0);
    let mean_term = terms.iter().sum::<f64>() / n;
    let var_term = terms.iter().map(|t| (t - mean_term).powi(2)).sum::<f64>() / (n - 1.0);
    let std_error = (var_term / n).sqrt();
    let z = z_value(settings.confidence);
    Ok(MixingEstimate {
        trials: settings.trials as u64,
        p_origin: ma,
        p_far: mb,
        p_both: both,
        cov,
        std_error,
        ci_low: cov - z * std_error,
        ci_high: cov + z * std_error,
        confidence: settings.confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RadiusLaw;

    #[test]
    fn zero_intensity_has_zero_covariance() {
        let model = ModelSpec::boolean(2, RadiusLaw::Fixed { radius: 0.5 });
        let s = McSettings {
            trials: 1000,
            ..McSettings::default()
        };
        let m = estimate_mixing_cov(&model, 0.0, 1.0, &[7.0, 0.0], &s).unwrap();
        assert_eq!(m.cov, 0.0);
        assert!(m.ci_contains_zero());
    }

    #[test]
    fn rejects_close_centers_and_small_runs() {
        let model = ModelSpec::boolean(2, RadiusLaw::Fixed { radius: 0.5 });
        let s = McSettings {
            trials: 1000,
            ..McSettings::default()
        };
        assert!(estimate_mixing_cov(&model, 1.0, 1.0, &[5.0, 0.0], &s).is_err());
        let few = McSettings { trials: 10, ..s };
        assert!(estimate_mixing_cov(&model, 1.0, 1.0, &[7.0, 0.0], &few).is_err());
    }
}
