//! Renormalization diagnostics: the crossing probability at scale 10r
//! against the square of the crossing probability at scale r, and a
//! finite-scale bracket for the intensity where crossings become likely.

use crate::coupling::retained;
use crate::error::{PercoError, Result};
use crate::estimators::{run_replicates, Estimate, McSettings};
use crate::events::{crossing_event, f_event, local_crossing_event, long_edge_event, EventSpec};
use crate::geometry::ball_volume;
use crate::graph::build_graph_budgeted;
use crate::model::ModelSpec;
use crate::ppp::sample_ppp_budgeted;
use crate::rng::derive_seed;

/// Constants of the renormalization inequality
/// P(C(10r)) ≤ C·P(·)² + P(F(r)) + C·C_mix·λ·r^{−ζ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenormParams {
    /// the dimension-dependent constant C (not known explicitly)
    pub constant: f64,
    /// (C_mix, ζ); required for generalized models, ignored otherwise
    pub mixing: Option<(f64, f64)>,
}

impl Default for RenormParams {
    fn default() -> Self {
        Self {
            constant: 1.0,
            mixing: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenormRow {
    pub r: f64,
    /// P(C(10r))
    pub lhs: Estimate,
    /// P(G(r)), P(C(r)), P(F(r))
    pub g_est: Estimate,
    pub c_est: Estimate,
    pub f_est: Estimate,
    /// mixing term C_mix·λ·r^{−ζ} (0 for pairwise models)
    pub mixing_term: f64,
    /// minimal C with lhs ≤ C·(c² + mixing) + f; `None` when undefined
    pub fitted_c: Option<f64>,
    /// C·c² + f + C·mixing with the configured C
    pub bound: f64,
    /// replicates where G(r) or L(r,3) held without C(r)
    pub inclusion_failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenormTable {
    pub rows: Vec<RenormRow>,
    /// max fitted C ≤ 2·min fitted C over the defined rows
    pub fitted_stable: Option<bool>,
    pub params: RenormParams,
}

/// Estimates P(C(10r)), P(G(r)), P(C(r)), P(F(r)) on shared replicates in
/// the window B(0, (21 + ε)r) for each r.
pub fn renorm_table(
    model: &ModelSpec,
    intensity: f64,
    rs: &[f64],
    settings: &McSettings,
    params: &RenormParams,
) -> Result<RenormTable> {
    model.validate()?;
    settings.validate()?;
    if model.is_generalized() && params.mixing.is_none() {
        return Err(PercoError::Config(
            "generalized models need the mixing constants (C_mix, zeta)".into(),
        ));
    }
    if !(params.constant > 0.0) {
        return Err(PercoError::Config("the renormalization constant must be > 0".into()));
    }
    let d = model.dim;
    let origin = vec![0.0; d];
    let mut rows = Vec::with_capacity(rs.len());
    for (i, &r) in rs.iter().enumerate() {
        EventSpec::Crossing { r }.validate(d)?;
        let window = EventSpec::FarEdge { r }.policy_window(d, settings.margin);
        let seed = derive_seed(settings.seed, &[i as u64]);
        let outcomes = run_replicates(settings.trials, |k| {
            let cloud = sample_ppp_budgeted(&window, intensity, derive_seed(seed, &[k, 0]), &settings.budget)?;
            let g = build_graph_budgeted(cloud, model, derive_seed(seed, &[k, 1]), &settings.budget)?;
            let big = crossing_event(&g, 10.0 * r)?;
            let local = local_crossing_event(&g, r, &origin)?;
            let cross = crossing_event(&g, r)?;
            let far = f_event(&g, r)?;
            let long3 = long_edge_event(&g, r, 3.0)?;
            Ok([big, local, cross, far, (local || long3) && !cross])
        })?;
        let n = settings.trials as u64;
        let est = |j: usize| {
            Estimate::wilson(
                outcomes.iter().filter(|o| o[j]).count() as u64,
                n,
                settings.confidence,
            )
        };
        let (lhs, g_est, c_est, f_est) = (est(0), est(1), est(2), est(3));
        let mixing_term = match (model.is_generalized(), params.mixing) {
            (true, Some((c_mix, zeta))) => c_mix * intensity * r.powf(-zeta),
            _ => 0.0,
        };
        let denom = c_est.p_hat * c_est.p_hat + mixing_term;
        let fitted_c = (denom > 0.0).then(|| ((lhs.p_hat - f_est.p_hat) / denom).max(0.0));
        rows.push(RenormRow {
            r,
            bound: params.constant * denom + f_est.p_hat,
            lhs,
            g_est,
            c_est,
            f_est,
            mixing_term,
            fitted_c,
            inclusion_failures: outcomes.iter().filter(|o| o[4]).count(),
        });
    }
    let fitted: Vec<f64> = rows.iter().filter_map(|r| r.fitted_c).collect();
    let fitted_stable = (!fitted.is_empty()).then(|| {
        let lo = fitted.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = fitted.iter().copied().fold(0.0, f64::max);
        hi <= 2.0 * lo
    });
    Ok(RenormTable {
        rows,
        fitted_stable,
        params: *params,
    })
}

pub const BRACKET_LABEL: &str = "finite-scale proxy at r = r_probe";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketFlag {
    /// the threshold lies between the returned endpoints
    Crossed,
    /// p̂ stays below the threshold up to λ_max
    NeverCrosses,
    /// p̂ is already at or above the threshold at λ_min
    AlwaysAbove,
}

impl BracketFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            BracketFlag::Crossed => "crossed",
            BracketFlag::NeverCrosses => "never crosses threshold",
            BracketFlag::AlwaysAbove => "above threshold at lambda_min",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketOptions {
    pub threshold: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub max_iterations: usize,
    /// `None`: the largest scale whose window holds 1e5 expected points at λ_max
    pub r_probe: Option<f64>,
}

impl Default for BracketOptions {
    fn default() -> Self {
        Self {
            threshold: 0.5,
            lambda_min: 0.01,
            lambda_max: 5.0,
            max_iterations: 12,
            r_probe: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub flag: BracketFlag,
    pub r_probe: f64,
    pub iterations: usize,
    /// every evaluated (λ, estimate of P(C(r_probe))), in evaluation order
    pub evaluations: Vec<(f64, Estimate)>,
    pub label: &'static str,
}

/// Largest r with λ·|B(0, (2 + ε)r)| ≤ `points`.
pub fn default_probe_scale(d: usize, lambda_max: f64, margin: f64, points: f64) -> f64 {
    (points / (lambda_max * ball_volume(d, 1.0))).powf(1.0 / d as f64) / (2.0 + margin)
}

/// Bisection on λ ↦ P(C(r_probe)) against the threshold. All intensities
/// share replicates: replicate k samples one cloud at λ_max and thins it, so
/// the estimates are monotone in λ replicate by replicate. Bisection stops
/// when the midpoint interval contains the threshold or after
/// `max_iterations` steps.
pub fn bracket_lambda_hat(
    model: &ModelSpec,
    options: &BracketOptions,
    settings: &McSettings,
) -> Result<Bracket> {
    model.validate()?;
    settings.validate()?;
    if model.is_generalized() {
        return Err(PercoError::Contract(
            "bracketing relies on monotonicity in the intensity, which generalized models lack".into(),
        ));
    }
    let BracketOptions {
        threshold,
        lambda_min,
        lambda_max,
        max_iterations,
        ..
    } = *options;
    if !(lambda_min > 0.0 && lambda_max > lambda_min && lambda_max.is_finite()) {
        return Err(PercoError::Config(format!(
            "need 0 < lambda_min < lambda_max, got {lambda_min} and {lambda_max}"
        )));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(PercoError::Config(format!("threshold must lie in (0, 1), got {threshold}")));
    }
    let d = model.dim;
    let r_probe = options
        .r_probe
        .unwrap_or_else(|| default_probe_scale(d, lambda_max, settings.margin, 1e5));
    let event = EventSpec::Crossing { r: r_probe };
    event.validate(d)?;
    let window = event.policy_window(d, settings.margin);

    let estimate_at = |lambda: f64| -> Result<Estimate> {
        let keep = lambda / lambda_max;
        let hits = run_replicates(settings.trials, |k| {
            let high = sample_ppp_budgeted(&window, lambda_max, derive_seed(settings.seed, &[k, 0]), &settings.budget)?;
            let thin_seed = derive_seed(settings.seed, &[k, 2]);
            let flags: Vec<bool> = high.ids().iter().map(|&id| retained(thin_seed, id, keep)).collect();
            let cloud = high.retain_subset(&flags, lambda);
            let g = build_graph_budgeted(cloud, model, derive_seed(settings.seed, &[k, 1]), &settings.budget)?;
            crossing_event(&g, r_probe)
        })?;
        let h = hits.iter().filter(|&&b| b).count() as u64;
        Ok(Estimate::wilson(h, settings.trials as u64, settings.confidence))
    };

    let mut evaluations = Vec::new();
    let record = |lambda: f64, e: Estimate, evals: &mut Vec<(f64, Estimate)>| -> Result<()> {
        evals.push((lambda, e));
        // replicate-wise monotonicity makes hit counts nondecreasing in λ
        for &(l, other) in evals.iter() {
            if (l < lambda && other.hits > e.hits) || (l > lambda && other.hits < e.hits) {
                return Err(PercoError::Consistency(format!(
                    "crossing counts decrease in the intensity: {} hits at {l}, {} at {lambda}",
                    other.hits, e.hits
                )));
            }
        }
        Ok(())
    };

    let top = estimate_at(lambda_max)?;
    record(lambda_max, top, &mut evaluations)?;
    if top.p_hat < threshold {
        return Ok(Bracket {
            lambda_lo: lambda_max,
            lambda_hi: lambda_max,
            flag: BracketFlag::NeverCrosses,
            r_probe,
            iterations: 0,
            evaluations,
            label: BRACKET_LABEL,
        });
    }
    let bottom = estimate_at(lambda_min)?;
    record(lambda_min, bottom, &mut evaluations)?;
    if bottom.p_hat >= threshold {
        return Ok(Bracket {
            lambda_lo: lambda_min,
            lambda_hi: lambda_min,
            flag: BracketFlag::AlwaysAbove,
            r_probe,
            iterations: 0,
            evaluations,
            label: BRACKET_LABEL,
        });
    }
    let (mut lo, mut hi) = (lambda_min, lambda_max);
    let mut iterations = 0;
    while iterations < max_iterations {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let e = estimate_at(mid)?;
        record(mid, e, &mut evaluations)?;
        if e.ci_low > threshold {
            hi = mid;
        } else if e.ci_high < threshold {
            lo = mid;
        } else {
            // the threshold is inside the interval at mid; narrow to the side of p̂
            if e.p_hat >= threshold {
                hi = mid;
            } else {
                lo = mid;
            }
            break;
        }
    }
    Ok(Bracket {
        lambda_lo: lo,
        lambda_hi: hi,
        flag: BracketFlag::Crossed,
        r_probe,
        iterations,
        evaluations,
        label: BRACKET_LABEL,
    })
}
