//! Monotone coupling of graphs at two intensities by independent thinning.
//!
//! The low cloud keeps each high-cloud point with probability λ_low/λ_high
//! and inherits its id. Edge variates are keyed by ids, so building both
//! graphs with the same edge seed makes the low graph exactly the subgraph
//! of the high graph induced by the retained points.

use crate::error::{PercoError, Result};
use crate::estimators::{run_replicates, Estimate, McSettings};
use crate::events::EventSpec;
use crate::graph::{build_graph_budgeted, GeomGraph};
use crate::model::ModelSpec;
use crate::ppp::{sample_ppp_budgeted, Budget, PointCloud, Window};
use crate::rng::{derive_seed, point_uniform};

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPair {
    pub lambda_low: f64,
    pub lambda_high: f64,
    pub high: PointCloud,
    /// retention flag per high-cloud point
    pub retained: Vec<bool>,
    pub low: PointCloud,
}

impl CoupledPair {
    /// Index in the high cloud of each low-cloud point.
    pub fn low_to_high(&self) -> Vec<usize> {
        (0..self.high.len()).filter(|&i| self.retained[i]).collect()
    }
}

/// Retention rule shared by every thinning in the crate.
#[inline]
pub(crate) fn retained(seed: u64, id: u64, keep_prob: f64) -> bool {
    point_uniform(seed, id) < keep_prob
}

pub fn thin_pair(window: &Window, lambda_low: f64, lambda_high: f64, seed: u64) -> Result<CoupledPair> {
    thin_pair_budgeted(window, lambda_low, lambda_high, seed, &Budget::from_env())
}

pub fn thin_pair_budgeted(
    window: &Window,
    lambda_low: f64,
    lambda_high: f64,
    seed: u64,
    budget: &Budget,
) -> Result<CoupledPair> {
    if !(lambda_low >= 0.0) || !(lambda_low <= lambda_high) {
        return Err(PercoError::Config(format!(
            "thinning needs 0 <= lambda_low <= lambda_high, got {lambda_low} and {lambda_high}"
        )));
    }
    let high = sample_ppp_budgeted(window, lambda_high, derive_seed(seed, &[0]), budget)?;
    let keep_prob = if lambda_low == lambda_high {
        1.0
    } else {
        lambda_low / lambda_high
    };
    let thin_seed = derive_seed(seed, &[1]);
    let flags: Vec<bool> = high
        .ids()
        .iter()
        .map(|&id| retained(thin_seed, id, keep_prob))
        .collect();
    let low = high.retain_subset(&flags, lambda_low);
    Ok(CoupledPair {
        lambda_low,
        lambda_high,
        high,
        retained: flags,
        low,
    })
}

/// Builds (low, high) graphs with shared edge variates.
pub fn coupled_graphs(
    pair: &CoupledPair,
    model: &ModelSpec,
    seed: u64,
    budget: &Budget,
) -> Result<(GeomGraph, GeomGraph)> {
    if model.is_generalized() {
        return Err(PercoError::Contract(
            "coupling is only exact for pairwise models; generalized probabilities depend on the surrounding points".into(),
        ));
    }
    let low = build_graph_budgeted(pair.low.clone(), model, seed, budget)?;
    let high = build_graph_budgeted(pair.high.clone(), model, seed, budget)?;
    Ok((low, high))
}

/// Whether `low` equals the subgraph of `high` induced by the retained points.
pub fn is_induced_subgraph(pair: &CoupledPair, low: &GeomGraph, high: &GeomGraph) -> bool {
    let mut high_to_low = vec![u32::MAX; pair.high.len()];
    for (li, hi) in pair.low_to_high().into_iter().enumerate() {
        high_to_low[hi] = li as u32;
    }
    let induced: Vec<(u32, u32)> = high
        .edges()
        .iter()
        .filter_map(|&(a, b)| {
            let (la, lb) = (high_to_low[a as usize], high_to_low[b as usize]);
            (la != u32::MAX && lb != u32::MAX).then(|| (la.min(lb), la.max(lb)))
        })
        .collect();
    // the low-index order matches the high-index order, so induced is sorted
    induced == low.edges()
}

/// Exact per-replicate checks over coupled replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingCheck {
    pub replicates: usize,
    pub induced_failures: usize,
    /// (event, replicates with the event in the low graph but not the high)
    pub monotonicity_failures: Vec<(String, usize)>,
    /// per event: (hits low, hits high)
    pub hits: Vec<(u64, u64)>,
}

/// Runs `settings.trials` coupled replicates and checks the induced-subgraph
/// identity and the monotonicity of each event.
pub fn check_coupling(
    model: &ModelSpec,
    lambda_low: f64,
    lambda_high: f64,
    events: &[EventSpec],
    window: &Window,
    settings: &McSettings,
) -> Result<CouplingCheck> {
    model.validate()?;
    settings.validate()?;
    for e in events {
        e.validate(model.dim)?;
    }
    let rows = run_replicates(settings.trials, |k| {
        let pair = thin_pair_budgeted(
            window,
            lambda_low,
            lambda_high,
            derive_seed(settings.seed, &[k, 0]),
            &settings.budget,
        )?;
        let (low, high) = coupled_graphs(&pair, model, derive_seed(settings.seed, &[k, 1]), &settings.budget)?;
        let induced = is_induced_subgraph(&pair, &low, &high);
        let mut outcomes = Vec::with_capacity(events.len());
        for e in events {
            outcomes.push((e.evaluate(&low)?, e.evaluate(&high)?));
        }
        Ok((induced, outcomes))
    })?;
    let mut monotonicity_failures: Vec<(String, usize)> =
        events.iter().map(|e| (e.describe(), 0)).collect();
    let mut hits = vec![(0u64, 0u64); events.len()];
    for (_, outcomes) in &rows {
        for (j, &(lo, hi)) in outcomes.iter().enumerate() {
            if lo && !hi {
                monotonicity_failures[j].1 += 1;
            }
            hits[j].0 += lo as u64;
            hits[j].1 += hi as u64;
        }
    }
    Ok(CouplingCheck {
        replicates: rows.len(),
        induced_failures: rows.iter().filter(|r| !r.0).count(),
        monotonicity_failures,
        hits,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma2Report {
    pub lambda: f64,
    pub lambda_prime: f64,
    pub r: f64,
    /// P_λ(L(r,1)) and P_λ'(L(r,1)) on coupled replicates
    pub low: Estimate,
    pub high: Estimate,
    /// (λ/λ')²·high.ci_low ≤ low.ci_high
    pub lower_not_violated: bool,
    /// low.ci_low ≤ high.ci_high
    pub upper_not_violated: bool,
    /// replicates with L(r,1) in the low graph but not in the high graph
    pub upper_violations: usize,
    pub induced_failures: usize,
}

/// (λ/λ')² P_λ'(L(r,1)) ≤ P_λ(L(r,1)) ≤ P_λ'(L(r,1)) on coupled replicates.
pub fn check_lemma2(
    model: &ModelSpec,
    lambda: f64,
    lambda_prime: f64,
    r: f64,
    settings: &McSettings,
) -> Result<Lemma2Report> {
    if !(lambda > 0.0 && lambda <= lambda_prime) {
        return Err(PercoError::Config(format!(
            "need 0 < lambda <= lambda', got {lambda} and {lambda_prime}"
        )));
    }
    let event = EventSpec::LongEdge { r, c: 1.0 };
    let window = event.policy_window(model.dim, settings.margin);
    let check = check_coupling(model, lambda, lambda_prime, std::slice::from_ref(&event), &window, settings)?;
    let n = check.replicates as u64;
    let low = Estimate::wilson(check.hits[0].0, n, settings.confidence);
    let high = Estimate::wilson(check.hits[0].1, n, settings.confidence);
    let ratio = lambda / lambda_prime;
    Ok(Lemma2Report {
        lambda,
        lambda_prime,
        r,
        lower_not_violated: ratio * ratio * high.ci_low <= low.ci_high,
        upper_not_violated: low.ci_low <= high.ci_high,
        upper_violations: check.monotonicity_failures[0].1,
        induced_failures: check.induced_failures,
        low,
        high,
    })
}
