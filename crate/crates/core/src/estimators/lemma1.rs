//! Covering inequality between long-edge events at two ball sizes:
//! n(c'/c)·P(∃x∼y, x ∈ B(0,r), |y−x| > c'r) ≥ P(∃x∼y, x ∈ B(0,c'r/c), |y−x| > c'r).

use super::{covering_number, run_replicates, replicate_graph, Estimate, McSettings};
use crate::error::{PercoError, Result};
use crate::events::{long_edge_event, long_edge_near};
use crate::model::ModelSpec;
use crate::ppp::Window;

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    pub covering_count: usize,
    /// P(L(r, c'))
    pub lhs: Estimate,
    /// P(L(c'r/c, c))
    pub rhs: Estimate,
    /// replicates where the large-ball event held but no covering ball saw
    /// a long edge (must be zero)
    pub union_bound_failures: usize,
    /// n·lhs.ci_high ≥ rhs.ci_low
    pub not_violated: bool,
}

pub fn check_lemma1(
    model: &ModelSpec,
    intensity: f64,
    r: f64,
    c: f64,
    c_prime: f64,
    settings: &McSettings,
) -> Result<Lemma1Report> {
    model.validate()?;
    settings.validate()?;
    if !(c > 0.0 && c_prime >= c && r > 0.0) {
        return Err(PercoError::Config(format!(
            "need r > 0 and c' >= c > 0, got r={r}, c={c}, c'={c_prime}"
        )));
    }
    let d = model.dim;
    let q = c_prime / c;
    let cover = covering_number(q, d);
    let centers: Vec<Vec<f64>> = cover
        .centers
        .iter()
        .map(|z| z.iter().map(|x| x * r).collect())
        .collect();
    // both events are exact on B(0, (q + c')r)
    let window = Window::centered_ball(d, (q + c_prime + settings.margin) * r);
    let outcomes = run_replicates(settings.trials, |k| {
        let g = replicate_graph(model, intensity, &window, settings.seed, k, &settings.budget)?;
        let lhs = long_edge_event(&g, r, c_prime)?;
        let rhs = long_edge_event(&g, q * r, c)?;
        let covered = !rhs
            || centers
                .iter()
                .any(|z| long_edge_near(&g, z, r, c_prime * r, true));
        Ok((lhs, rhs, covered))
    })?;
    let n = settings.trials as u64;
    let lhs = Estimate::wilson(
        outcomes.iter().filter(|o| o.0).count() as u64,
        n,
        settings.confidence,
    );
    let rhs = Estimate::wilson(
        outcomes.iter().filter(|o| o.1).count() as u64,
        n,
        settings.confidence,
    );
    let union_bound_failures = outcomes.iter().filter(|o| !o.2).count();
    Ok(Lemma1Report {
        covering_count: cover.count,
        not_violated: cover.count as f64 * lhs.ci_high >= rhs.ci_low,
        lhs,
        rhs,
        union_bound_failures,
    })
}
