//! One function per subcommand. Each turns a validated config into result
//! tables (and, for dump-graph, raw point and edge files).

use clap::ValueEnum;
use perco::coupling::check_lemma2;
use perco::estimators::{
    check_lemma1, estimate_event_in, estimate_mixing_cov, probe_h, truncation_bound, Estimate,
    McSettings,
};
use perco::geometry::norm;
use perco::model::{validate_framework, IntegralVerdict, QuadratureBudget};
use perco::ppp::{Budget, Window};
use perco::renorm::{bracket_lambda_hat, renorm_table};

use crate::config::ExperimentConfig;
use crate::output::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Estimate,
    ProbeH,
    CheckLemma1,
    CheckLemma2,
    MixingCov,
    RenormTable,
    BracketLambda,
    ValidateModel,
    DumpGraph,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Estimate => "estimate",
            Command::ProbeH => "probe-h",
            Command::CheckLemma1 => "check-lemma1",
            Command::CheckLemma2 => "check-lemma2",
            Command::MixingCov => "mixing-cov",
            Command::RenormTable => "renorm-table",
            Command::BracketLambda => "bracket-lambda",
            Command::ValidateModel => "validate-model",
            Command::DumpGraph => "dump-graph",
        }
    }

    pub fn all() -> &'static [Command] {
        &[
            Command::Estimate,
            Command::ProbeH,
            Command::CheckLemma1,
            Command::CheckLemma2,
            Command::MixingCov,
            Command::RenormTable,
            Command::BracketLambda,
            Command::ValidateModel,
            Command::DumpGraph,
        ]
    }
}

/// Failure to run a command: a missing config section or a library error.
#[derive(Debug)]
pub enum RunError {
    Missing(String),
    Core(perco::PercoError),
}

impl From<perco::PercoError> for RunError {
    fn from(e: perco::PercoError) -> Self {
        RunError::Core(e)
    }
}

#[derive(Debug, Default)]
pub struct Outputs {
    /// (file suffix, table); the main table has an empty suffix
    pub tables: Vec<(&'static str, Table)>,
    /// (file suffix, contents) written verbatim
    pub files: Vec<(&'static str, String)>,
}

type Run = Result<Outputs, RunError>;

pub fn run(cmd: Command, cfg: &ExperimentConfig, budget: Budget) -> Run {
    let s = cfg.settings(budget);
    match cmd {
        Command::Estimate => estimate(cfg, &s),
        Command::ProbeH => probe(cfg, &s),
        Command::CheckLemma1 => lemma1(cfg, &s),
        Command::CheckLemma2 => lemma2(cfg, &s),
        Command::MixingCov => mixing(cfg, &s),
        Command::RenormTable => renorm(cfg, &s),
        Command::BracketLambda => bracket(cfg, &s),
        Command::ValidateModel => validate(cfg),
        Command::DumpGraph => dump(cfg, &s),
    }
}

fn lambdas(cfg: &ExperimentConfig) -> Result<&[f64], RunError> {
    if cfg.lambdas.is_empty() {
        return Err(RunError::Missing("this command needs `lambda`".into()));
    }
    Ok(&cfg.lambdas)
}

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T, RunError> {
    x.as_ref()
        .ok_or_else(|| RunError::Missing(format!("this command needs the `{what}` section")))
}

fn est_cells(e: &Estimate) -> Vec<Cell> {
    vec![e.hits.into(), e.p_hat.into(), e.ci_low.into(), e.ci_high.into()]
}

fn verdict_cell(v: &IntegralVerdict) -> Cell {
    match v {
        IntegralVerdict::Finite { value, .. } => Cell::Float(*value),
        IntegralVerdict::Divergent { .. } => Cell::Float(f64::INFINITY),
        IntegralVerdict::Inconclusive { .. } => Cell::Empty,
    }
}

fn estimate(cfg: &ExperimentConfig, s: &McSettings) -> Run {
    let event = need(&cfg.event, "event")?;
    let d = cfg.model.dim;
    let window = cfg
        .window
        .clone()
        .unwrap_or_else(|| event.policy_window(d, s.margin));
    let mut t = Table::new(&[
        "lambda",
        "event",
        "hits",
        "trials",
        "p_hat",
        "ci_low",
        "ci_high",
        "confidence",
        "truncation_bound",
    ]);
    for &lambda in lambdas(cfg)? {
        let e = estimate_event_in(&cfg.model, lambda, event, &window, s)?;
        // only defined for origin-centered ball windows
        let trunc = truncation_bound(&cfg.model, lambda, event, &window, 1e-6)
            .map(|v| verdict_cell(&v))
            .unwrap_or(Cell::Empty);
        t.push(vec![
            lambda.into(),
            event.describe().into(),
            e.hits.into(),
            e.trials.into(),
            e.p_hat.into(),
            e.ci_low.into(),
            e.ci_high.into(),
            e.confidence.into(),
            trunc,
        ]);
    }
    Ok(Outputs {
        tables: vec![("", t)],
        ..Outputs::default()
    })
}

fn probe(cfg: &ExperimentConfig, s: &McSettings) -> Run {
    let grid = need(&cfg.grid, "grid")?;
    let mut t = Table::new(&[
        "lambda", "r", "c", "hits", "trials", "p_hat", "ci_low", "ci_high", "campbell_mean",
    ]);
    let mut summary = Table::new(&[
        "lambda",
        "verdict",
        "slope",
        "slope_ci_low",
        "slope_ci_high",
        "all_zero",
        "campbell_negligible",
        "p_min",
        "decrease_factor",
        "label",
    ]);
    for &lambda in lambdas(cfg)? {
        let rep = probe_h(&cfg.model, lambda, cfg.trend_c, grid, s, &cfg.trend)?;
        for ((r, e), m) in rep.rs.iter().zip(&rep.estimates).zip(&rep.campbell) {
            let mut row: Vec<Cell> = vec![lambda.into(), (*r).into(), rep.c.into()];
            row.push(e.hits.into());
            row.push(e.trials.into());
            row.extend(est_cells(e).into_iter().skip(1));
            row.push((*m).into());
            t.push(row);
        }
        summary.push(vec![
            lambda.into(),
            rep.verdict.as_str().into(),
            rep.slope.into(),
            rep.slope_ci.map(|c| c.0).into(),
            rep.slope_ci.map(|c| c.1).into(),
            rep.all_zero.into(),
            rep.campbell_negligible.into(),
            rep.options.p_min.into(),
            rep.options.decrease_factor.into(),
            rep.label.into(),
        ]);
    }
    Ok(Outputs {
        tables: vec![("", t), ("_summary", summary)],
        ..Outputs::default()
    })
}

fn lemma1(cfg: &ExperimentConfig, s: &McSettings) -> Run {
    let p = need(&cfg.lemma1, "lemma1")?;
    let mut t = Table::new(&[
        "lambda",
        "r",
        "c",
        "c_prime",
        "covering_count",
        "trials",
        "lhs_hits",
        "lhs_p_hat",
        "lhs_ci_low",
        "lhs_ci_high",
        "rhs_hits",
        "rhs_p_hat",
        "rhs_ci_low",
        "rhs_ci_high",
        "union_bound_failures",
        "not_violated",
    ]);
    for &lambda in lambdas(cfg)? {
        let rep = check_lemma1(&cfg.model, lambda, p.r, p.c, p.c_prime, s)?;
        let mut row: Vec<Cell> = vec![
            lambda.into(),
            p.r.into(),
            p.c.into(),
            p.c_prime.into(),
            rep.covering_count.into(),
            rep.lhs.trials.into(),
        ];
        row.extend(est_cells(&rep.lhs));
        row.extend(est_cells(&rep.rhs));
        row.push(rep.union_bound_failures.into());
        row.push(rep.not_violated.into());
        t.push(row);
    }
    Ok(Outputs {
        tables: vec![("", t)],
        ..Outputs::default()
    })
}

fn lemma2(cfg: &ExperimentConfig, s: &McSettings) -> Run {
    let p = need(&cfg.lemma2, "lemma2")?;
    let mut t = Table::new(&[
        "lambda",
        "lambda_prime",
        "r",
        "trials",
        "low_hits",
        "low_p_hat",
        "low_ci_low",
        "low_ci_high",
        "high_hits",
        "high_p_hat",
        "high_ci_low",
        "high_ci_high",
        "lower_not_violated",
        "upper_not_violated",
        "upper_violations",
        "induced_failures",
    ]);
    for &lambda in lambdas(cfg)? {
        for &r in &p.rs {
            let rep = check_lemma2(&cfg.model, lambda, p.lambda_prime, r, s)?;
            let mut row: Vec<Cell> = vec![
                lambda.into(),
                p.lambda_prime.into(),
                r.into(),
                rep.low.trials.into(),
            ];
            row.extend(est_cells(&rep.low));
            row.extend(est_cells(&rep.high));
            row.push(rep.lower_not_violated.into());
            row.push(rep.upper_not_violated.into());
            row.push(rep.upper_violations.into());
            row.push(rep.induced_failures.into());
            t.push(row);
        }
    }
    Ok(Outputs {
        tables: vec![("", t)],
        ..Outputs::default()
    })
}

fn mixing(cfg: &ExperimentConfig, s: &McSettings) -> Run {
    let p = need(&cfg.mixing, "mixing")?;
    let mut t = Table::new(&[
        "lambda",
        "r",
        "x_norm",
        "trials",
        "p_origin",
        "p_far",
        "p_both",
        "cov",
        "std_error",
        "ci_low",
        "ci_high",
        "confidence",
        "ci_contains_zero",
    ]);
    for &lambda in lambdas(cfg)? {
        let m = estimate_mixing_cov(&cfg.model, lambda, p.r, &p.x, s)?;
        t.push(vec![
            lambda.into(),
            p.r.into(),
            norm(&p.x).into(),
            m.trials.into(),
            m.p_origin.into(),
            m.p_far.into(),
            m.p_both.into(),
            m.cov.into(),
            m.std_error.into(),
            m.ci_low.into(),
            m.ci_high.into(),
            m.confidence.into(),
            m.ci_contains_zero().into(),
        ]);
    }
    Ok(Outputs {
        tables: vec![("", t)],
        ..Outputs::default()
    })
}

fn renorm(cfg: &ExperimentConfig, s: &McSettings) -> Run {
    if cfg.renorm_rs.is_empty() {
        return Err(RunError::Missing("this command needs `renorm.r`".into()));
    }
    let mut t = Table::new(&[
        "lambda", "r", "event", "hits", "trials", "p_hat", "ci_low", "ci_high",
    ]);
    let mut summary = Table::new(&[
        "lambda",
        "r",
        "mixing_term",
        "fitted_c",
        "bound",
        "inclusion_failures",
        "fitted_stable",
    ]);
    for &lambda in lambdas(cfg)? {
        let tab = renorm_table(&cfg.model, lambda, &cfg.renorm_rs, s, &cfg.renorm)?;
        for row in &tab.rows {
            for (name, e) in [
                ("C(10r)", &row.lhs),
                ("G(r)", &row.g_est),
                ("C(r)", &row.c_est),
                ("F(r)", &row.f_est),
            ] {
                t.push(vec![
                    lambda.into(),
                    row.r.into(),
                    name.into(),
                    e.hits.into(),
                    e.trials.into(),
                    e.p_hat.into(),
                    e.ci_low.into(),
                    e.ci_high.into(),
                ]);
            }
            summary.push(vec![
                lambda.into(),
                row.r.into(),
                row.mixing_term.into(),
                row.fitted_c.into(),
                row.bound.into(),
                row.inclusion_failures.into(),
                tab.fitted_stable.map_or(Cell::Empty, Cell::Bool),
            ]);
        }
    }
    Ok(Outputs {
        tables: vec![("", t), ("_summary", summary)],
        ..Outputs::default()
    })
}

fn bracket(cfg: &ExperimentConfig, s: &McSettings) -> Run {
    let b = bracket_lambda_hat(&cfg.model, &cfg.bracket, s)?;
    let mut t = Table::new(&["order", "lambda", "r", "hits", "trials", "p_hat", "ci_low", "ci_high"]);
    for (i, (lambda, e)) in b.evaluations.iter().enumerate() {
        let mut row: Vec<Cell> = vec![i.into(), (*lambda).into(), b.r_probe.into()];
        row.push(e.hits.into());
        row.push(e.trials.into());
        row.extend(est_cells(e).into_iter().skip(1));
        t.push(row);
    }
    let mut summary = Table::new(&[
        "lambda_lo",
        "lambda_hi",
        "flag",
        "r_probe",
        "iterations",
        "threshold",
        "label",
    ]);
    summary.push(vec![
        b.lambda_lo.into(),
        b.lambda_hi.into(),
        b.flag.as_str().into(),
        b.r_probe.into(),
        b.iterations.into(),
        cfg.bracket.threshold.into(),
        b.label.into(),
    ]);
    Ok(Outputs {
        tables: vec![("", t), ("_summary", summary)],
        ..Outputs::default()
    })
}

fn validate(cfg: &ExperimentConfig) -> Run {
    let budget = QuadratureBudget {
        seed: cfg.seed,
        ..QuadratureBudget::default()
    };
    let rep = validate_framework(&cfg.model, &budget)?;
    let (kind, value, error) = match &rep.integral {
        IntegralVerdict::Finite { value, error } => ("finite", Cell::Float(*value), Cell::Float(*error)),
        IntegralVerdict::Divergent { .. } => ("divergent", Cell::Empty, Cell::Empty),
        IntegralVerdict::Inconclusive { .. } => ("inconclusive", Cell::Empty, Cell::Empty),
    };
    let mut t = Table::new(&[
        "model",
        "symmetry_trials",
        "symmetry_failures",
        "monotonicity_trials",
        "monotonicity_failures",
        "integral",
        "integral_value",
        "integral_error",
        "conditions_hold",
    ]);
    t.push(vec![
        rep.description.clone().into(),
        rep.symmetry.trials.into(),
        rep.symmetry.failures.into(),
        rep.monotonicity.trials.into(),
        rep.monotonicity.failures.into(),
        kind.into(),
        value,
        error,
        rep.conditions_hold().into(),
    ]);
    Ok(Outputs {
        tables: vec![("", t)],
        ..Outputs::default()
    })
}

fn dump(cfg: &ExperimentConfig, s: &McSettings) -> Run {
    let lambda = lambdas(cfg)?[0];
    let d = cfg.model.dim;
    let window: Window = match (&cfg.window, &cfg.event) {
        (Some(w), _) => w.clone(),
        (None, Some(e)) => e.policy_window(d, s.margin),
        (None, None) => {
            return Err(RunError::Missing(
                "dump-graph needs a `window` section or an `event` to size the window".into(),
            ))
        }
    };
    let g = perco::estimators::replicate_graph(&cfg.model, lambda, &window, s.seed, 0, &s.budget)?;
    let mut points = Vec::new();
    let mut edges = Vec::new();
    g.write_points(&mut points).expect("in-memory write");
    g.write_edges(&mut edges).expect("in-memory write");
    let mut t = Table::new(&["lambda", "points", "edges", "components", "event", "event_holds"]);
    let (name, holds) = match &cfg.event {
        Some(e) => (Cell::Text(e.describe()), Cell::Bool(e.evaluate(&g)?)),
        None => (Cell::Empty, Cell::Empty),
    };
    t.push(vec![
        lambda.into(),
        g.cloud().len().into(),
        g.edge_count().into(),
        g.component_count().into(),
        name,
        holds,
    ]);
    Ok(Outputs {
        tables: vec![("", t)],
        files: vec![
            ("_points.txt", String::from_utf8(points).expect("ascii")),
            ("_edges.txt", String::from_utf8(edges).expect("ascii")),
        ],
    })
}
