use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use perco::estimators::{RGrid, TrendOptions};
use perco::events::EventSpec;
use perco::model::{Classical, Kernel, LocalDamping, ModelSpec, Profile, RadiusLaw};
use perco::ppp::Window;
use perco::renorm::{BracketOptions, RenormParams};
use perco_cli::config::{ExperimentConfig, Lemma1Params, Lemma2Params, MixingParams};
use perco_cli::output::strip_timestamp;
use proptest::prelude::*;
use tempfile::TempDir;

fn perco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perco"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn read_body(p: &Path) -> String {
    strip_timestamp(&fs::read_to_string(p).unwrap()).to_string()
}

const BOOLEAN: &str = "model.dim = 2\nmodel.variant = boolean\nmodel.radius.law = fixed\nmodel.radius.value = 0.5\n";

#[test]
fn validate_model_reports_pi_for_the_indicator_model() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "m.conf",
        "model.dim = 2\nmodel.variant = classical\nmodel.kernel = plain\nmodel.profile = indicator\nmodel.profile.theta = 1\n",
    );
    let out = dir.path().join("o");
    let res = perco(&["run", "validate-model", &cfg, "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let body = read_body(&out.join("validate-model.csv"));
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let h = rdr.headers().unwrap().clone();
    let row = rdr.records().next().unwrap().unwrap();
    let get = |name: &str| row.get(h.iter().position(|c| c == name).unwrap()).unwrap().to_string();
    let v: f64 = get("integral_value").parse().unwrap();
    // area of the unit disc
    assert!((v - std::f64::consts::PI).abs() / std::f64::consts::PI < 1e-6, "{v}");
    assert_eq!(get("conditions_hold"), "true");
}

#[test]
fn estimate_at_zero_intensity_has_no_hits() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "e.conf",
        &format!("{BOOLEAN}lambda = 0\ntrials = 50\nevent.kind = crossing\nevent.r = 1\n"),
    );
    let out = dir.path().join("o");
    assert!(perco(&["run", "estimate", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let body = read_body(&out.join("estimate.csv"));
    let row: Vec<&str> = body.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "0");
    assert_eq!(row[3], "50");
    assert_eq!(row[4], "0");
}

#[test]
fn probe_on_bounded_radii_vanishes_with_zero_hits() {
    let dir = TempDir::new().unwrap();
    // R ≤ 0.5 so every edge is shorter than 1 = c·r_min
    let cfg = write(
        dir.path(),
        "p.conf",
        "model.dim = 2\nmodel.variant = boolean\nmodel.radius.law = uniform\nmodel.radius.lo = 0.1\nmodel.radius.hi = 0.5\n\
         lambda = 1\ntrials = 100\ngrid.r_min = 1\ngrid.r_max = 8\ngrid.count = 4\n",
    );
    let out = dir.path().join("o");
    assert!(perco(&["run", "probe-h", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let main = read_body(&out.join("probe-h.csv"));
    assert_eq!(main.lines().count(), 5);
    for line in main.lines().skip(1) {
        assert_eq!(line.split(',').nth(3), Some("0"), "{line}");
    }
    let summary = read_body(&out.join("probe-h_summary.csv"));
    assert!(summary.lines().nth(1).unwrap().starts_with("1,vanishing,"), "{summary}");

    let plots = dir.path().join("plots");
    let res = perco(&[
        "plot-data",
        out.join("probe-h.csv").to_str().unwrap(),
        "--out",
        plots.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let series = read_body(&plots.join("probe-h_series.csv"));
    let xs: Vec<f64> = series
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(xs.len(), 4);
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn plot_data_handles_renorm_tables_and_bad_input() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "r.conf",
        &format!("{BOOLEAN}lambda = 1\ntrials = 20\nrenorm.r = 1, 2\n"),
    );
    let out = dir.path().join("o");
    assert!(perco(&["run", "renorm-table", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let res = perco(&["plot-data", out.join("renorm-table.csv").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let series = read_body(&out.join("renorm-table_series.csv"));
    let mut names: Vec<&str> = series.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    names.dedup();
    assert_eq!(names, ["C(10r) lambda=1", "G(r) lambda=1", "C(r) lambda=1", "F(r) lambda=1"]);

    let empty = write(dir.path(), "empty.csv", "# t\nlambda,r,event,hits,trials,p_hat,ci_low,ci_high\n");
    assert!(perco(&["plot-data", &empty, "--out", out.to_str().unwrap()]).status.success());
    assert_eq!(read_body(&out.join("empty_series.csv")), "series,x,y,y_lo,y_hi\n");

    let bad = write(dir.path(), "bad.csv", "lambda,r,event,hits,trials,p_hat,ci_low,ci_high\n1,2,C(r),x\n");
    let res = perco(&["plot-data", &bad]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("malformed"));
}

#[test]
fn config_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "bad.conf", &format!("{BOOLEAN}lambda = 1\nmodel.tau = 2.5\n"));
    let res = perco(&["run", "estimate", &cfg]);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains(&format!("{cfg}:6:")), "{err}");

    let missing = write(dir.path(), "m.conf", &format!("{BOOLEAN}lambda = 1\n"));
    let res = perco(&["run", "estimate", &missing]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("event"));
}

#[test]
fn resource_errors_give_budget_advice() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "big.conf",
        &format!("{BOOLEAN}lambda = 5\ntrials = 2\nevent.kind = crossing\nevent.r = 20\n"),
    );
    let res = Command::new(env!("CARGO_BIN_EXE_perco"))
        .args(["run", "estimate", &cfg, "--out", dir.path().to_str().unwrap()])
        .env("PERCO_BUDGET_POINTS", "100")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&res.stderr).contains("PERCO_BUDGET_POINTS"));
}

#[test]
fn seed_flag_overrides_and_reruns_repeat() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "s.conf",
        &format!("{BOOLEAN}lambda = 1.2\ntrials = 200\nseed = 1\nevent.kind = crossing\nevent.r = 2\n"),
    );
    let body = |seed: &str, tag: &str| {
        let out = dir.path().join(tag);
        let res = perco(&["run", "estimate", &cfg, "--seed", seed, "--out", out.to_str().unwrap()]);
        assert!(res.status.success());
        read_body(&out.join("estimate.csv"))
    };
    let a = body("5", "a");
    assert_eq!(a, body("5", "b"));
    assert_ne!(a, body("6", "c"));
}

fn pos(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    lo..hi
}

fn classical() -> impl Strategy<Value = Classical> {
    let kernel = prop_oneof![
        Just(Kernel::Plain),
        Just(Kernel::Product),
        Just(Kernel::Sum),
        Just(Kernel::Max)
    ];
    let profile = prop_oneof![
        pos(0.0, 5.0).prop_map(|theta| Profile::Indicator { theta }),
        pos(1.01, 6.0).prop_map(|delta| Profile::Polynomial { delta }),
        prop::collection::vec((pos(0.01, 1.0), pos(0.0, 0.3)), 1..5).prop_map(|steps| {
            let mut t = 0.0;
            let mut v = 1.0;
            let knots = steps
                .into_iter()
                .map(|(dt, dv)| {
                    t += dt;
                    v = f64::max(v - dv, 0.0);
                    (t, v)
                })
                .collect();
            Profile::Tabulated { knots }
        }),
    ];
    (kernel, profile, pos(1.1, 5.0), pos(0.1, 4.0)).prop_map(|(kernel, profile, tau, beta)| Classical {
        kernel,
        profile,
        tau,
        beta,
    })
}

fn model() -> impl Strategy<Value = ModelSpec> {
    let law = prop_oneof![
        pos(0.0, 2.0).prop_map(|radius| RadiusLaw::Fixed { radius }),
        (pos(0.0, 1.0), pos(0.01, 1.0)).prop_map(|(lo, w)| RadiusLaw::Uniform { lo, hi: lo + w }),
        (pos(0.01, 1.0), pos(0.5, 4.0)).prop_map(|(scale, shape)| RadiusLaw::Pareto { scale, shape }),
    ];
    (1usize..=3).prop_flat_map(move |d| {
        prop_oneof![
            law.clone().prop_map(move |l| ModelSpec::boolean(d, l)),
            classical().prop_map(move |c| ModelSpec {
                dim: d,
                variant: perco::model::Variant::Classical(c)
            }),
            (classical(), pos(0.0, 2.0), pos(0.0, 1.0))
                .prop_map(move |(c, radius, factor)| ModelSpec::generalized(d, c, LocalDamping { radius, factor })),
        ]
    })
}

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, d)
}

fn config() -> impl Strategy<Value = ExperimentConfig> {
    model().prop_flat_map(|m| {
        let d = m.dim;
        let event = prop::option::of(prop_oneof![
            (pos(0.1, 5.0), pos(0.1, 4.0)).prop_map(|(r, c)| EventSpec::LongEdge { r, c }),
            pos(0.1, 5.0).prop_map(|r| EventSpec::Crossing { r }),
            (pos(0.1, 5.0), point(d)).prop_map(|(r, center)| EventSpec::LocalCrossing { r, center }),
            pos(0.1, 5.0).prop_map(|r| EventSpec::FarEdge { r }),
        ]);
        let grid = prop::option::of((pos(0.1, 2.0), pos(1.1, 10.0), 2usize..8).prop_map(|(a, q, k)| RGrid {
            r_min: a,
            r_max: a * q,
            count: k,
        }));
        let lemmas = (
            prop::option::of((pos(0.1, 3.0), pos(0.5, 2.0), pos(0.0, 2.0)).prop_map(|(r, c, extra)| Lemma1Params {
                r,
                c,
                c_prime: c + extra,
            })),
            prop::option::of((pos(0.1, 3.0), prop::collection::vec(pos(0.1, 5.0), 1..4))
                .prop_map(|(lambda_prime, rs)| Lemma2Params { lambda_prime, rs })),
            prop::option::of((pos(0.1, 3.0), point(d)).prop_map(|(r, x)| MixingParams { r, x })),
        );
        let window = prop::option::of(prop_oneof![
            (point(d), pos(0.1, 20.0)).prop_map(|(center, radius)| Window::Ball { center, radius }),
            (point(d), prop::collection::vec(pos(0.1, 5.0), d)).prop_map(|(lower, w)| {
                let upper = lower.iter().zip(&w).map(|(l, w)| l + w).collect();
                Window::Box { lower, upper }
            }),
        ]);
        let renorm = (
            prop::collection::vec(pos(0.1, 5.0), 0..4),
            pos(0.1, 3.0),
            prop::option::of((pos(0.0, 2.0), pos(0.1, 4.0))),
        );
        let bracket = (pos(0.05, 0.95), pos(0.01, 1.0), pos(1.0, 3.0), 1usize..20, prop::option::of(pos(0.5, 5.0)));
        let basics = (
            prop::collection::vec(pos(0.0, 3.0), 0..4),
            1usize..100_000,
            pos(0.5, 0.999),
            any::<u64>(),
            pos(0.0, 0.5),
            (pos(0.1, 3.0), pos(0.0, 0.5), pos(1.0, 8.0)),
            prop::option::of("[a-z][a-z0-9_.-]{0,12}"),
        );
        (Just(m), basics, event, grid, lemmas, window, renorm, bracket).prop_map(
            |(m, basics, event, grid, lemmas, window, renorm, bracket)| {
                let (lambdas, trials, confidence, seed, margin, (tc, p_min, decrease_factor), name) = basics;
                let mut c = ExperimentConfig::new(m);
                c.lambdas = lambdas;
                c.trials = trials;
                c.confidence = confidence;
                c.seed = seed;
                c.margin = margin;
                c.event = event;
                c.grid = grid;
                c.trend_c = tc;
                c.trend = TrendOptions { p_min, decrease_factor };
                (c.lemma1, c.lemma2, c.mixing) = lemmas;
                c.window = window;
                c.renorm_rs = renorm.0;
                c.renorm = RenormParams {
                    constant: renorm.1,
                    mixing: renorm.2,
                };
                c.bracket = BracketOptions {
                    threshold: bracket.0,
                    lambda_min: bracket.1,
                    lambda_max: bracket.2,
                    max_iterations: bracket.3,
                    r_probe: bracket.4,
                };
                c.output_name = name;
                c
            },
        )
    })
}

proptest! {
    #[test]
    fn config_round_trips(cfg in config()) {
        let text = cfg.to_text();
        let back = ExperimentConfig::parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_text(), text);
    }
}
