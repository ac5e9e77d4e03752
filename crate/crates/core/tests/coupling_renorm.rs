mod common;

use common::poisson_gof;
use perco::coupling::{check_coupling, check_lemma2, coupled_graphs, is_induced_subgraph, thin_pair};
use perco::estimators::{check_lemma1, McSettings};
use perco::events::EventSpec;
use perco::model::{Kernel, ModelSpec, Profile, RadiusLaw};
use perco::ppp::{Budget, Window};
use perco::renorm::{bracket_lambda_hat, renorm_table, BracketFlag, BracketOptions, RenormParams};
use perco::rng::derive_seed;

fn settings(trials: usize, seed: u64) -> McSettings {
    McSettings {
        trials,
        seed,
        ..McSettings::default()
    }
}

#[test]
fn thinned_counts_are_poisson() {
    let w = Window::cube(2, 0.0, 2.0);
    let counts: Vec<usize> = (0..3000)
        .map(|k| thin_pair(&w, 1.5, 4.0, derive_seed(3, &[k])).unwrap().low.len())
        .collect();
    let p = poisson_gof(&counts, 6.0);
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn low_cloud_is_a_sub_cloud() {
    let w = Window::centered_ball(3, 3.0);
    let p = thin_pair(&w, 0.7, 2.0, 8).unwrap();
    for (li, hi) in p.low_to_high().into_iter().enumerate() {
        assert_eq!(p.low.position(li), p.high.position(hi));
        assert_eq!(p.low.mark(li), p.high.mark(hi));
        assert_eq!(p.low.id(li), p.high.id(hi));
    }
}

#[test]
fn coupling_is_exact_for_pairwise_models() {
    let models = [
        ModelSpec::classical(2, Kernel::Max, Profile::Polynomial { delta: 1.3 }, 2.2, 1.0),
        ModelSpec::boolean(2, RadiusLaw::Uniform { lo: 0.1, hi: 0.6 }),
    ];
    for model in &models {
        let w = Window::centered_ball(2, 7.0);
        for k in 0..50 {
            let pair = thin_pair(&w, 0.3, 1.2, k).unwrap();
            let (lo, hi) = coupled_graphs(&pair, model, k + 1000, &Budget::default()).unwrap();
            assert!(is_induced_subgraph(&pair, &lo, &hi));
        }
        let events = [
            EventSpec::LongEdge { r: 1.0, c: 1.0 },
            EventSpec::Crossing { r: 1.5 },
            EventSpec::FarEdge { r: 0.25 },
        ];
        let check = check_coupling(model, 0.3, 1.2, &events, &w, &settings(200, 4)).unwrap();
        assert_eq!(check.induced_failures, 0);
        assert!(check.monotonicity_failures.iter().all(|(_, f)| *f == 0));
    }
}

#[test]
fn lemma2_heavy_tail_example_is_not_violated() {
    let model = ModelSpec::boolean(2, RadiusLaw::Pareto { scale: 0.3, shape: 1.5 });
    let rep = check_lemma2(&model, 0.05, 0.1, 4.0, &settings(4000, 10)).unwrap();
    assert!(rep.lower_not_violated && rep.upper_not_violated);
    assert_eq!(rep.upper_violations, 0);
    assert_eq!(rep.induced_failures, 0);
    assert!(rep.low.hits <= rep.high.hits);
}

#[test]
fn lemma1_heavy_tail_example_is_not_violated() {
    let model = ModelSpec::boolean(2, RadiusLaw::Pareto { scale: 0.3, shape: 1.5 });
    let rep = check_lemma1(&model, 0.05, 5.0, 1.0, 2.0, &settings(2000, 11)).unwrap();
    assert_eq!(rep.union_bound_failures, 0);
    assert!(rep.not_violated);
    assert!(rep.rhs.hits > 0);
}

#[test]
fn subcritical_boolean_renorm_rows() {
    let model = ModelSpec::boolean(2, RadiusLaw::Fixed { radius: 0.5 });
    let t = renorm_table(&model, 1.0, &[2.0, 4.0, 8.0], &settings(100, 5), &RenormParams::default()).unwrap();
    for row in &t.rows {
        assert_eq!(row.f_est.hits, 0);
        assert!(row.g_est.hits <= row.c_est.hits);
        assert_eq!(row.inclusion_failures, 0);
    }
    let lhs: Vec<u64> = t.rows.iter().map(|r| r.lhs.hits).collect();
    assert!(lhs.windows(2).all(|w| w[1] <= w[0]), "{lhs:?}");
}

#[test]
fn empty_model_never_crosses() {
    let model = ModelSpec::classical(2, Kernel::Plain, Profile::Indicator { theta: 0.0 }, 2.0, 1.0);
    let opts = BracketOptions {
        r_probe: Some(1.0),
        ..BracketOptions::default()
    };
    let b = bracket_lambda_hat(&model, &opts, &settings(50, 1)).unwrap();
    assert_eq!(b.flag, BracketFlag::NeverCrosses);
    assert_eq!((b.lambda_lo, b.lambda_hi), (opts.lambda_max, opts.lambda_max));
}

fn boolean_bracket(seed: u64) -> (f64, f64) {
    let model = ModelSpec::boolean(2, RadiusLaw::Fixed { radius: 0.5 });
    let opts = BracketOptions {
        lambda_min: 0.2,
        lambda_max: 3.0,
        r_probe: Some(4.0),
        ..BracketOptions::default()
    };
    let b = bracket_lambda_hat(&model, &opts, &settings(400, seed)).unwrap();
    assert_eq!(b.flag, BracketFlag::Crossed);
    (b.lambda_lo, b.lambda_hi)
}

#[test]
fn boolean_bracket_regression() {
    // frozen from a reference run
    let (lo, hi) = boolean_bracket(1);
    assert!((lo - 0.94375).abs() < 1e-12 && (hi - 0.9875).abs() < 1e-12, "[{lo}, {hi}]");
    for seed in [2, 3] {
        let (lo, hi) = boolean_bracket(seed);
        assert!(lo < 0.9875 && hi > 0.94375, "[{lo}, {hi}]");
    }
}

#[test]
fn heavy_tail_brackets_do_not_increase_with_scale() {
    let model = ModelSpec::boolean(2, RadiusLaw::Pareto { scale: 0.3, shape: 1.5 });
    let mut prev: Option<(f64, f64)> = None;
    for r in [1.0, 2.0, 4.0] {
        let opts = BracketOptions {
            lambda_min: 0.01,
            lambda_max: 3.0,
            max_iterations: 8,
            r_probe: Some(r),
            ..BracketOptions::default()
        };
        let b = bracket_lambda_hat(&model, &opts, &settings(200, 9)).unwrap();
        if let Some((_, hi)) = prev {
            // the new bracket never lies entirely above the previous one
            assert!(b.lambda_lo <= hi, "r={r}: {b:?}");
        }
        prev = Some((b.lambda_lo, b.lambda_hi));
    }
}
