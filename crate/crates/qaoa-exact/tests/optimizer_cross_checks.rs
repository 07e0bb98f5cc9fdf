//! The optimizer driven by the analytic evaluator against the same searches
//! driven by the statevector oracle.

use qaoa_exact::hypergraph::WeightedHypergraph;
use qaoa_exact::optimize::{grid_scan, refine, AxisSpec, DEFAULT_GRID_CAP};
use qaoa_exact::oracle::{run_pm, OracleOptions};
use qaoa_exact::pm::{variant_axes, MixerVariant, PmEngine, PmParams};
use qaoa_exact::problems::{maxcut_to_ising, MaxCutInstance};
use qaoa_exact::random::SplitMix64;

type Evaluator = dyn Fn(&[f64]) -> qaoa_exact::Result<f64>;

fn k3_evaluators() -> (Box<Evaluator>, Box<Evaluator>) {
    let graph: WeightedHypergraph<f64> = WeightedHypergraph::complete(3);
    let weights = maxcut_to_ising(&MaxCutInstance::new(graph.clone()).unwrap());
    let axes = variant_axes(MixerVariant::Vanilla, 3, &[]).unwrap();
    let analytic = {
        let (graph, weights, axes) = (graph.clone(), weights.clone(), axes.clone());
        move |point: &[f64]| {
            let params = PmParams::uniform(graph.n(), graph.m(), point[0], point[1]);
            PmEngine::new(&graph, &weights, &params, &axes)?.cost_expectation()
        }
    };
    let oracle = move |point: &[f64]| {
        let params = PmParams::uniform(graph.n(), graph.m(), point[0], point[1]);
        Ok(run_pm(&graph, &weights, &params, &axes, &OracleOptions::default())?.total)
    };
    (Box::new(analytic), Box::new(oracle))
}

fn beta_gamma_axes(count: usize) -> Vec<AxisSpec<f64>> {
    vec![
        AxisSpec {
            name: "beta".into(),
            start: 0.0,
            stop: std::f64::consts::PI,
            count,
        },
        AxisSpec {
            name: "gamma".into(),
            start: 0.0,
            stop: std::f64::consts::PI,
            count,
        },
    ]
}

/// 33x33 grid max dominates random angle pairs, and the analytic grid peaks
/// at the same cell as the oracle-driven grid.
#[test]
fn k3_grid_matches_oracle_grid() {
    let (analytic, oracle) = k3_evaluators();
    let ls = grid_scan(beta_gamma_axes(33), DEFAULT_GRID_CAP, &analytic).unwrap();
    let (idx, _, max_value) = ls.argmax();
    let mut rng = SplitMix64::new(404);
    for _ in 0..50 {
        let point = [
            rng.uniform(0.0, std::f64::consts::PI),
            rng.uniform(0.0, std::f64::consts::PI),
        ];
        assert!(analytic(&point).unwrap() <= max_value + 1e-12);
    }
    let ls_oracle = grid_scan(beta_gamma_axes(33), DEFAULT_GRID_CAP, &oracle).unwrap();
    let (idx_oracle, _, max_oracle) = ls_oracle.argmax();
    assert_eq!(idx, idx_oracle);
    assert!((max_value - max_oracle).abs() < 1e-10);
}

/// Refinement on the analytic surface lands within 1e-4 of the
/// oracle-refined optimum from the same start.
#[test]
fn k3_refine_matches_oracle_refine() {
    let (analytic, oracle) = k3_evaluators();
    let start = [0.4, 0.6];
    let a = refine(&start, 0.25, 1e-7, &analytic).unwrap();
    let o = refine(&start, 0.25, 1e-7, &oracle).unwrap();
    assert!(
        (a.value - o.value).abs() < 1e-4,
        "{} vs {}",
        a.value,
        o.value
    );
    assert!(a.value >= analytic(&start).unwrap());
}
