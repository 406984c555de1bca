use fairclust::backend::SparseSimplex;
use fairclust::eval::{
    cost_of_fairness_sweep, emit_report, run_experiment, violation_profile, Algorithm, DataSource,
    ExperimentConfig, ReportFormat, DEFAULT_EDGES,
};
use fairclust_core::baselines::plesnik_baseline;
use fairclust_core::synth::uniform_points;
use fairclust_core::{build_lp, fair_radii, solve_lp, MetricInstance, PNorm};
use proptest::prelude::*;
use serde_json::Value;

fn synthetic(n: usize) -> DataSource {
    DataSource::Synthetic {
        n,
        dim: 2,
        clusters: 3,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sweep_is_non_increasing(seed in any::<u64>(), n in 8usize..30, k in 2usize..5, p2 in any::<bool>()) {
        let inst = MetricInstance::from_points(&uniform_points(n, 2, seed)).unwrap();
        let p = PNorm::new(if p2 { 2.0 } else { 1.0 }).unwrap();
        let radii = fair_radii(&inst, k).unwrap();
        let grid = [1.0, 1.5, 2.0, 1e6];
        let sweep = cost_of_fairness_sweep(&inst, &radii, k, p, &grid, 0.0, &SparseSimplex).unwrap();
        let costs: Vec<f64> = sweep.iter().map(|s| s.lp_cost.unwrap()).collect();
        for w in costs.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-7, "{costs:?}");
        }
        let base = solve_lp(&build_lp(&inst, &radii, k, p, None).unwrap(), 0.0, &SparseSimplex).unwrap();
        prop_assert!((costs[0] - base.objective).abs() <= 1e-9);
        let unconstrained = vec![f64::MAX / 4.0; n];
        let free = solve_lp(&build_lp(&inst, &unconstrained, k, p, None).unwrap(), 0.0, &SparseSimplex).unwrap();
        prop_assert!((costs[3] - free.objective).abs() <= 1e-7);
    }

    #[test]
    fn histogram_counts_every_point(seed in any::<u64>(), n in 2usize..60, k in 1usize..6) {
        let inst = MetricInstance::from_points(&uniform_points(n, 2, seed)).unwrap();
        let k = k.min(n);
        let radii = fair_radii(&inst, k).unwrap();
        let s = plesnik_baseline(&inst, &radii).unwrap();
        let prof = violation_profile(&inst, &radii, &s, &DEFAULT_EDGES).unwrap();
        prop_assert_eq!(prof.histogram.counts.iter().sum::<usize>(), n);
        prop_assert!(prof.max_violation <= 2.0 + 1e-9);
    }
}

#[test]
fn single_plesnik_trial() {
    let cfg = ExperimentConfig::new(synthetic(40), vec![4], vec![Algorithm::Plesnik]);
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.rows.len(), 1);
    let row = &report.rows[0];
    assert!(row.error.is_none());
    assert!(row.max_violation.unwrap() <= 2.0 + 1e-9);
    assert_eq!(row.guarantee_ok, Some(true));
}

#[test]
fn rows_cover_grid_and_json_parses() {
    let mut cfg = ExperimentConfig::new(
        synthetic(60),
        vec![2, 4],
        vec![
            Algorithm::FairRound,
            Algorithm::Sparse(0.3),
            Algorithm::KMeansPP,
        ],
    );
    cfg.trials = 2;
    cfg.sample_size = Some(45);
    cfg.p = PNorm::new(2.0).unwrap();
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.rows.len(), 2 * 3 * 2);
    for row in &report.rows {
        assert!(row.error.is_none(), "{row:?}");
        if matches!(row.algorithm, Algorithm::FairRound | Algorithm::Sparse(_)) {
            assert_eq!(row.guarantee_ok, Some(true), "{row:?}");
        }
        if row.algorithm == Algorithm::FairRound {
            let ratio = row.cost_ratio.unwrap();
            assert!(ratio <= 2f64.powf(2.0) + 1e-9, "{ratio}");
        }
    }
    let mut buf = Vec::new();
    emit_report(&report, ReportFormat::Json, &mut buf).unwrap();
    let v: Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
    assert_eq!(v["aggregates"].as_array().unwrap().len(), 6);
    assert_eq!(v["rows"][0]["algorithm"], "fair_round");
    assert_eq!(v["config"]["p"], "2");

    let mut csv = Vec::new();
    emit_report(&report, ReportFormat::Csv, &mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 13);
}

#[test]
fn failed_trial_is_recorded() {
    let cfg = ExperimentConfig::new(synthetic(5), vec![2, 9], vec![Algorithm::Plesnik]);
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.rows.len(), 2);
    assert!(report.rows[0].error.is_none());
    assert!(report.rows[1].error.is_some());
    assert_eq!(report.aggregates[1].failed_trials, 1);
}

#[test]
fn oversized_sample_is_rejected() {
    let mut cfg = ExperimentConfig::new(synthetic(10), vec![2], vec![Algorithm::Plesnik]);
    cfg.sample_size = Some(11);
    assert!(run_experiment(&cfg).is_err());
}
