use fairclust_core::baselines::{brute_force_opt, kmeanspp_baseline, plesnik_baseline};
use fairclust_core::lp::{validate_solution, DenseSimplex};
use fairclust_core::metric::{clustering_cost_pow, distances_to_set};
use fairclust_core::round::{
    beta_search, build_forest, cap_y, half_integralize, redistribute_y, shrunk_radii,
    surrogate_objective, BETA_MIN, BETA_TOL,
};
use fairclust_core::synth::{adversarial_points, gaussian_mixture, uniform_points, Adversarial};
use fairclust_core::{
    build_lp, fair_radii, fair_round, filter, per_point_cost, solve_lp, uniform_solution,
    verify_filter_properties, BetaChoice, MetricInstance, PNorm,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(points: &[Vec<f64>]) -> MetricInstance {
    MetricInstance::from_points(points).unwrap()
}

fn pnorm(p: f64) -> PNorm {
    PNorm::new(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn filter_guarantees_hold(n in 1usize..60, dim in 1usize..4, seed in any::<u64>(), scale in 0.0f64..2.0) {
        let inst = instance(&uniform_points(n, dim, seed));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let radii: Vec<f64> = (0..n).map(|_| scale * rng.random::<f64>()).collect();
        let out = filter(&inst, &radii).unwrap();
        prop_assert!(verify_filter_properties(&inst, &radii, &out).is_empty());
    }

    #[test]
    fn filter_guarantees_hold_on_degenerate_inputs(kind in 0usize..4, n in 1usize..40, seed in any::<u64>(), k in 1usize..6) {
        let inst = instance(&adversarial_points(Adversarial::ALL[kind], n, seed));
        let radii = fair_radii(&inst, k.min(n)).unwrap();
        let out = filter(&inst, &radii).unwrap();
        prop_assert!(verify_filter_properties(&inst, &radii, &out).is_empty());
    }

    #[test]
    fn plesnik_is_two_fair(n in 2usize..50, seed in any::<u64>(), k in 1usize..8) {
        let k = k.min(n);
        let inst = instance(&uniform_points(n, 2, seed));
        let radii = fair_radii(&inst, k).unwrap();
        let s = plesnik_baseline(&inst, &radii).unwrap();
        prop_assert!(s.len() <= k);
        for (v, d) in distances_to_set(&inst, &s).unwrap().into_iter().enumerate() {
            prop_assert!(d <= 2.0 * radii[v]);
        }
    }

    #[test]
    fn cap_preserves_mass_and_caps(values in proptest::collection::vec(0.0f64..2.5, 2..20)) {
        // Scale to an integer total no larger than the number of entries.
        let total: f64 = values.iter().sum();
        prop_assume!(total > 0.5);
        let k = (total.round() as usize).clamp(1, values.len() - 1);
        let mut y: Vec<f64> = values.iter().map(|v| v * k as f64 / total).collect();
        prop_assume!(y.iter().all(|&v| v <= 1.0 + 1e-9) || y.iter().any(|&v| v < 1.0));
        let before = y.clone();
        cap_y(&mut y, k).unwrap();
        prop_assert!(y.iter().all(|&v| v <= 1.0 + 1e-9));
        prop_assert!((y.iter().sum::<f64>() - k as f64).abs() < 1e-9);
        for (b, a) in before.iter().zip(&y) {
            if *b <= 1.0 {
                prop_assert!(a >= b);
            }
        }
    }

    #[test]
    fn half_integral_output(raw in proptest::collection::vec((0.0f64..1.0, 0u8..4), 2..16)) {
        // Values in [1/2, 1], adjusted so the total is an integer.
        let m = raw.len();
        let mut y: Vec<f64> = raw.iter().map(|(t, _)| 0.5 + 0.5 * t).collect();
        let costs: Vec<f64> = raw.iter().map(|&(_, c)| f64::from(c)).collect();
        let total: f64 = y.iter().sum();
        let mut excess = total - total.floor();
        for v in y.iter_mut() {
            let take = excess.min(*v - 0.5);
            *v -= take;
            excess -= take;
        }
        prop_assume!(excess < 1e-12);
        let k: f64 = y.iter().sum::<f64>().round();
        let start = surrogate_objective(&y, &costs);
        let ids: Vec<usize> = (0..m).collect();
        half_integralize(&mut y, &costs, &ids).unwrap();
        prop_assert!(y.iter().all(|&v| (v - 0.5).abs() < 1e-6 || (v - 1.0).abs() < 1e-6), "{:?}", y);
        prop_assert!((y.iter().sum::<f64>() - k).abs() < 1e-9);
        prop_assert!(surrogate_objective(&y, &costs) <= start + 1e-9);
    }

    #[test]
    fn forest_edges_alternate_parity(n in 2usize..40, seed in any::<u64>(), dup in any::<bool>()) {
        let pts = if dup {
            adversarial_points(Adversarial::Lattice, n, seed)
        } else {
            uniform_points(n, 2, seed)
        };
        let inst = instance(&pts);
        let reps: Vec<usize> = (0..n).rev().collect();
        let f = build_forest(&inst, &reps).unwrap();
        for i in 0..n {
            let j = f.nearest_other[i];
            prop_assert_ne!(f.level[i] % 2, f.level[j] % 2);
            match f.parent[i] {
                Some(par) => prop_assert_eq!(f.level[i], f.level[par] + 1),
                None => prop_assert_eq!(f.level[i], 0),
            }
        }
    }
}

fn assert_guarantees(
    inst: &MetricInstance,
    radii: &[f64],
    k: usize,
    p: f64,
    objective: f64,
    centers: &[usize],
) {
    assert!(!centers.is_empty() && centers.len() <= k);
    for (v, d) in distances_to_set(inst, centers)
        .unwrap()
        .into_iter()
        .enumerate()
    {
        assert!(
            d <= 8.0 * radii[v] + 1e-12,
            "point {v}: {d} vs r = {}",
            radii[v]
        );
    }
    let cost = clustering_cost_pow(inst, centers, p).unwrap();
    assert!(
        cost <= 2f64.powf(p + 2.0) * objective + 1e-9,
        "{cost} vs LP {objective}"
    );
}

/// Fair-Round guarantees against the dense reference solver.
#[test]
fn fair_round_guarantees_small() {
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(6..28);
        let k = rng.random_range(2..6).min(n - 1);
        let p = if seed % 2 == 0 { 1.0 } else { 2.0 };
        let pts = if seed % 3 == 0 {
            gaussian_mixture(n, 2, 3, 0.7, seed)
        } else {
            uniform_points(n, 2, seed)
        };
        let inst = instance(&pts);
        let radii = fair_radii(&inst, k).unwrap();
        let model = build_lp(&inst, &radii, k, pnorm(p), None).unwrap();
        let sol = solve_lp(&model, 0.0, &DenseSimplex::default()).unwrap();
        assert!(validate_solution(&model, &sol).max() <= 1e-6);
        let out = fair_round(&inst, &radii, &sol, k, pnorm(p), BetaChoice::default()).unwrap();
        assert_guarantees(&inst, &radii, k, p, sol.objective, &out.centers);
    }
}

/// Optimal LP points on Euclidean data are nearly always integral and take
/// the shortcut; the uniform feasible point on tight clusters does not.
#[test]
fn fair_round_full_path_on_uniform_points() {
    let mut full_paths = 0;
    for seed in 0..150u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(20..120);
        let k = rng.random_range(2..11);
        let p = if seed % 2 == 0 { 1.0 } else { 2.0 };
        let inst = instance(&gaussian_mixture(n, 5, k + 1, 0.2, seed));
        let radii = fair_radii(&inst, k).unwrap();
        let model = build_lp(&inst, &radii, k, pnorm(p), None).unwrap();
        let sol = uniform_solution(&model).unwrap();
        assert!(validate_solution(&model, &sol).max() <= 1e-9);
        let out = fair_round(&inst, &radii, &sol, k, pnorm(p), BetaChoice::default()).unwrap();
        if let Some(trace) = &out.y_trace {
            full_paths += 1;
            for stage in [
                &trace.after_redistribute,
                &trace.after_cap,
                &trace.after_half_integral,
            ] {
                assert!((stage.iter().sum::<f64>() - k as f64).abs() <= 1e-6);
            }
            assert!(trace
                .after_cap
                .iter()
                .all(|&y| (0.5 - 1e-6..=1.0 + 1e-6).contains(&y)));
            assert!(trace
                .after_half_integral
                .iter()
                .all(|&y| (y - 0.5).abs() <= 1e-6 || (y - 1.0).abs() <= 1e-6));
            let forest = out.forest.as_ref().unwrap();
            let chosen: Vec<bool> = out
                .reps
                .iter()
                .map(|u| out.centers.binary_search(u).is_ok())
                .collect();
            for i in 0..out.reps.len() {
                assert!(chosen[i] || chosen[forest.nearest_other[i]]);
            }
        }
        assert_guarantees(&inst, &radii, k, p, sol.objective, &out.centers);
    }
    assert!(
        full_paths >= 5,
        "only {full_paths} runs reached the rounding phases"
    );
}

#[test]
fn oracle_sandwich_tiny() {
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.random_range(4..11);
        let k = rng.random_range(1..4).min(n);
        let p = if seed % 2 == 0 { 1.0 } else { 2.0 };
        let inst = instance(&uniform_points(n, 2, seed));
        let radii = fair_radii(&inst, k).unwrap();
        let oracle = brute_force_opt(&inst, &radii, k, pnorm(p)).unwrap();
        let plesnik = plesnik_baseline(&inst, &radii).unwrap();
        if !oracle.feasible {
            continue;
        }
        assert!(plesnik.len() <= k);
        let opt_pow = oracle.opt_cost_pow(p).unwrap();
        let model = build_lp(&inst, &radii, k, pnorm(p), None).unwrap();
        let sol = solve_lp(&model, 0.0, &DenseSimplex::default()).unwrap();
        assert!(sol.objective <= opt_pow + 1e-6, "seed {seed}");
        let out = fair_round(&inst, &radii, &sol, k, pnorm(p), BetaChoice::default()).unwrap();
        let cost = clustering_cost_pow(&inst, &out.centers, p).unwrap();
        assert!(cost <= 2f64.powf(p + 2.0) * sol.objective + 1e-9);
        // The rounded set has at most k centers, so it cannot beat the
        // optimum unless it breaks the radii.
        let fair = distances_to_set(&inst, &out.centers)
            .unwrap()
            .iter()
            .zip(radii.iter())
            .all(|(d, r)| d <= r);
        if fair {
            assert!(opt_pow <= cost + 1e-9);
        }
    }
}

#[test]
fn oracle_declared_infeasible_when_plesnik_exceeds_k() {
    let inst = instance(&[vec![0.0], vec![0.05], vec![10.0], vec![10.05]]);
    let radii = [0.1; 4];
    let s = plesnik_baseline(&inst, &radii).unwrap();
    assert!(s.len() > 1);
    assert!(
        !brute_force_opt(&inst, &radii, 1, pnorm(1.0))
            .unwrap()
            .feasible
    );
}

#[test]
fn beta_search_is_tight() {
    for seed in 0..8u64 {
        let inst = instance(&uniform_points(40, 2, seed));
        let k = 4;
        let radii = fair_radii(&inst, k).unwrap();
        let model = build_lp(&inst, &radii, k, pnorm(2.0), None).unwrap();
        let sol = solve_lp(&model, 0.0, &DenseSimplex::default()).unwrap();
        let c = per_point_cost(&inst, &sol, 2.0);
        let beta = beta_search(&inst, &radii, &c, k, 2.0).unwrap();
        let count = |b: f64| {
            filter(&inst, &shrunk_radii(&radii, &c, 2.0, b).unwrap())
                .unwrap()
                .len()
        };
        assert!(count(beta) <= k);
        if beta > BETA_MIN {
            assert!(count(beta / (1.0 + BETA_TOL)) > k);
        }
    }
}

#[test]
fn beta_search_with_k_equal_n() {
    let inst = instance(&uniform_points(7, 2, 3));
    let radii = fair_radii(&inst, 7).unwrap();
    assert_eq!(
        beta_search(&inst, &radii, &[0.0; 7], 7, 1.0).unwrap(),
        BETA_MIN
    );
}

#[test]
fn redistribution_conserves_mass() {
    for seed in 0..20u64 {
        let n = 50;
        let inst = instance(&uniform_points(n, 2, seed));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 0.2).collect();
        let reps = filter(&inst, &vec![0.1; n]).unwrap().reps;
        let moved = redistribute_y(&inst, &reps, &y).unwrap();
        let a: f64 = y.iter().sum();
        let b: f64 = moved.iter().sum();
        assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }
}

#[test]
fn kmeanspp_beats_random_subsets_on_two_clusters() {
    let inst = instance(&gaussian_mixture(60, 2, 2, 0.3, 11));
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut seeded, mut random) = (0.0, 0.0);
    for seed in 0..100u64 {
        let c = kmeanspp_baseline(&inst, 2, seed).unwrap();
        seeded += clustering_cost_pow(&inst, &c, 2.0).unwrap();
        let a = rng.random_range(0..60);
        let b = (a + rng.random_range(1..60)) % 60;
        random += clustering_cost_pow(&inst, &[a, b], 2.0).unwrap();
    }
    assert!(seeded < random, "{seeded} vs {random}");
}
