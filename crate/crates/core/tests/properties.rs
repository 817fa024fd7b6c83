mod common;

use common::*;
use ldmd::dmd::{select_rank, ObservableMap, RankSpec};
use ldmd::fom::FomProblem;
use ldmd::ldmd::{run_aldmd, run_dmd, run_pldmd, ResidualConfig, Schedule, SnapshotPolicy, StagePlan};
use ldmd::numerics::C64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linear_systems_are_recovered(seed in any::<u64>(), dim in 1usize..=10, extra in 0usize..8) {
        let m = (dim + 1).max(3) + extra;
        let states = linear_trajectory(&mut rng(seed), dim, 3 * m);
        let err = linear_recovery_error(&states, m);
        prop_assert!(err <= 1e-8, "dim {dim}, m {m}: {err:e}");
    }

    #[test]
    fn pseudo_inverse_is_moore_penrose(seed in any::<u64>()) {
        let a = random_matrix(&mut rng(seed), 6, 4);
        for r in moore_penrose_residuals(&a) {
            prop_assert!(r <= 1e-8, "{r:e}");
        }
    }

    #[test]
    fn svd_is_orthonormal_and_optimal(seed in any::<u64>(), rows in 2usize..12, cols in 2usize..12) {
        let a = random_matrix(&mut rng(seed), rows, cols);
        let k = rows.min(cols) / 2 + 1;
        let (sorted, ortho, recon, gap) = svd_checks(&a, k);
        prop_assert!(sorted);
        prop_assert!(ortho <= 1e-9, "{ortho:e}");
        prop_assert!(recon <= 1e-10, "{recon:e}");
        prop_assert!(gap <= 1e-10, "{gap:e}");
    }

    #[test]
    fn energy_rank_is_monotone(mut sigma in prop::collection::vec(1e-6f64..10.0, 1..30), a in 1e-6f64..0.99, b in 1e-6f64..0.99) {
        sigma.sort_by(|x, y| y.total_cmp(x));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(select_rank(&sigma, RankSpec::Energy(lo)).unwrap() >= select_rank(&sigma, RankSpec::Energy(hi)).unwrap());
    }

    #[test]
    fn observables_round_trip(values in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..20)) {
        let u: Vec<C64> = values.iter().map(|&(re, im)| C64::new(re, im)).collect();
        for map in [ObservableMap::identity(u.len()), ObservableMap::augment_exp(u.len())] {
            let back = map.invert(&map.apply(&u).unwrap()).unwrap();
            prop_assert_eq!(&back, &u);
        }
    }
}

fn small_burgers() -> FomProblem {
    FomProblem::burgers(60, 400)
}

#[test]
fn single_stage_runs_reduce_to_standard_dmd() {
    let p = small_burgers();
    let map = ObservableMap::identity(p.state_dim());
    let rank = RankSpec::Fixed(8);
    let dmd = run_dmd(&p, 120, rank, map).unwrap();
    let one_stage = Schedule::new(vec![StagePlan::new(120, 280)]);
    let pl = run_pldmd(&p, &one_stage, rank, map).unwrap();
    let res = ResidualConfig::new(f64::INFINITY, 25).unwrap();
    let al = run_aldmd(&p, 120, &SnapshotPolicy::SameAsFirst, res, rank, map).unwrap();
    assert_eq!(pl.trajectory, dmd.trajectory);
    assert_eq!(al.trajectory, dmd.trajectory);
    assert_eq!(al.stage_count(), 1);
    assert_eq!(al.gamma, dmd.gamma);
    assert!(!al.stages[0].correction_invoked);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn adaptive_runs_keep_accounting_and_gating(
        log_eps in -6.0f64..-1.0,
        n1 in 10usize..80,
        later in 4usize..60,
        window in 5usize..60,
    ) {
        let p = small_burgers();
        let eps = 10f64.powf(log_eps);
        let map = ObservableMap::identity(p.state_dim());
        let res = ResidualConfig::new(eps, window).unwrap();
        let out = run_aldmd(&p, n1, &SnapshotPolicy::Fixed(later), res, RankSpec::Fixed(6), map).unwrap();
        prop_assert!(accounting_holds(&out, p.n_steps));
        prop_assert!(gating_holds(&out, eps));
        prop_assert!(out.stages.iter().all(|s| s.window_count * window >= s.predicted_steps));
    }

    #[test]
    fn predefined_runs_keep_accounting(count in 1usize..12, fraction in 0.2f64..0.8) {
        let p = small_burgers();
        let schedule = Schedule::uniform(count, p.n_steps, fraction).unwrap();
        let out = run_pldmd(&p, &schedule, RankSpec::Fixed(6), ObservableMap::identity(p.state_dim())).unwrap();
        prop_assert!(accounting_holds(&out, p.n_steps));
        prop_assert_eq!(out.stage_count(), count);
    }
}

#[test]
fn larger_threshold_predicts_more_and_errs_more() {
    let p = FomProblem::benchmark(ldmd::fom::Equation::Burgers);
    let reference = p.reference_trajectory().unwrap();
    let map = ObservableMap::identity(p.state_dim());
    let runs: Vec<(f64, f64)> = [5e-5, 1e-4, 1e-2]
        .iter()
        .map(|&eps| {
            let res = ResidualConfig::new(eps, 50).unwrap();
            let out = run_aldmd(&p, 300, &SnapshotPolicy::Fixed(54), res, RankSpec::Fixed(20), map).unwrap();
            (out.gamma, mre(&p, &out, &reference))
        })
        .collect();
    for w in runs.windows(2) {
        assert!(w[1].0 > w[0].0 && w[1].1 > w[0].1, "{runs:?}");
    }
}
