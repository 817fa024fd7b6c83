use ldmd::fom::{position_density, Equation, FomProblem, State};
use ldmd::ldmd::residual_estimator;
use ldmd::numerics::{norm2, C64};

fn terminal(n_steps: usize) -> State {
    FomProblem::burgers(500, n_steps).reference_trajectory().unwrap().pop().unwrap()
}

fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn burgers_time_stepping_is_first_order() {
    let base = 2000;
    let coarse = terminal(base);
    let half = terminal(2 * base);
    // Richardson extrapolation from dt/8 and dt/16 removes the O(dt) term,
    // leaving a reference whose error is second order
    let fine = terminal(8 * base);
    let finer = terminal(16 * base);
    let reference: State = fine.iter().zip(&finer).map(|(a, b)| b * 2.0 - a).collect();
    let ratio = distance(&coarse, &reference) / distance(&half, &reference);
    assert!((1.8..=2.2).contains(&ratio), "{ratio}");
}

#[test]
fn nlse_mass_drift_is_small() {
    let p = FomProblem::benchmark(Equation::Nlse);
    let traj = p.reference_trajectory().unwrap();
    let mass = |u: &[C64]| position_density(u).iter().sum::<f64>();
    let drift = (mass(traj.last().unwrap()) - mass(&traj[0])).abs() / mass(&traj[0]);
    assert!(drift <= 5e-2, "{drift}");
}

#[test]
fn dirichlet_ends_stay_zero() {
    for equation in [Equation::Burgers, Equation::Nlse] {
        let p = FomProblem::benchmark(equation);
        let last = p.state_dim() - 1;
        for u in p.reference_trajectory().unwrap() {
            assert_eq!(u[0], C64::new(0.0, 0.0), "{equation:?}");
            assert_eq!(u[last], C64::new(0.0, 0.0), "{equation:?}");
        }
    }
}

#[test]
fn allen_cahn_stays_bounded() {
    let p = FomProblem::benchmark(Equation::AllenCahn);
    let traj = p.reference_trajectory().unwrap();
    // phase values settle near +-1 after the initial transient
    let peak = traj[p.n_steps / 4..]
        .iter()
        .flat_map(|u| u.iter().map(|z| z.norm()))
        .fold(0.0, f64::max);
    assert!(peak <= 1.0 + 1e-6, "{peak}");
}

/// On consecutive full-order states the residual vanishes up to the
/// rounding of `u + dt f`. That is at most half an ulp per component, so
/// the residual stays below `eps ||u_{k+1}|| / dt`.
#[test]
fn residual_of_full_order_pairs_is_rounding_only() {
    for equation in [Equation::Burgers, Equation::AllenCahn, Equation::Nlse, Equation::MaxwellTm] {
        let p = FomProblem::benchmark(equation);
        let traj = p.reference_trajectory().unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..p.n_steps {
            let f = p.rhs(&traj[k], p.time(k));
            let delta = residual_estimator(&traj[k], &traj[k + 1], &f, p.dt()).unwrap();
            let bound = f64::EPSILON * norm2(&traj[k + 1]) / p.dt();
            assert!(delta <= bound, "{equation:?} step {k}: {delta:e} > {bound:e}");
            worst = worst.max(delta);
        }
        assert!(worst < 1e-11, "{equation:?}: {worst:e}");
    }
}
