//! Adaptive localized DMD on the complex-valued Schrodinger benchmark,
//! reporting the error of the position density and the residual estimator
//! on exact full-order pairs, which sets the smallest usable threshold.
//!
//! Run with `cargo run --release --example nlse_adaptive`.

use ldmd::dmd::{ObservableMap, RankSpec};
use ldmd::fom::{Equation, FomProblem};
use ldmd::harness::error_report;
use ldmd::ldmd::{residual_estimator, run_aldmd, run_dmd, ResidualConfig, SnapshotPolicy};

fn main() -> ldmd::Result<()> {
    let problem = FomProblem::benchmark(Equation::Nlse);
    let reference = problem.reference_trajectory()?;
    let map = ObservableMap::identity(problem.state_dim());
    let rank = RankSpec::Fixed(10);

    let floor = (0..problem.n_steps)
        .map(|k| {
            let f = problem.rhs(&reference[k], problem.time(k));
            residual_estimator(&reference[k], &reference[k + 1], &f, problem.dt())
        })
        .collect::<ldmd::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("largest residual on full-order pairs: {floor:.3e}");

    let dmd = run_dmd(&problem, 1000, rank, map)?;
    let dmd_mre = error_report(&problem, &dmd.trajectory, &reference)?.headline().mre;
    println!("standard DMD  gamma={:.3}  density MRE={:.3e}", dmd.gamma, dmd_mre);

    let adaptive = run_aldmd(&problem, 50, &SnapshotPolicy::Fixed(50), ResidualConfig::new(2e-7, 50)?, rank, map)?;
    let mre = error_report(&problem, &adaptive.trajectory, &reference)?.headline().mre;
    println!(
        "A-LDMD        gamma={:.3}  density MRE={:.3e}  stages={}",
        adaptive.gamma,
        mre,
        adaptive.stage_count()
    );
    Ok(())
}
