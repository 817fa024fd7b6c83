//! Adaptive localized DMD on viscous Burgers compared with standard DMD.
//!
//! Run with `cargo run --release --example burgers_adaptive`.

use ldmd::dmd::{ObservableMap, RankSpec};
use ldmd::fom::{Equation, FomProblem};
use ldmd::harness::error_report;
use ldmd::ldmd::{run_aldmd, run_dmd, ResidualConfig, SnapshotPolicy};

fn main() -> ldmd::Result<()> {
    let problem = FomProblem::benchmark(Equation::Burgers);
    let reference = problem.reference_trajectory()?;
    let map = ObservableMap::identity(problem.state_dim());
    let rank = RankSpec::Fixed(20);

    let dmd = run_dmd(&problem, 1000, rank, map)?;
    let dmd_mre = error_report(&problem, &dmd.trajectory, &reference)?.headline().mre;
    println!("standard DMD  gamma={:.3}  MRE={:.4e}", dmd.gamma, dmd_mre);

    let residual = ResidualConfig::new(5e-5, 50)?;
    let adaptive = run_aldmd(&problem, 300, &SnapshotPolicy::Fixed(54), residual, rank, map)?;
    let report = error_report(&problem, &adaptive.trajectory, &reference)?;
    println!(
        "A-LDMD        gamma={:.3}  MRE={:.4e}  stages={}  time={:.2?}",
        adaptive.gamma,
        report.headline().mre,
        adaptive.stage_count(),
        adaptive.wall_time
    );
    for stage in &adaptive.stages {
        let last = stage.residual_trace.last().map_or(0.0, |s| s.delta);
        println!(
            "  stage {:>2}  t=[{:.4}, {:.4}]  n={:>3}  c={}  last residual={:.3e}",
            stage.index, stage.t_start, stage.t_end, stage.snapshot_steps, stage.window_count, last
        );
    }
    Ok(())
}
