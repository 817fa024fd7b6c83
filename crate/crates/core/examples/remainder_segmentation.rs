//! Oracle segmentation of Burgers from the first-order Taylor remainder
//! along a reference run, compared with uniform segments and with the
//! adaptive method given the same per-stage snapshot counts.
//!
//! Run with `cargo run --release --example remainder_segmentation`.

use ldmd::dmd::{ObservableMap, RankSpec};
use ldmd::fom::{Equation, FomProblem};
use ldmd::harness::error_report;
use ldmd::ldmd::{remainder_segmentation, run_aldmd, run_optldmd, run_pldmd, ResidualConfig, Schedule, SnapshotPolicy, TaylorConfig};

fn main() -> ldmd::Result<()> {
    let problem = FomProblem::benchmark(Equation::Burgers);
    let reference = problem.reference_trajectory()?;
    let map = ObservableMap::identity(problem.state_dim());
    let rank = RankSpec::Fixed(15);
    let cfg = TaylorConfig::new(0.5, 0.5)?;

    let seg = remainder_segmentation(&reference, problem.grid.spacing(), &cfg)?;
    println!("segments ({}): {:?}", seg.segments.len(), seg.segments);
    let mre = |traj: &[ldmd::fom::State]| error_report(&problem, traj, &reference).map(|r| r.headline().mre);

    let opt = run_optldmd(&reference, &problem, &cfg, rank)?;
    println!("remainder  stages={:>2} gamma={:.3} MRE={:.3e}", opt.stage_count(), opt.gamma, mre(&opt.trajectory)?);

    let uniform = Schedule::uniform(seg.segments.len(), problem.n_steps, 0.5)?;
    let p = run_pldmd(&problem, &uniform, rank, map)?;
    println!("uniform    stages={:>2} gamma={:.3} MRE={:.3e}", p.stage_count(), p.gamma, mre(&p.trajectory)?);

    let counts: Vec<usize> = seg.schedule(0.5).stages.iter().map(|s| s.snapshots).collect();
    let a = run_aldmd(&problem, counts[0], &SnapshotPolicy::Schedule(counts), ResidualConfig::new(3e-5, 50)?, rank, map)?;
    println!("adaptive   stages={:>2} gamma={:.3} MRE={:.3e}", a.stage_count(), a.gamma, mre(&a.trajectory)?);
    Ok(())
}
