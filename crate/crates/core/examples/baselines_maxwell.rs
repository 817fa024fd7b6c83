//! The comparison methods on the Maxwell system: higher-order DMD on
//! delay-embedded snapshots and POD with RBF interpolation in time, sampled
//! at the full-order steps of a localized run.
//!
//! Run with `cargo run --release --example baselines_maxwell`.

use ldmd::baselines::{fom_sample_steps, run_hodmd, run_pod_rbf, HodmdConfig, Kernel};
use ldmd::dmd::{ObservableMap, RankSpec};
use ldmd::fom::{Equation, FomProblem};
use ldmd::harness::error_report;
use ldmd::ldmd::{run_pldmd, Schedule, StagePlan};

fn main() -> ldmd::Result<()> {
    let problem = FomProblem::benchmark(Equation::MaxwellTm);
    let reference = problem.reference_trajectory()?;
    let map = ObservableMap::augment_exp(problem.state_dim());
    let rank = RankSpec::Fixed(15);
    let schedule = Schedule::first_then_repeat(StagePlan::new(90, 10), StagePlan::new(50, 50), problem.n_steps)?;
    let localized = run_pldmd(&problem, &schedule, rank, map)?;

    let show = |label: &str, traj: &[ldmd::fom::State]| -> ldmd::Result<()> {
        let report = error_report(&problem, traj, &reference)?;
        let fields: Vec<String> = report.quantities[1..].iter().map(|q| format!("{}={:.3e}", q.name, q.mre)).collect();
        println!("{label:<14} {}", fields.join("  "));
        Ok(())
    };
    show("P-LDMD", &localized.trajectory)?;

    for d in [80, 100, 150] {
        let hodmd = run_hodmd(&problem, localized.fom_steps_used, &HodmdConfig { d, rank }, map)?;
        show(&format!("HODMD d={d}"), &hodmd.trajectory)?;
    }

    let samples = fom_sample_steps(&localized);
    for (label, kernel) in [("POD-RBF gauss", Kernel::default()), ("POD-RBF cubic", Kernel::Cubic)] {
        let pod = run_pod_rbf(&problem, &reference, &samples, 20, kernel)?;
        show(label, &pod.trajectory)?;
    }
    Ok(())
}
