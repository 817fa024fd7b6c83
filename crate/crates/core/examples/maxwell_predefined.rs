//! Predefined-schedule localized DMD on the 2-D Maxwell system with a
//! Drude-type current, using the exponential-augmented observable, against
//! standard DMD with the same number of full-order steps.
//!
//! Run with `cargo run --release --example maxwell_predefined`.

use ldmd::dmd::{ObservableMap, RankSpec};
use ldmd::fom::{Equation, FomProblem};
use ldmd::harness::error_report;
use ldmd::ldmd::{run_dmd, run_pldmd, LdmdResult, Schedule, StagePlan};

fn print_fields(label: &str, problem: &FomProblem, result: &LdmdResult, reference: &[ldmd::fom::State]) -> ldmd::Result<()> {
    let report = error_report(problem, &result.trajectory, reference)?;
    print!("{label:<8} gamma={:.3} stages={:>2}", result.gamma, result.stage_count());
    for q in &report.quantities {
        print!("  {}={:.3e}", q.name, q.mre);
    }
    println!();
    Ok(())
}

fn main() -> ldmd::Result<()> {
    let problem = FomProblem::benchmark(Equation::MaxwellTm);
    let reference = problem.reference_trajectory()?;
    let map = ObservableMap::augment_exp(problem.state_dim());
    let rank = RankSpec::Fixed(15);

    let schedule = Schedule::first_then_repeat(StagePlan::new(90, 10), StagePlan::new(50, 50), problem.n_steps)?;
    let localized = run_pldmd(&problem, &schedule, rank, map)?;
    print_fields("P-LDMD", &problem, &localized, &reference)?;

    let standard = run_dmd(&problem, localized.fom_steps_used, rank, map)?;
    print_fields("DMD", &problem, &standard, &reference)?;
    Ok(())
}
