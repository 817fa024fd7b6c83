//! Integrates every benchmark full-order model over its horizon and prints
//! grid sizes, stability numbers and a few state diagnostics.
//!
//! Run with `cargo run --release --example full_order_models`.

use ldmd::fom::{position_density, Equation, FomProblem};
use ldmd::numerics::norm2;

fn main() -> ldmd::Result<()> {
    for equation in [Equation::Burgers, Equation::AllenCahn, Equation::Nlse, Equation::MaxwellTm] {
        let problem = FomProblem::benchmark(equation);
        let started = std::time::Instant::now();
        let trajectory = problem.reference_trajectory()?;
        let last = trajectory.last().expect("non-empty trajectory");
        println!(
            "{:<11} dim={:>5} steps={} dt={:.3e} stability={:.3} time={:.2?}",
            equation.name(),
            problem.state_dim(),
            problem.n_steps,
            problem.dt(),
            problem.stability_number(),
            started.elapsed()
        );
        println!("            ||u(0)|| = {:.4e}  ||u(T)|| = {:.4e}", norm2(&trajectory[0]), norm2(last));
        if equation == Equation::Nlse {
            let h = problem.grid.spacing();
            let mass = |u: &[_]| position_density(u).iter().sum::<f64>() * h;
            println!("            mass drift = {:.3e}", (mass(last) - mass(&trajectory[0])).abs() / mass(&trajectory[0]));
        }
    }
    Ok(())
}
