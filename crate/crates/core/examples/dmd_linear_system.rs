//! Standard DMD on snapshots of a linear map: the fitted eigenvalues match
//! the map's spectrum and the prediction stays exact far beyond the data.
//!
//! Run with `cargo run --release --example dmd_linear_system`.

use ldmd::dmd::{fit_dmd_states, ObservableMap, RankSpec};
use ldmd::numerics::C64;

fn main() -> ldmd::Result<()> {
    // u_{k+1} = A u_k with eigenvalues 0.95 e^{+-0.2i} and 0.8, seen in 6-d
    let (rho, theta, decay) = (0.95_f64, 0.2_f64, 0.8_f64);
    let state = |k: usize| -> Vec<C64> {
        let k = k as f64;
        let (c, s, e) = (rho.powf(k) * (theta * k).cos(), rho.powf(k) * (theta * k).sin(), decay.powf(k));
        [c, s, e, c + e, s - e, 0.5 * c + 0.25 * s]
            .iter()
            .map(|&x| C64::new(x, 0.0))
            .collect()
    };
    let training: Vec<Vec<C64>> = (0..30).map(state).collect();
    let model = fit_dmd_states(&training, 0.1, 0.0, RankSpec::Fixed(3), ObservableMap::identity(6))?;

    println!("rank {} (requested {})", model.rank, model.requested_rank);
    for lambda in &model.eigenvalues {
        println!("  eigenvalue {:.6} {:+.6}i  |lambda| = {:.6}", lambda.re, lambda.im, lambda.norm());
    }
    for k in [10, 29, 60, 120] {
        let exact = state(k);
        let pred = model.predict_state(k);
        let err = pred.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        println!("step {k:>3}: max abs error {err:.2e}");
    }
    let diag = model.diagnostics()?;
    println!(
        "||Phi|| = {:.3}, ||Phi^+|| = {:.3}, spectral radius = {:.4}",
        diag.norm_phi, diag.norm_phi_pinv, diag.spectral_radius
    );
    Ok(())
}
