//! Helpers shared by the integration tests and the acceptance runner.

#![allow(dead_code)]

use ldmd::dmd::{fit_dmd_states, ObservableMap, RankSpec};
use ldmd::fom::{FomProblem, State};
use ldmd::harness::error_report;
use ldmd::ldmd::{LdmdResult, StageRecord};
use ldmd::numerics::{lstsq_pinv, thin_svd, DenseMatrix, C64, DEFAULT_RCOND};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).unwrap()
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.sub(b).frobenius_norm()
}

/// Trajectory of `y_{k+1} = A y_k` for a random diagonalizable `A` of size
/// `dim` with well-separated eigenvalues of modulus in `[0.85, 1]`.
pub fn linear_trajectory(rng: &mut ChaCha8Rng, dim: usize, steps: usize) -> Vec<State> {
    let eigen: Vec<C64> = (0..dim)
        .map(|j| {
            let angle = std::f64::consts::TAU * j as f64 / dim as f64 + rng.gen_range(0.0..0.3) + 0.05;
            C64::from_polar(rng.gen_range(0.85..1.0), angle)
        })
        .collect();
    let p = DenseMatrix::from_fn(dim, dim, |i, j| {
        let off = C64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
        if i == j {
            off + 1.0
        } else {
            off
        }
    })
    .unwrap();
    let p_inv = lstsq_pinv(&p, &DenseMatrix::identity(dim), DEFAULT_RCOND).unwrap();
    let a = &p.scale_columns(&eigen) * &p_inv;
    let mut y: State = (0..dim).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let mut out = Vec::with_capacity(steps + 1);
    for _ in 0..=steps {
        let next = a.mul_vec(&y);
        out.push(std::mem::replace(&mut y, next));
    }
    out
}

/// Largest relative error of a DMD fit on the first `m` states when
/// predicting the following `2m` steps.
pub fn linear_recovery_error(states: &[State], m: usize) -> f64 {
    let dim = states[0].len();
    let model = fit_dmd_states(&states[..m], 0.1, 0.0, RankSpec::Fixed(dim), ObservableMap::identity(dim)).unwrap();
    (m..=3 * m)
        .map(|k| ldmd::harness::relative_error(&model.predict_state(k), &states[k]).value)
        .fold(0.0, f64::max)
}

/// The four Moore-Penrose residuals of `X = pinv(A)`.
pub fn moore_penrose_residuals(a: &DenseMatrix) -> [f64; 4] {
    let x = lstsq_pinv(a, &DenseMatrix::identity(a.rows()), DEFAULT_RCOND).unwrap();
    let ax = a * &x;
    let xa = &x * a;
    [
        max_abs_diff(&(&ax * a), a),
        max_abs_diff(&(&xa * &x), &x),
        max_abs_diff(&ax.adjoint(), &ax),
        max_abs_diff(&xa.adjoint(), &xa),
    ]
}

/// Orthonormality defects of `U` and `V`, the full-rank reconstruction
/// error relative to `||A||`, and the gap between the rank-`k` truncation
/// error and the tail singular values (Eckart-Young).
pub fn svd_checks(a: &DenseMatrix, k: usize) -> (bool, f64, f64, f64) {
    let full = thin_svd(a, a.rows().min(a.cols())).unwrap();
    let sorted = full.sigma.windows(2).all(|w| w[0] >= w[1]) && full.sigma.iter().all(|&s| s >= 0.0);
    let n = full.sigma.len();
    let ortho = max_abs_diff(&(&full.u.adjoint() * &full.u), &DenseMatrix::identity(n))
        .max(max_abs_diff(&(&full.v.adjoint() * &full.v), &DenseMatrix::identity(n)));
    let recon = max_abs_diff(&full.reconstruct(), a) / a.frobenius_norm();
    let trunc = thin_svd(a, k).unwrap();
    let tail: f64 = full.sigma[k..].iter().map(|s| s * s).sum::<f64>().sqrt();
    let gap = (max_abs_diff(&trunc.reconstruct(), a) - tail).abs() / a.frobenius_norm();
    (sorted, ortho, recon, gap)
}

pub fn mre(problem: &FomProblem, result: &LdmdResult, reference: &[State]) -> f64 {
    error_report(problem, &result.trajectory, reference).unwrap().headline().mre
}

/// Stages tile `[0, N_t]`, step counts add up and `gamma` matches the
/// stage records.
pub fn accounting_holds(result: &LdmdResult, n_steps: usize) -> bool {
    let fom: usize = result.stages.iter().map(|s| s.snapshot_steps).sum();
    let predicted: usize = result.stages.iter().map(|s| s.predicted_steps).sum();
    let contiguous = result.stages.windows(2).all(|w| w[0].end_step() == w[1].start_step)
        && result.stages.first().is_some_and(|s| s.start_step == 0)
        && result.stages.last().is_some_and(|s| s.end_step() == n_steps);
    let gamma = 1.0 - fom as f64 / n_steps as f64;
    contiguous
        && fom == result.fom_steps_used
        && fom + predicted == n_steps
        && (gamma - result.gamma).abs() <= 1e-12
        && result.trajectory.len() == n_steps + 1
}

/// Window checks of a stage: trace entries after its start step. The entry
/// at the start step is the re-evaluation with the full-order state.
fn window_checks(stage: &StageRecord) -> Vec<f64> {
    stage.residual_trace.iter().filter(|s| s.step > stage.start_step).map(|s| s.delta).collect()
}

/// Corrected stages end on a check at or above `epsilon` and every other
/// check is below it.
pub fn gating_holds(result: &LdmdResult, epsilon: f64) -> bool {
    result.stages.iter().all(|stage| {
        let checks = window_checks(stage);
        match (stage.correction_invoked, checks.split_last()) {
            (true, Some((last, before))) => *last >= epsilon && before.iter().all(|&d| d < epsilon),
            (true, None) => false,
            (false, _) => checks.iter().all(|&d| d < epsilon),
        }
    })
}
