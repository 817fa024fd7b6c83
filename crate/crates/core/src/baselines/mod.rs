//! Comparison methods: higher-order DMD on delay-stacked snapshots and
//! POD with radial-basis-function interpolation in time.

mod hodmd;
mod pod_rbf;

use std::time::Instant;

pub use hodmd::{delay_matrix_shape, fit_hodmd, HodmdConfig};
pub use pod_rbf::{fit_pod_rbf, predict_pod_rbf, Kernel, PodRbfModel};

use crate::dmd::ObservableMap;
use crate::error::{Error, Result};
use crate::fom::{FomProblem, State};
use crate::ldmd::{prediction_rate, LdmdResult, StageRecord};

fn single_stage(problem: &FomProblem, fom_steps: usize, rank: usize, degraded: bool) -> StageRecord {
    StageRecord {
        index: 1,
        t_start: problem.time(0),
        t_end: problem.time(problem.n_steps),
        start_step: 0,
        snapshot_steps: fom_steps,
        predicted_steps: problem.n_steps - fom_steps,
        window_count: 0,
        residual_trace: Vec::new(),
        correction_invoked: false,
        rank,
        degraded,
    }
}

fn finish(problem: &FomProblem, trajectory: Vec<State>, stage: StageRecord, started: Instant) -> LdmdResult {
    let mut result = LdmdResult {
        trajectory,
        fom_steps_used: stage.snapshot_steps,
        stages: vec![stage],
        gamma: 0.0,
        per_step_re: Vec::new(),
        wall_time: started.elapsed(),
    };
    result.gamma = prediction_rate(&result, problem.n_steps);
    result
}

/// Fits HODMD to the first `snapshots` full-order steps and predicts the
/// whole horizon.
pub fn run_hodmd(problem: &FomProblem, snapshots: usize, cfg: &HodmdConfig, map: ObservableMap) -> Result<LdmdResult> {
    if snapshots > problem.n_steps {
        return Err(Error::contract("more snapshot steps than the horizon"));
    }
    let started = Instant::now();
    let u0 = problem.initial_condition();
    let states = problem.integrate(&u0, problem.time(0), snapshots)?;
    let model = fit_hodmd(&states, cfg, problem.dt(), problem.time(0), map)?;
    let mut trajectory = vec![u0];
    trajectory.extend((1..=problem.n_steps).map(|k| problem.project_state(model.predict_state(k))));
    let stage = single_stage(problem, snapshots, model.rank, model.rank_reduced);
    Ok(finish(problem, trajectory, stage, started))
}

/// Steps at which a localized run called the full-order model, plus the
/// initial condition.
pub fn fom_sample_steps(result: &LdmdResult) -> Vec<usize> {
    let mut steps = vec![0];
    for s in &result.stages {
        steps.extend(s.start_step + 1..=s.start_step + s.snapshot_steps);
    }
    steps.dedup();
    steps
}

/// Fits POD-RBF to reference states at `sample_steps` and evaluates it at
/// every step of the horizon.
pub fn run_pod_rbf(
    problem: &FomProblem,
    reference: &[State],
    sample_steps: &[usize],
    r_pod: usize,
    kernel: Kernel,
) -> Result<LdmdResult> {
    if reference.len() != problem.n_steps + 1 {
        return Err(Error::contract("reference must cover the whole horizon"));
    }
    if sample_steps.iter().any(|&k| k > problem.n_steps) {
        return Err(Error::contract("sample step beyond the horizon"));
    }
    let started = Instant::now();
    let states: Vec<&State> = sample_steps.iter().map(|&k| &reference[k]).collect();
    let times: Vec<f64> = sample_steps.iter().map(|&k| problem.time(k)).collect();
    let model = fit_pod_rbf(&states, &times, r_pod, kernel)?;
    let mut trajectory = vec![reference[0].clone()];
    trajectory.extend((1..=problem.n_steps).map(|k| problem.project_state(predict_pod_rbf(&model, problem.time(k)))));
    let fom_steps = sample_steps.iter().filter(|&&k| k > 0).count();
    let stage = single_stage(problem, fom_steps, model.pod_basis.cols(), model.regularized);
    Ok(finish(problem, trajectory, stage, started))
}
