use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::residual::{residual_estimator, ResidualConfig};
use super::stage::{extend_with_model, fit_stage, snapshot_phase};
use super::{prediction_rate, LdmdResult, ResidualSample, StageRecord};
use crate::dmd::{ObservableMap, RankSpec};
use crate::error::{Error, Result};
use crate::fom::{FomProblem, State};
use crate::numerics::C64;

/// Full-order snapshot steps taken by stages after the first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnapshotPolicy {
    /// Every stage uses the first stage's count.
    #[default]
    SameAsFirst,
    /// Every later stage uses this count.
    Fixed(usize),
    /// Stage `i` (1-based, `i >= 2`) uses entry `i - 1`; the last entry repeats.
    Schedule(Vec<usize>),
}

impl SnapshotPolicy {
    fn steps_for(&self, stage: usize, first: usize) -> usize {
        if stage <= 1 {
            return first;
        }
        match self {
            SnapshotPolicy::SameAsFirst => first,
            SnapshotPolicy::Fixed(n) => *n,
            SnapshotPolicy::Schedule(v) => v.get(stage - 1).or(v.last()).copied().unwrap_or(first),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            SnapshotPolicy::SameAsFirst => true,
            SnapshotPolicy::Fixed(n) => *n >= 2,
            SnapshotPolicy::Schedule(v) => !v.is_empty() && v.iter().skip(1).all(|&n| n >= 2),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::contract("later stages need at least 2 snapshot steps"))
        }
    }
}

/// Localized DMD with residual-driven segmentation.
///
/// Each stage runs the full-order model for its snapshot steps, fits a
/// model, then advances the prediction `window` steps at a time. After every
/// window the residual at the window boundary `b` (pair `u_b`, `u_{b+1}`)
/// is compared with `epsilon`; once it reaches the threshold the stage ends
/// and the next one restarts the full-order model from `u_b`. The residual at
/// `b` is then evaluated a second time with the full-order `u_{b+1}`.
pub fn run_aldmd(
    problem: &FomProblem,
    first_snapshots: usize,
    policy: &SnapshotPolicy,
    res: ResidualConfig,
    spec: RankSpec,
    map: ObservableMap,
) -> Result<LdmdResult> {
    if first_snapshots < 2 {
        return Err(Error::contract("first stage needs at least 2 snapshot steps"));
    }
    res.validate()?;
    policy.validate()?;
    spec.validate()?;
    if map.state_dim != problem.state_dim() {
        return Err(Error::contract("observable map does not match the problem's state dimension"));
    }

    let started = Instant::now();
    let n_total = problem.n_steps;
    let mut trajectory: Vec<State> = vec![problem.initial_condition()];
    let mut stages = Vec::new();
    let mut fom_steps = 0;
    let mut pos = 0;
    let mut carried: Option<ResidualSample> = None;

    while pos < n_total {
        let index = stages.len() + 1;
        let wanted = SnapshotPolicy::steps_for(policy, index, first_snapshots);
        let n_snap = wanted.min(n_total - pos);
        let start = trajectory[pos].clone();
        let snapshots = snapshot_phase(problem, &start, pos, n_snap, index)?;
        fom_steps += n_snap;

        let mut record = StageRecord {
            index,
            t_start: problem.time(pos),
            t_end: problem.time(pos + n_snap),
            start_step: pos,
            snapshot_steps: n_snap,
            predicted_steps: 0,
            window_count: 0,
            residual_trace: Vec::new(),
            correction_invoked: false,
            rank: 0,
            degraded: false,
        };
        if let Some(sample) = carried.take() {
            // second evaluation at the correction point, now on the full-order step
            let delta = residual_at(problem, &snapshots[0], &snapshots[1], pos)?;
            record.residual_trace.push(ResidualSample { step: sample.step, delta });
        }

        if pos + n_snap == n_total || n_snap < 2 {
            // horizon reached inside the snapshot phase
            trajectory.extend(snapshots.into_iter().skip(1));
            stages.push(record);
            break;
        }

        let model = fit_stage(problem, &snapshots, pos, spec, map)?;
        record.rank = model.rank;
        record.degraded = model.rank_reduced;
        extend_with_model(&mut trajectory, problem, &model, 1, n_snap);
        let mut local = n_snap;

        loop {
            let window = res.window.min(n_total - (pos + local));
            extend_with_model(&mut trajectory, problem, &model, local + 1, local + window);
            local += window;
            record.window_count += 1;

            let end = pos + local;
            if end == n_total {
                break;
            }
            // forward pair at the window boundary, the model's next state
            // standing in for the unknown `u_{b+1}`
            let ahead = problem.project_state(model.predict_state(local + 1));
            let delta = residual_at(problem, &trajectory[end], &ahead, end)?;
            record.residual_trace.push(ResidualSample { step: end, delta });
            if !(delta < res.epsilon) {
                record.correction_invoked = true;
                carried = Some(ResidualSample { step: end, delta });
                break;
            }
        }

        record.predicted_steps = local - n_snap;
        record.t_end = problem.time(pos + local);
        pos += local;
        stages.push(record);
    }

    let mut result = LdmdResult {
        trajectory,
        stages,
        gamma: 0.0,
        per_step_re: Vec::new(),
        fom_steps_used: fom_steps,
        wall_time: started.elapsed(),
    };
    result.gamma = prediction_rate(&result, n_total);
    Ok(result)
}

/// Residual of the pair `(u_k, u_next)` at step `k`. A non-finite pair counts
/// as exceeding any threshold.
fn residual_at(problem: &FomProblem, u_k: &[C64], u_next: &[C64], k: usize) -> Result<f64> {
    let f = problem.rhs(u_k, problem.time(k));
    match residual_estimator(u_k, u_next, &f, problem.dt()) {
        Ok(d) => Ok(d),
        Err(Error::NonFinite(_)) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}
