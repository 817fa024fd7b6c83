use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::stage::{extend_with_model, fit_stage, snapshot_phase};
use super::{prediction_rate, LdmdResult, StageRecord};
use crate::dmd::{ObservableMap, RankSpec};
use crate::error::{Error, Result};
use crate::fom::FomProblem;

/// Snapshot and prediction step counts of one stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagePlan {
    pub snapshots: usize,
    pub predictions: usize,
}

impl StagePlan {
    pub fn new(snapshots: usize, predictions: usize) -> Self {
        StagePlan { snapshots, predictions }
    }

    pub fn len(&self) -> usize {
        self.snapshots + self.predictions
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A predefined segmentation of the time axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub stages: Vec<StagePlan>,
}

impl Schedule {
    pub fn new(stages: Vec<StagePlan>) -> Self {
        Schedule { stages }
    }

    /// One leading stage followed by repeats of `rest` until `n_steps` is
    /// covered exactly.
    pub fn first_then_repeat(first: StagePlan, rest: StagePlan, n_steps: usize) -> Result<Self> {
        if first.len() > n_steps || rest.is_empty() || (n_steps - first.len()) % rest.len() != 0 {
            return Err(Error::config(format!(
                "stages {first:?} then {rest:?} cannot tile {n_steps} steps"
            )));
        }
        let repeats = (n_steps - first.len()) / rest.len();
        let mut stages = vec![first];
        stages.extend(std::iter::repeat(rest).take(repeats));
        Ok(Schedule { stages })
    }

    /// `count` equal segments (the last one absorbs the remainder), each
    /// using the leading `fraction` of its steps as snapshots.
    pub fn uniform(count: usize, n_steps: usize, fraction: f64) -> Result<Self> {
        if count == 0 || count > n_steps || !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::config("uniform schedule needs count in 1..=n_steps and fraction in (0, 1)"));
        }
        let base = n_steps / count;
        let stages = (0..count)
            .map(|i| {
                let len = if i + 1 == count { n_steps - base * (count - 1) } else { base };
                split_segment(len, fraction)
            })
            .collect();
        Ok(Schedule { stages })
    }

    /// Total steps covered.
    pub fn total_steps(&self) -> usize {
        self.stages.iter().map(StagePlan::len).sum()
    }

    pub fn validate(&self, n_steps: usize) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::contract("schedule has no stages"));
        }
        if self.total_steps() != n_steps {
            return Err(Error::contract(format!(
                "schedule covers {} steps, problem has {n_steps}",
                self.total_steps()
            )));
        }
        if let Some(bad) = self.stages.iter().position(|s| s.snapshots < 2) {
            return Err(Error::contract(format!("stage {} has fewer than 2 snapshot steps", bad + 1)));
        }
        Ok(())
    }
}

/// Splits a segment of `len` steps into a leading snapshot part and a
/// prediction part.
pub(super) fn split_segment(len: usize, fraction: f64) -> StagePlan {
    let snapshots = ((len as f64 * fraction).floor() as usize).clamp(2.min(len), len);
    StagePlan::new(snapshots, len - snapshots)
}

/// Localized DMD over a predefined schedule.
pub fn run_pldmd(problem: &FomProblem, schedule: &Schedule, spec: RankSpec, map: ObservableMap) -> Result<LdmdResult> {
    schedule.validate(problem.n_steps)?;
    spec.validate()?;
    if map.state_dim != problem.state_dim() {
        return Err(Error::contract("observable map does not match the problem's state dimension"));
    }
    let started = Instant::now();
    let mut trajectory = vec![problem.initial_condition()];
    let mut stages = Vec::with_capacity(schedule.stages.len());
    let mut fom_steps = 0;
    let mut pos = 0;

    for (i, plan) in schedule.stages.iter().enumerate() {
        let start = trajectory[pos].clone();
        let snapshots = snapshot_phase(problem, &start, pos, plan.snapshots, i + 1)?;
        fom_steps += plan.snapshots;
        let model = fit_stage(problem, &snapshots, pos, spec, map)?;
        extend_with_model(&mut trajectory, problem, &model, 1, plan.len());
        stages.push(StageRecord {
            index: i + 1,
            t_start: problem.time(pos),
            t_end: problem.time(pos + plan.len()),
            start_step: pos,
            snapshot_steps: plan.snapshots,
            predicted_steps: plan.predictions,
            window_count: 0,
            residual_trace: Vec::new(),
            correction_invoked: false,
            rank: model.rank,
            degraded: model.rank_reduced,
        });
        pos += plan.len();
    }

    let mut result = LdmdResult {
        trajectory,
        stages,
        gamma: 0.0,
        per_step_re: Vec::new(),
        fom_steps_used: fom_steps,
        wall_time: started.elapsed(),
    };
    result.gamma = prediction_rate(&result, problem.n_steps);
    Ok(result)
}

/// Standard DMD: fit on the first `snapshots` full-order steps and predict
/// the rest of the horizon.
pub fn run_dmd(problem: &FomProblem, snapshots: usize, spec: RankSpec, map: ObservableMap) -> Result<LdmdResult> {
    if snapshots > problem.n_steps {
        return Err(Error::contract("more snapshot steps than the horizon"));
    }
    let schedule = Schedule::new(vec![StagePlan::new(snapshots, problem.n_steps - snapshots)]);
    run_pldmd(problem, &schedule, spec, map)
}
