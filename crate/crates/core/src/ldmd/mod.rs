//! Localized DMD: the time axis is split into stages, each with a short
//! full-order snapshot phase followed by DMD prediction.
//!
//! * [`run_pldmd`] follows a predefined per-stage schedule.
//! * [`run_aldmd`] ends a stage when the residual estimator exceeds a
//!   threshold, checked every `m` predicted steps.
//! * [`run_optldmd`] places boundaries where the first-order Taylor remainder
//!   of the Burgers right-hand side, measured along a reference trajectory,
//!   exceeds a bound.
//!
//! Every stage after the first restarts the full-order model from the last
//! predicted state of the previous stage.

mod adaptive;
mod optimal;
mod predefined;
mod residual;
mod stage;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fom::{FomProblem, State};

pub use adaptive::{run_aldmd, SnapshotPolicy};
pub use optimal::{remainder_segmentation, run_optldmd, taylor_remainder_burgers, RemainderSegmentation, TaylorConfig};
pub use predefined::{run_dmd, run_pldmd, Schedule, StagePlan};
pub use residual::{residual_estimator, ResidualConfig};

/// One residual (or remainder) evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualSample {
    /// Global time-step index the sample is attached to.
    pub step: usize,
    pub delta: f64,
}

/// Bookkeeping for one stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    /// 1-based stage index.
    pub index: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub start_step: usize,
    /// Full-order steps taken in this stage (`n_i`).
    pub snapshot_steps: usize,
    /// Model-predicted steps in this stage.
    pub predicted_steps: usize,
    /// Prediction windows advanced (`c_i`); zero for non-adaptive methods.
    pub window_count: usize,
    pub residual_trace: Vec<ResidualSample>,
    /// The stage was terminated by the residual check and the full-order
    /// model was restarted from its last predicted state.
    pub correction_invoked: bool,
    /// Rank of the fitted model, zero when no model was fit.
    pub rank: usize,
    /// The model fell back to a lower rank than requested.
    pub degraded: bool,
}

impl StageRecord {
    pub fn end_step(&self) -> usize {
        self.start_step + self.snapshot_steps + self.predicted_steps
    }
}

/// Output of any of the localized runners (and of standard DMD, which is a
/// single-stage run).
#[derive(Clone, Debug)]
pub struct LdmdResult {
    /// `N_t + 1` states, index 0 is the initial condition.
    pub trajectory: Vec<State>,
    pub stages: Vec<StageRecord>,
    pub gamma: f64,
    /// Relative error per step `1..=N_t`; empty until a reference is attached.
    pub per_step_re: Vec<f64>,
    pub fom_steps_used: usize,
    pub wall_time: Duration,
}

impl LdmdResult {
    pub fn n_steps(&self) -> usize {
        self.trajectory.len() - 1
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    pub fn predicted_steps(&self) -> usize {
        self.stages.iter().map(|s| s.predicted_steps).sum()
    }

    /// All residual samples in stage order.
    pub fn residual_trace(&self) -> impl Iterator<Item = &ResidualSample> {
        self.stages.iter().flat_map(|s| s.residual_trace.iter())
    }

    /// Fills `per_step_re` against a reference trajectory using the
    /// problem's headline error quantity.
    pub fn attach_reference(&mut self, problem: &FomProblem, reference: &[State]) -> Result<()> {
        if reference.len() != self.trajectory.len() {
            return Err(Error::contract(format!(
                "reference has {} states, result has {}",
                reference.len(),
                self.trajectory.len()
            )));
        }
        self.per_step_re = (1..self.trajectory.len())
            .map(|k| {
                let est = &problem.error_quantities(&self.trajectory[k])[0].1;
                let exact = &problem.error_quantities(&reference[k])[0].1;
                crate::harness::relative_error(est, exact).value
            })
            .collect();
        Ok(())
    }
}

/// Fraction of the `n_steps` time steps produced by prediction rather than
/// the full-order model.
pub fn prediction_rate(result: &LdmdResult, n_steps: usize) -> f64 {
    if n_steps == 0 {
        return 0.0;
    }
    1.0 - result.fom_steps_used as f64 / n_steps as f64
}
