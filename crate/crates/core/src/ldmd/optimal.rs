use serde::{Deserialize, Serialize};

use super::predefined::{run_pldmd, split_segment, Schedule};
use super::{LdmdResult, ResidualSample};
use crate::dmd::{ObservableMap, RankSpec};
use crate::error::{Error, Result};
use crate::fom::{burgers_remainder_operator, Equation, FomProblem, State};
use crate::numerics::{all_finite, norm2, C64};

/// Settings of the remainder-driven oracle segmentation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorConfig {
    /// Remainder bound; a segment ends once the remainder exceeds it.
    pub varepsilon: f64,
    /// Leading fraction of every segment used as snapshots.
    pub snapshot_fraction: f64,
    /// Shortest admissible segment, so that every stage keeps at least two
    /// snapshot steps.
    #[serde(default = "default_min_segment")]
    pub min_segment: usize,
}

fn default_min_segment() -> usize {
    4
}

impl TaylorConfig {
    pub fn new(varepsilon: f64, snapshot_fraction: f64) -> Result<Self> {
        let cfg = TaylorConfig { varepsilon, snapshot_fraction, min_segment: default_min_segment() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.varepsilon > 0.0) {
            return Err(Error::contract(format!("varepsilon must be positive, got {}", self.varepsilon)));
        }
        if !(self.snapshot_fraction > 0.0 && self.snapshot_fraction < 1.0) {
            return Err(Error::contract("snapshot_fraction must lie in (0, 1)"));
        }
        let min_snap = (self.min_segment as f64 * self.snapshot_fraction).floor() as usize;
        if min_snap < 2 {
            return Err(Error::contract("min_segment too short for two snapshot steps"));
        }
        Ok(())
    }
}

/// `|| -1/2 A1 (du o du) ||_2` on a grid of spacing `h`.
pub fn taylor_remainder_burgers(delta_u: &[C64], h: f64) -> f64 {
    norm2(&burgers_remainder_operator(delta_u, h))
}

/// Segment boundaries found along a reference trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct RemainderSegmentation {
    /// Segment lengths in steps, summing to `N_t`.
    pub segments: Vec<usize>,
    /// Remainder value at every step `1..=N_t`, measured from the start of
    /// the segment containing the step.
    pub trace: Vec<ResidualSample>,
}

impl RemainderSegmentation {
    /// Global step index where each segment starts.
    pub fn boundaries(&self) -> Vec<usize> {
        self.segments
            .iter()
            .scan(0, |acc, &len| {
                let start = *acc;
                *acc += len;
                Some(start)
            })
            .collect()
    }

    pub fn schedule(&self, fraction: f64) -> Schedule {
        Schedule::new(self.segments.iter().map(|&len| split_segment(len, fraction)).collect())
    }
}

/// Walks the reference trajectory and closes a segment at the first step
/// whose remainder, taken with respect to the segment's first state, exceeds
/// the bound. A trailing piece shorter than `min_segment` is merged into the
/// segment before it.
pub fn remainder_segmentation(reference: &[State], h: f64, cfg: &TaylorConfig) -> Result<RemainderSegmentation> {
    cfg.validate()?;
    if reference.len() < 2 {
        return Err(Error::contract("reference trajectory must contain at least two states"));
    }
    if !reference.iter().all(|u| all_finite(u)) {
        return Err(Error::NonFinite("reference trajectory".into()));
    }
    let n_steps = reference.len() - 1;
    let mut segments = Vec::new();
    let mut trace = Vec::with_capacity(n_steps);
    let mut start = 0;
    for k in 1..=n_steps {
        let delta: Vec<C64> = reference[k].iter().zip(&reference[start]).map(|(a, b)| a - b).collect();
        let value = taylor_remainder_burgers(&delta, h);
        trace.push(ResidualSample { step: k, delta: value });
        if value > cfg.varepsilon && k - start >= cfg.min_segment {
            segments.push(k - start);
            start = k;
        }
    }
    if start < n_steps {
        let tail = n_steps - start;
        match segments.last_mut() {
            Some(last) if tail < cfg.min_segment => *last += tail,
            _ => segments.push(tail),
        }
    }
    Ok(RemainderSegmentation { segments, trace })
}

/// Localized DMD on the remainder segmentation of a Burgers reference run.
///
/// The reference is only used to place boundaries; every stage then runs
/// exactly like the predefined method, fitting on the leading
/// `snapshot_fraction` of its steps.
pub fn run_optldmd(reference: &[State], problem: &FomProblem, cfg: &TaylorConfig, spec: RankSpec) -> Result<LdmdResult> {
    if problem.equation != Equation::Burgers {
        return Err(Error::contract("the remainder segmentation is defined for Burgers only"));
    }
    if reference.len() != problem.n_steps + 1 {
        return Err(Error::contract(format!(
            "reference must hold {} states, got {}",
            problem.n_steps + 1,
            reference.len()
        )));
    }
    let seg = remainder_segmentation(reference, problem.grid.spacing(), cfg)?;
    let schedule = seg.schedule(cfg.snapshot_fraction);
    let mut result = run_pldmd(problem, &schedule, spec, ObservableMap::identity(problem.state_dim()))?;
    // keep the remainder trace so segmentations can be compared with residuals
    for stage in &mut result.stages {
        let range = stage.start_step + 1..=stage.end_step();
        stage.residual_trace = seg.trace.iter().filter(|s| range.contains(&s.step)).copied().collect();
    }
    Ok(result)
}
