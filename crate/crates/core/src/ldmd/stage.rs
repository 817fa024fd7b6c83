use crate::dmd::{fit_dmd_states, DmdModel, ObservableMap, RankSpec};
use crate::error::{Error, Result};
use crate::fom::{FomProblem, State};

/// Runs the full-order model for a stage's snapshot phase, tagging failures
/// with the stage index.
pub(super) fn snapshot_phase(
    problem: &FomProblem,
    start: &[crate::numerics::C64],
    start_step: usize,
    steps: usize,
    stage: usize,
) -> Result<Vec<State>> {
    problem
        .integrate(start, problem.time(start_step), steps)
        .map_err(|e| match e {
            Error::Integration { step, last_good, .. } => Error::Integration {
                step: start_step + step,
                last_good: start_step + last_good,
                stage: Some(stage),
            },
            other => other,
        })
}

pub(super) fn fit_stage(
    problem: &FomProblem,
    snapshots: &[State],
    start_step: usize,
    spec: RankSpec,
    map: ObservableMap,
) -> Result<DmdModel> {
    fit_dmd_states(snapshots, problem.dt(), problem.time(start_step), spec, map)
}

/// Appends model states for local indices `from..=to` to the trajectory.
pub(super) fn extend_with_model(
    trajectory: &mut Vec<State>,
    problem: &FomProblem,
    model: &DmdModel,
    from: usize,
    to: usize,
) {
    trajectory.extend((from..=to).map(|k| problem.project_state(model.predict_state(k))));
}
