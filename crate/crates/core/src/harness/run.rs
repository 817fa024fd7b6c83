use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{ExperimentConfig, MethodConfig, PolicySpec, ReferenceMode};
use super::metrics::{error_report, ErrorReport, QuantityErrors};
use crate::baselines::{fom_sample_steps, run_hodmd, run_pod_rbf, HodmdConfig};
use crate::dmd::{ObservableMap, RankSpec};
use crate::error::{Error, Result};
use crate::fom::{FomProblem, State};
use crate::ldmd::{
    remainder_segmentation, run_aldmd, run_dmd, run_optldmd, run_pldmd, LdmdResult, ResidualConfig, SnapshotPolicy,
};

/// Switches that do not change the computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Write the measured wall time; when off `wall_time_s` is 0 and every
    /// emitted file is reproducible byte for byte.
    pub record_timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { record_timing: true }
    }
}

/// One row of `summary.csv`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub method: String,
    pub equation: String,
    pub gamma: f64,
    pub stages: usize,
    pub mre: f64,
    pub wall_time_s: f64,
    pub status: String,
}

impl SummaryRow {
    fn failed(config: &ExperimentConfig, err: &Error) -> Self {
        let status = if err.exit_code() == 2 { "config_error" } else { "numerical_failure" };
        SummaryRow {
            method: config.method.name().into(),
            equation: config.equation.clone(),
            gamma: f64::NAN,
            stages: 0,
            mre: f64::NAN,
            wall_time_s: 0.0,
            status: status.into(),
        }
    }

    fn record(&self) -> [String; 7] {
        [
            self.method.clone(),
            self.equation.clone(),
            self.gamma.to_string(),
            self.stages.to_string(),
            sci(self.mre),
            format!("{:.6}", self.wall_time_s),
            self.status.clone(),
        ]
    }
}

/// Everything a finished run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub problem: FomProblem,
    pub result: LdmdResult,
    /// `None` when the reference was skipped.
    pub report: Option<ErrorReport>,
    pub summary: SummaryRow,
}

fn sci(x: f64) -> String {
    format!("{x:e}")
}

fn rank_of(method: &MethodConfig) -> Option<RankSpec> {
    match method {
        MethodConfig::Dmd { rank, .. }
        | MethodConfig::Pldmd { rank, .. }
        | MethodConfig::Aldmd { rank, .. }
        | MethodConfig::Optldmd { rank, .. }
        | MethodConfig::Hodmd { rank, .. } => Some(*rank),
        MethodConfig::Podrbf { .. } => None,
    }
}

fn need_reference(reference: Option<&[State]>) -> Result<&[State]> {
    reference.ok_or_else(|| Error::config("reference: this method needs the reference trajectory"))
}

fn execute_method(
    method: &MethodConfig,
    problem: &FomProblem,
    map: ObservableMap,
    reference: Option<&[State]>,
) -> Result<LdmdResult> {
    let n = problem.n_steps;
    let rank = rank_of(method);
    match method {
        MethodConfig::Dmd { snapshots, .. } => run_dmd(problem, *snapshots, rank.unwrap(), map),
        MethodConfig::Pldmd { schedule, .. } => run_pldmd(problem, &schedule.resolve(n)?, rank.unwrap(), map),
        MethodConfig::Aldmd { n1, epsilon, window, snapshot_policy, .. } => {
            let res = ResidualConfig { epsilon: *epsilon, window: *window };
            let (first, policy) = match snapshot_policy {
                PolicySpec::SameAsFirst => (n1.unwrap_or(0), SnapshotPolicy::SameAsFirst),
                PolicySpec::Fixed(k) => (n1.unwrap_or(0), SnapshotPolicy::Fixed(*k)),
                PolicySpec::Schedule(v) => (n1.unwrap_or(0), SnapshotPolicy::Schedule(v.clone())),
                PolicySpec::Remainder { varepsilon, snapshot_fraction } => {
                    let taylor = method.taylor(*varepsilon, *snapshot_fraction, None)?;
                    let seg = remainder_segmentation(need_reference(reference)?, problem.grid.spacing(), &taylor)?;
                    let counts: Vec<usize> =
                        seg.schedule(*snapshot_fraction).stages.iter().map(|s| s.snapshots).collect();
                    (counts[0], SnapshotPolicy::Schedule(counts))
                }
            };
            run_aldmd(problem, first, &policy, res, rank.unwrap(), map)
        }
        MethodConfig::Optldmd { varepsilon, snapshot_fraction, min_segment, .. } => {
            let taylor = method.taylor(*varepsilon, *snapshot_fraction, *min_segment)?;
            run_optldmd(need_reference(reference)?, problem, &taylor, rank.unwrap())
        }
        MethodConfig::Hodmd { d, snapshots, .. } => {
            run_hodmd(problem, *snapshots, &HodmdConfig { d: *d, rank: rank.unwrap() }, map)
        }
        MethodConfig::Podrbf { r_pod, kernel, samples } => {
            let sampled = execute_method(samples, problem, map, reference)?;
            let steps = fom_sample_steps(&sampled);
            run_pod_rbf(problem, need_reference(reference)?, &steps, *r_pod, *kernel)
        }
    }
}

/// Runs an experiment without writing anything.
pub fn execute(config: &ExperimentConfig) -> Result<RunOutcome> {
    config.validate()?;
    let problem = config.problem()?;
    let map = config.observable_map(&problem);
    let reference = match config.reference {
        ReferenceMode::Generate => Some(problem.reference_trajectory()?),
        ReferenceMode::Skip => None,
    };
    log::info!("{}: running {} on {}", config.name, config.method.name(), config.equation);
    let mut result = execute_method(&config.method, &problem, map, reference.as_deref())?;
    let report = match &reference {
        Some(r) => {
            result.attach_reference(&problem, r)?;
            Some(error_report(&problem, &result.trajectory, r)?)
        }
        None => None,
    };
    let summary = SummaryRow {
        method: config.method.name().into(),
        equation: problem.equation.name().into(),
        gamma: result.gamma,
        stages: result.stage_count(),
        mre: report.as_ref().map_or(f64::NAN, |r| r.headline().mre),
        wall_time_s: result.wall_time.as_secs_f64(),
        status: "ok".into(),
    };
    Ok(RunOutcome { problem, result, report, summary })
}

fn create(dir: &Path, file: &str) -> Result<csv::Writer<fs::File>> {
    Ok(csv::Writer::from_path(dir.join(file))?)
}

fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["method", "equation", "gamma", "stages", "mre", "wall_time_s", "status"])?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

fn write_errors(dir: &Path, file: &str, problem: &FomProblem, q: &QuantityErrors) -> Result<()> {
    let flagged = q.per_step.iter().any(|e| e.zero_reference);
    let mut w = create(dir, file)?;
    if flagged {
        w.write_record(["t", "re", "flag"])?;
    } else {
        w.write_record(["t", "re"])?;
    }
    for (i, e) in q.per_step.iter().enumerate() {
        let t = problem.time(i + 1).to_string();
        if flagged {
            w.write_record([t, sci(e.value), u8::from(e.zero_reference).to_string()])?;
        } else {
            w.write_record([t, sci(e.value)])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_solution(dir: &Path, problem: &FomProblem, trajectory: &[State], stride: usize) -> Result<()> {
    let mut w = create(dir, "solution.csv")?;
    let dim = trajectory[0].len();
    let mut header = vec!["t".to_string()];
    for j in 0..dim {
        header.push(format!("u{j}_re"));
        header.push(format!("u{j}_im"));
    }
    w.write_record(&header)?;
    let last = trajectory.len() - 1;
    for (k, u) in trajectory.iter().enumerate() {
        if k % stride != 0 && k != last {
            continue;
        }
        let mut row = Vec::with_capacity(1 + 2 * dim);
        row.push(problem.time(k).to_string());
        for z in u {
            row.push(sci(z.re));
            row.push(sci(z.im));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_stages(dir: &Path, result: &LdmdResult) -> Result<()> {
    let mut w = create(dir, "stages.csv")?;
    w.write_record(["i", "t_start", "t_end", "n_i", "c_i", "correction_invoked"])?;
    for s in &result.stages {
        w.write_record([
            s.index.to_string(),
            s.t_start.to_string(),
            s.t_end.to_string(),
            s.snapshot_steps.to_string(),
            s.window_count.to_string(),
            s.correction_invoked.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_residuals(dir: &Path, problem: &FomProblem, result: &LdmdResult) -> Result<()> {
    let mut w = create(dir, "residuals.csv")?;
    w.write_record(["t", "delta"])?;
    for s in result.residual_trace() {
        w.write_record([problem.time(s.step).to_string(), sci(s.delta)])?;
    }
    w.flush()?;
    Ok(())
}

/// Default output directory of a config.
pub fn output_dir_for(config: &ExperimentConfig) -> PathBuf {
    config
        .output_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("ldmd-out").join(&config.name))
}

/// Runs an experiment and writes its CSV files into `out_dir`.
///
/// Files: `summary.csv` and `stages.csv` always; `errors.csv` (headline
/// quantity) plus `errors_<quantity>.csv` for every further quantity and
/// `quantities.csv` unless the reference is skipped; `residuals.csv` when
/// the method recorded a residual or remainder trace; `solution.csv` unless
/// disabled.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path, opts: RunOptions) -> Result<RunOutcome> {
    let mut outcome = execute(config)?;
    if !opts.record_timing {
        outcome.summary.wall_time_s = 0.0;
    }
    fs::create_dir_all(out_dir)?;
    let (problem, result) = (&outcome.problem, &outcome.result);
    write_summary(&out_dir.join("summary.csv"), std::slice::from_ref(&outcome.summary))?;
    write_stages(out_dir, result)?;
    if result.residual_trace().next().is_some() {
        write_residuals(out_dir, problem, result)?;
    }
    if let Some(report) = &outcome.report {
        write_errors(out_dir, "errors.csv", problem, report.headline())?;
        for q in &report.quantities[1..] {
            write_errors(out_dir, &format!("errors_{}.csv", q.name), problem, q)?;
        }
        let mut w = create(out_dir, "quantities.csv")?;
        w.write_record(["quantity", "mre"])?;
        for q in &report.quantities {
            w.write_record([q.name.to_string(), sci(q.mre)])?;
        }
        w.flush()?;
    }
    if let Some(s) = config.solution {
        write_solution(out_dir, problem, &result.trajectory, s.stride)?;
    }
    log::info!(
        "{}: gamma {:.4}, {} stages, mre {:e}",
        config.name,
        outcome.summary.gamma,
        outcome.summary.stages,
        outcome.summary.mre
    );
    Ok(outcome)
}

/// Runs every config into `out_dir/<name>` and writes the combined
/// `out_dir/summary.csv`, one row per config in the given order. A failing
/// config is recorded with its status and the sweep carries on.
pub fn sweep(configs: &[ExperimentConfig], out_dir: &Path, opts: RunOptions) -> Result<Vec<SummaryRow>> {
    if configs.is_empty() {
        return Err(Error::config("sweep needs at least one config"));
    }
    fs::create_dir_all(out_dir)?;
    let rows: Vec<SummaryRow> = configs
        .iter()
        .map(|c| match run_experiment(c, &out_dir.join(&c.name), opts) {
            Ok(o) => o.summary,
            Err(e) => {
                log::error!("{}: {e}", c.name);
                SummaryRow::failed(c, &e)
            }
        })
        .collect();
    write_summary(&out_dir.join("summary.csv"), &rows)?;
    Ok(rows)
}

/// Reads every `*.json` file of a directory, sorted by file name.
pub fn load_config_dir(dir: &Path) -> Result<Vec<ExperimentConfig>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::config(format!("cannot read {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| ExperimentConfig::from_file(p)).collect()
}
