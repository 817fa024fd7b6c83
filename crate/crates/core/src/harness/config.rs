use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::{HodmdConfig, Kernel};
use crate::dmd::{ObservableKind, ObservableMap, RankSpec};
use crate::error::{Error, Result};
use crate::fom::{Equation, FomProblem};
use crate::ldmd::{ResidualConfig, Schedule, StagePlan, TaylorConfig};

/// Optional overrides of the benchmark discretization.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Intervals of a 1-D grid, or nodes per direction for the 2-D system.
    pub cells: Option<usize>,
    pub n_steps: Option<usize>,
    pub t_end: Option<f64>,
}

/// How a predefined schedule is written in a config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    /// Explicit `[snapshots, predictions]` per stage.
    Stages(Vec<[usize; 2]>),
    /// One leading stage then repeats of `rest` until the horizon.
    FirstThenRepeat { first: [usize; 2], rest: [usize; 2] },
    /// Equal segments with a leading snapshot fraction.
    Uniform { count: usize, fraction: f64 },
}

impl ScheduleSpec {
    pub fn resolve(&self, n_steps: usize) -> Result<Schedule> {
        let plan = |p: &[usize; 2]| StagePlan::new(p[0], p[1]);
        let schedule = match self {
            ScheduleSpec::Stages(s) => Schedule::new(s.iter().map(plan).collect()),
            ScheduleSpec::FirstThenRepeat { first, rest } => Schedule::first_then_repeat(plan(first), plan(rest), n_steps)?,
            ScheduleSpec::Uniform { count, fraction } => Schedule::uniform(*count, n_steps, *fraction)?,
        };
        schedule
            .validate(n_steps)
            .map_err(|e| Error::config(format!("method.schedule: {e}")))?;
        Ok(schedule)
    }
}

/// Snapshot counts of the stages after the first in an adaptive run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicySpec {
    #[default]
    SameAsFirst,
    Fixed(usize),
    Schedule(Vec<usize>),
    /// Per-stage counts taken from the remainder segmentation of the
    /// reference run; the first stage count comes from it as well.
    Remainder { varepsilon: f64, snapshot_fraction: f64 },
}

/// One experiment method with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MethodConfig {
    Dmd {
        rank: RankSpec,
        snapshots: usize,
    },
    Pldmd {
        rank: RankSpec,
        schedule: ScheduleSpec,
    },
    Aldmd {
        rank: RankSpec,
        /// First-stage snapshot steps; derived when the policy is `remainder`.
        n1: Option<usize>,
        epsilon: f64,
        window: usize,
        #[serde(default)]
        snapshot_policy: PolicySpec,
    },
    Optldmd {
        rank: RankSpec,
        varepsilon: f64,
        snapshot_fraction: f64,
        min_segment: Option<usize>,
    },
    Hodmd {
        rank: RankSpec,
        d: usize,
        snapshots: usize,
    },
    Podrbf {
        r_pod: usize,
        #[serde(default)]
        kernel: Kernel,
        /// Run whose full-order sample times are reused.
        samples: Box<MethodConfig>,
    },
}

impl MethodConfig {
    pub fn name(&self) -> &'static str {
        match self {
            MethodConfig::Dmd { .. } => "dmd",
            MethodConfig::Pldmd { .. } => "pldmd",
            MethodConfig::Aldmd { .. } => "aldmd",
            MethodConfig::Optldmd { .. } => "optldmd",
            MethodConfig::Hodmd { .. } => "hodmd",
            MethodConfig::Podrbf { .. } => "podrbf",
        }
    }

    /// The method cannot run without the reference trajectory.
    pub fn needs_reference(&self) -> bool {
        match self {
            MethodConfig::Optldmd { .. } | MethodConfig::Podrbf { .. } => true,
            MethodConfig::Aldmd { snapshot_policy: PolicySpec::Remainder { .. }, .. } => true,
            _ => false,
        }
    }

    fn validate(&self, problem: &FomProblem) -> Result<()> {
        let n = problem.n_steps;
        let field = |what: &str, e: Error| Error::config(format!("method.{what}: {e}"));
        match self {
            MethodConfig::Dmd { rank, snapshots } | MethodConfig::Hodmd { rank, snapshots, .. } => {
                rank.validate().map_err(|e| field("rank", e))?;
                if *snapshots < 2 || *snapshots > n {
                    return Err(Error::config(format!("method.snapshots must lie in 2..={n}, got {snapshots}")));
                }
                if let MethodConfig::Hodmd { d, rank, .. } = self {
                    HodmdConfig { d: *d, rank: *rank }
                        .validate(snapshots + 1)
                        .map_err(|e| field("d", e))?;
                }
            }
            MethodConfig::Pldmd { rank, schedule } => {
                rank.validate().map_err(|e| field("rank", e))?;
                schedule.resolve(n)?;
            }
            MethodConfig::Aldmd { rank, n1, epsilon, window, snapshot_policy } => {
                rank.validate().map_err(|e| field("rank", e))?;
                ResidualConfig { epsilon: *epsilon, window: *window }
                    .validate()
                    .map_err(|e| field("epsilon/window", e))?;
                match (snapshot_policy, n1) {
                    (PolicySpec::Remainder { varepsilon, snapshot_fraction }, _) => {
                        TaylorConfig::new(*varepsilon, *snapshot_fraction).map_err(|e| field("snapshot_policy", e))?;
                        if problem.equation != Equation::Burgers {
                            return Err(Error::config("method.snapshot_policy: remainder segmentation is defined for burgers only"));
                        }
                    }
                    (_, None) => return Err(Error::config("method.n1 is required")),
                    (policy, Some(n1)) => {
                        if *n1 < 2 || *n1 > n {
                            return Err(Error::config(format!("method.n1 must lie in 2..={n}, got {n1}")));
                        }
                        let ok = match policy {
                            PolicySpec::Fixed(k) => *k >= 2,
                            PolicySpec::Schedule(v) => !v.is_empty() && v.iter().all(|&k| k >= 2),
                            _ => true,
                        };
                        if !ok {
                            return Err(Error::config("method.snapshot_policy: every stage needs at least 2 snapshot steps"));
                        }
                    }
                }
            }
            MethodConfig::Optldmd { rank, varepsilon, snapshot_fraction, min_segment } => {
                rank.validate().map_err(|e| field("rank", e))?;
                self.taylor(*varepsilon, *snapshot_fraction, *min_segment)?;
                if problem.equation != Equation::Burgers {
                    return Err(Error::config("method.kind: optldmd is defined for burgers only"));
                }
            }
            MethodConfig::Podrbf { r_pod, samples, .. } => {
                if *r_pod == 0 {
                    return Err(Error::config("method.r_pod must be positive"));
                }
                if let MethodConfig::Podrbf { .. } = samples.as_ref() {
                    return Err(Error::config("method.samples cannot itself be podrbf"));
                }
                samples.validate(problem)?;
            }
        }
        Ok(())
    }

    pub(crate) fn taylor(&self, varepsilon: f64, snapshot_fraction: f64, min_segment: Option<usize>) -> Result<TaylorConfig> {
        let mut cfg = TaylorConfig::new(varepsilon, snapshot_fraction)
            .map_err(|e| Error::config(format!("method.varepsilon/snapshot_fraction: {e}")))?;
        if let Some(m) = min_segment {
            cfg.min_segment = m;
            cfg.validate().map_err(|e| Error::config(format!("method.min_segment: {e}")))?;
        }
        Ok(cfg)
    }
}

/// Reference trajectory handling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceMode {
    /// Integrate the full-order model over the whole horizon.
    #[default]
    Generate,
    /// No reference: no error files are written.
    Skip,
}

/// Solution output settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionOutput {
    /// Every `stride`-th step is written, plus the last one.
    pub stride: usize,
}

impl Default for SolutionOutput {
    fn default() -> Self {
        SolutionOutput { stride: 10 }
    }
}

fn default_solution() -> Option<SolutionOutput> {
    Some(SolutionOutput::default())
}

/// A single experiment, read from one JSON file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub equation: String,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub observable: Option<ObservableKind>,
    pub method: MethodConfig,
    #[serde(default)]
    pub reference: ReferenceMode,
    /// `null` disables `solution.csv`.
    #[serde(default = "default_solution")]
    pub solution: Option<SolutionOutput>,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("invalid config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The full-order problem with any grid overrides applied.
    pub fn problem(&self) -> Result<FomProblem> {
        let equation = Equation::parse(&self.equation)?;
        let base = FomProblem::benchmark(equation);
        let n_steps = self.grid.n_steps.unwrap_or(base.n_steps);
        let mut problem = match (equation, self.grid.cells) {
            (_, None) => base,
            (Equation::Burgers, Some(c)) => FomProblem::burgers(c, n_steps),
            (Equation::AllenCahn, Some(c)) => FomProblem::allen_cahn(c, n_steps),
            (Equation::Nlse, Some(c)) => FomProblem::nlse(c, n_steps),
            (Equation::MaxwellTm, Some(c)) => FomProblem::maxwell_tm(c, n_steps),
        };
        problem.n_steps = n_steps;
        if let Some(t) = self.grid.t_end {
            problem.t_end = t;
        }
        problem.validate().map_err(|e| Error::config(format!("grid: {e}")))?;
        Ok(problem)
    }

    pub fn observable_map(&self, problem: &FomProblem) -> ObservableMap {
        ObservableMap::new(self.observable.unwrap_or(ObservableKind::Identity), problem.state_dim())
    }

    /// Checks everything that can be checked without computing.
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::config("name must not be empty"));
        }
        let problem = self.problem()?;
        if let Some(s) = self.solution {
            if s.stride == 0 {
                return Err(Error::config("solution.stride must be at least 1"));
            }
        }
        if self.reference == ReferenceMode::Skip && self.method.needs_reference() {
            return Err(Error::config(format!(
                "reference: method {} needs the reference trajectory",
                self.method.name()
            )));
        }
        if matches!(self.method, MethodConfig::Optldmd { .. })
            && self.observable.is_some_and(|o| o != ObservableKind::Identity)
        {
            return Err(Error::config("observable: optldmd works on the identity observable only"));
        }
        self.method.validate(&problem)
    }
}

/// A config shipped with the crate.
pub struct BundledConfig {
    pub name: &'static str,
    pub json: &'static str,
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(BundledConfig { name: $name, json: include_str!(concat!("../../configs/", $name, ".json")) }),*]
    };
}

/// Every bundled config, sorted by name.
pub const BUNDLED_CONFIGS: &[BundledConfig] = bundled![
    "allen_cahn_aldmd_g50",
    "allen_cahn_dmd_g50",
    "allen_cahn_podrbf_g50",
    "burgers_aldmd_eps1e-2",
    "burgers_aldmd_eps1e-4",
    "burgers_aldmd_g40",
    "burgers_aldmd_g50",
    "burgers_aldmd_g60",
    "burgers_aldmd_matched",
    "burgers_dmd_g40",
    "burgers_dmd_g50",
    "burgers_dmd_g60",
    "burgers_optldmd_eps05",
    "burgers_pldmd_uniform16",
    "burgers_podrbf_g50",
    "maxwell_tm_dmd_g48",
    "maxwell_tm_hodmd_d100",
    "maxwell_tm_hodmd_d150",
    "maxwell_tm_hodmd_d80",
    "maxwell_tm_pldmd_g48",
    "maxwell_tm_podrbf_g48",
    "nlse_aldmd_g50",
    "nlse_dmd_g50",
    "nlse_podrbf_g50",
];

/// Looks up a bundled config by name.
pub fn bundled_config(name: &str) -> Option<Result<ExperimentConfig>> {
    BUNDLED_CONFIGS
        .iter()
        .find(|c| c.name == name)
        .map(|c| ExperimentConfig::from_json(c.json))
}
