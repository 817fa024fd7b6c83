//! Experiment configuration, execution and CSV output.

mod config;
mod metrics;
mod run;

pub use config::{
    bundled_config, BundledConfig, ExperimentConfig, GridConfig, MethodConfig, PolicySpec, ReferenceMode,
    ScheduleSpec, SolutionOutput, BUNDLED_CONFIGS,
};
pub use metrics::{error_report, mean, relative_error, ErrorReport, QuantityErrors, RelativeError};
pub use run::{execute, load_config_dir, output_dir_for, run_experiment, sweep, RunOptions, RunOutcome, SummaryRow};
