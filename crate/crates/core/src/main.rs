use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ldmd::harness::{
    bundled_config, load_config_dir, output_dir_for, run_experiment, sweep, ExperimentConfig, RunOptions,
    BUNDLED_CONFIGS,
};
use ldmd::{Error, Result};

#[derive(Parser)]
#[command(name = "ldmd", version, about = "Localized DMD experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment; `--config` is a JSON file or a bundled config name.
    Run {
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write 0 for the wall time so that every file is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Run every JSON config of a directory and write a combined summary.
    Sweep {
        #[arg(long)]
        config_dir: PathBuf,
        #[arg(long, default_value = "ldmd-out")]
        out: PathBuf,
        #[arg(long)]
        no_timing: bool,
    },
    /// Print the names of the bundled configs.
    ListConfigs,
    /// Check a config without running it.
    Validate {
        #[arg(long)]
        config: String,
    },
}

fn load(config: &str) -> Result<ExperimentConfig> {
    let path = Path::new(config);
    if path.exists() {
        return ExperimentConfig::from_file(path);
    }
    bundled_config(config).unwrap_or_else(|| Err(Error::Config(format!("no such config file or bundled config: {config}"))))
}

fn options(no_timing: bool) -> RunOptions {
    RunOptions { record_timing: !no_timing }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, no_timing } => {
            let cfg = load(&config)?;
            let dir = out.unwrap_or_else(|| output_dir_for(&cfg));
            let outcome = run_experiment(&cfg, &dir, options(no_timing))?;
            let s = &outcome.summary;
            println!(
                "{}: gamma {:.4}, stages {}, mre {:e}, wall {:.3}s -> {}",
                cfg.name,
                s.gamma,
                s.stages,
                s.mre,
                s.wall_time_s,
                dir.display()
            );
        }
        Command::Sweep { config_dir, out, no_timing } => {
            let configs = load_config_dir(&config_dir)?;
            let rows = sweep(&configs, &out, options(no_timing))?;
            for (cfg, row) in configs.iter().zip(&rows) {
                println!("{:<28} {:<18} gamma {:.4}  mre {:e}", cfg.name, row.status, row.gamma, row.mre);
            }
        }
        Command::ListConfigs => {
            for c in BUNDLED_CONFIGS {
                println!("{}", c.name);
            }
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            cfg.validate()?;
            println!("{}: ok", cfg.name);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
