//! Runs a bundled experiment config through the harness and lists the CSV
//! files it writes. Pass a bundled config name as the first argument.
//!
//! Run with `cargo run --release --example run_config -- burgers_aldmd_g50`.

use ldmd::harness::{bundled_config, run_experiment, RunOptions, BUNDLED_CONFIGS};

fn main() -> ldmd::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "burgers_aldmd_g50".into());
    let Some(config) = bundled_config(&name) else {
        eprintln!("unknown config {name}; available:");
        for c in BUNDLED_CONFIGS {
            eprintln!("  {}", c.name);
        }
        std::process::exit(2);
    };
    let config = config?;
    let out = std::env::temp_dir().join("ldmd-example").join(&config.name);
    let outcome = run_experiment(&config, &out, RunOptions::default())?;
    println!("{:?}", outcome.summary);
    let mut files: Vec<_> = std::fs::read_dir(&out)?.filter_map(|e| e.ok()).map(|e| e.file_name()).collect();
    files.sort();
    for f in files {
        println!("  {}", out.join(f).display());
    }
    Ok(())
}
