use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use shiftdim_cli::config::Config;
use shiftdim_cli::{experiments, run};

/// Numerical toolkit for dimension estimation on bilateral sequence spaces.
#[derive(Parser)]
#[command(name = "shiftdim", version, about)]
struct Cli {
    /// Experiment configuration file (flat key = value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the config output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format; only csv is supported.
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy estimates over the configured grid.
    Energy,
    /// Correlation sums of one orbit over the configured grid.
    Corrsum,
    /// Covering-sum upper bounds over the configured grid.
    Cover,
    /// Return times and recurrence-rate proxies.
    Recur,
    /// Run the experiment named in the configuration.
    Experiment,
}

fn load_config(cli: &Cli) -> Result<Config> {
    let Some(path) = &cli.config else {
        bail!("--config PATH is required");
    };
    let mut config = Config::from_file(path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.out = out.clone();
    }
    Ok(config)
}

/// Returns the process verdict: true means exit 0, false means exit 2.
fn dispatch(cli: &Cli) -> Result<bool> {
    if cli.format != "csv" {
        bail!("unsupported format {:?}; only csv is available", cli.format);
    }
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let config = load_config(cli)?;
    match cli.command {
        Command::Experiment => {
            let outcome = experiments::run(&config)?;
            let path = outcome.output.write(&config.out, outcome.name)?;
            println!(
                "{}: {} ({} rows) -> {}",
                outcome.name,
                if outcome.pass { "PASS" } else { "FAIL" },
                outcome.output.rows.len(),
                path.display()
            );
            Ok(outcome.pass)
        }
        Command::Energy => write_simple(&config, "energy", run::run_energy(&config)?),
        Command::Corrsum => write_simple(&config, "corrsum", run::run_corrsum(&config)?),
        Command::Cover => write_simple(&config, "cover", run::run_cover(&config)?),
        Command::Recur => {
            let outcome = experiments::run_recurrence(&config)?;
            let path = outcome.output.write(&config.out, "recur")?;
            println!(
                "recur: {} rows -> {}",
                outcome.output.rows.len(),
                path.display()
            );
            Ok(true)
        }
    }
}

fn write_simple(config: &Config, name: &str, output: shiftdim_cli::OutputSet) -> Result<bool> {
    let path = output.write(&config.out, name)?;
    println!("{name}: {} rows -> {}", output.rows.len(), path.display());
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
