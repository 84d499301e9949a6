//! `holoris`: runs the correlation, spectrum and coupling experiments and
//! writes CSV tables with matching gnuplot scripts.

mod config;
mod error;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::{CliError, Result};
use crate::experiments::Experiment;
use crate::output::Output;

#[derive(Parser, Debug)]
#[command(
    name = "holoris",
    version,
    about = "Spatial correlation and mutual-coupling experiments for dense planar arrays"
)]
struct Cli {
    /// JSON experiment config; built-in defaults when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output directory; overrides `output.directory`.
    #[arg(long, global = true, env = "HOLORIS_OUT", value_name = "DIR")]
    out: Option<PathBuf>,

    /// Output formats; overrides `output.formats`.
    #[arg(long, global = true, value_enum, value_delimiter = ',')]
    format: Vec<FormatArg>,

    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Gnuplot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Correlation surface versus element offset.
    Correlation,
    /// Eigenvalues of the isotropic correlation matrix.
    Eigen,
    /// Wavenumber power spectrum.
    Spectrum,
    /// Array gain versus azimuth for each beamforming scheme.
    Gain,
    /// Eigenvalues of the coupling-aware correlation matrix.
    McEigen,
    /// Interference index per spacing and port impedance.
    Icsi,
    /// Every experiment above.
    ReproduceAll,
    /// Prints the effective configuration as JSON.
    ShowConfig,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => config::load(path)?,
        None => config::defaults()?,
    };
    if !cli.format.is_empty() {
        cfg.output.formats = cli
            .format
            .iter()
            .map(|f| match f {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Gnuplot => OutputFormat::Gnuplot,
            })
            .collect();
        cfg.validate().map_err(|e| CliError::ConfigValue {
            location: "--format".into(),
            field: e.field,
            message: e.message,
        })?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli)?;
    if let Command::ShowConfig = cli.command {
        let text = serde_json::to_string_pretty(&cfg).expect("config serializes");
        println!("{text}");
        return Ok(());
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::ConfigValue {
                location: "--jobs".into(),
                field: "jobs".into(),
                message: "must be at least 1".into(),
            });
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            log::warn!("thread pool already initialized: {e}");
        }
    }
    let dir = cli
        .out
        .clone()
        .or_else(|| cfg.output.directory.clone())
        .unwrap_or_else(|| PathBuf::from("results"));
    let out = Output::new(dir, cfg.wants(OutputFormat::Gnuplot))?;

    let selected: Vec<Experiment> = match cli.command {
        Command::Correlation => vec![Experiment::Correlation],
        Command::Eigen => vec![Experiment::Eigen],
        Command::Spectrum => vec![Experiment::Spectrum],
        Command::Gain => vec![Experiment::Gain],
        Command::McEigen => vec![Experiment::McEigen],
        Command::Icsi => vec![Experiment::Icsi],
        Command::ReproduceAll => Experiment::ALL.to_vec(),
        Command::ShowConfig => unreachable!(),
    };
    let results: Vec<Result<Vec<PathBuf>>> =
        selected.par_iter().map(|e| e.run(&cfg, &out)).collect();
    for result in results {
        for path in result? {
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
