//! Experiment runner: declarative configs in, result tables and plot
//! series out.

pub mod config;
pub mod output;
pub mod plot;
pub mod runner;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use perco::ppp::Budget;
use perco::PercoError;
use thiserror::Error;

pub use config::{ConfigError, ExperimentConfig};
pub use runner::Command;

#[derive(Debug, Parser)]
#[command(name = "perco", version, about = "Continuum percolation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub action: Action,
}

#[derive(Debug, Subcommand)]
pub enum Action {
    /// Run an experiment described by a config file.
    Run {
        #[arg(value_enum)]
        command: Command,
        config: PathBuf,
        /// overrides `seed` in the config
        #[arg(long)]
        seed: Option<u64>,
        /// worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Convert result files into `series,x,y,y_lo,y_hi` tables.
    PlotData {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Print the normalized form of a config file.
    Config { config: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {msg}")]
    ConfigAt { path: String, line: usize, msg: String },
    #[error("{path}: {msg}")]
    Config { path: String, msg: String },
    #[error(transparent)]
    Core(#[from] PercoError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}: malformed result file: {msg}")]
    Malformed { path: String, msg: String },
    #[error("cannot start {0} worker threads")]
    Threads(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigAt { .. } | CliError::Config { .. } | CliError::Malformed { .. } => 2,
            CliError::Core(PercoError::Config(_)) => 2,
            CliError::Core(PercoError::Resource { .. }) => 3,
            _ => 1,
        }
    }

    /// Extra advice printed after the message.
    pub fn hint(&self) -> Option<&'static str> {
        matches!(self, CliError::Core(PercoError::Resource { .. })).then_some(
            "hint: raise the point cap with PERCO_BUDGET_POINTS, or lower lambda, the event scale or the window",
        )
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    ExperimentConfig::parse(&text).map_err(|e| {
        let path = path.display().to_string();
        match e.line {
            Some(line) => CliError::ConfigAt { path, line, msg: e.msg },
            None => CliError::Config { path, msg: e.msg },
        }
    })
}

/// Runs one experiment and writes its result files into `out`.
pub fn run_experiment(
    command: Command,
    config_path: &Path,
    seed: Option<u64>,
    threads: Option<usize>,
    out: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let mut cfg = load_config(config_path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let go = || runner::run(command, &cfg, Budget::from_env());
    let outputs = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Threads(format!("{n} ({e})")))?
            .install(go),
        None => go(),
    }
    .map_err(|e| match e {
        runner::RunError::Missing(msg) => CliError::Config {
            path: config_path.display().to_string(),
            msg: format!("{}: {msg}", command.name()),
        },
        runner::RunError::Core(e) => CliError::Core(e),
    })?;

    let name = cfg.output_name.clone().unwrap_or_else(|| command.name().to_string());
    fs::create_dir_all(out).map_err(io_err(out))?;
    let mut written = Vec::new();
    for (suffix, table) in &outputs.tables {
        let file = format!("{name}{suffix}.csv");
        let p = output::write_table(out, &file, command.name(), table).map_err(io_err(&out.join(&file)))?;
        written.push(p);
    }
    for (suffix, body) in &outputs.files {
        let p = out.join(format!("{name}{suffix}"));
        fs::write(&p, body).map_err(io_err(&p))?;
        written.push(p);
    }
    Ok(written)
}

/// Writes `<out>/<stem>_series.csv` for each result file.
pub fn emit_plot_data(files: &[PathBuf], out: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out).map_err(io_err(out))?;
    let mut written = Vec::new();
    for f in files {
        let text = fs::read_to_string(f).map_err(io_err(f))?;
        let table = plot::series_from_result(&text).map_err(|msg| CliError::Malformed {
            path: f.display().to_string(),
            msg,
        })?;
        let stem = f.file_stem().and_then(|s| s.to_str()).unwrap_or("result");
        let file = format!("{stem}_series.csv");
        let p = output::write_table(out, &file, "plot-data", &table).map_err(io_err(&out.join(&file)))?;
        written.push(p);
    }
    Ok(written)
}

pub fn execute(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    match cli.action {
        Action::Run {
            command,
            config,
            seed,
            threads,
            out,
        } => run_experiment(command, &config, seed, threads, &out),
        Action::PlotData { files, out } => emit_plot_data(&files, &out),
        Action::Config { config } => {
            print!("{}", load_config(&config)?.to_text());
            Ok(Vec::new())
        }
    }
}
