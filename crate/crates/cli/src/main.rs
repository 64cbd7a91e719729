mod commands;
mod config;
mod output;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, Fault, JobConfig, PartialConfig};
use output::Writer;

/// Semiclassical heat-trace expansion of the perturbed harmonic oscillator.
///
/// Exit codes: 0 success, 1 configuration error, 2 check failure,
/// 3 resource limit.
#[derive(Parser, Debug)]
#[command(name = "semiheat", version)]
struct Cli {
    /// What to run; may instead come from the config file.
    #[arg(value_enum)]
    command: Option<Command>,

    /// Same as the positional command.
    #[arg(long = "command", value_enum, conflicts_with = "command")]
    command_flag: Option<Command>,

    /// JSON job file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Builtin fixture (zero, linear, quadratic, quartic, odd-cubic,
    /// radial-bump), a Polynomial JSON file, or inline JSON.
    #[arg(long)]
    potential: Option<String>,

    /// Dimension n.
    #[arg(long)]
    dim: Option<usize>,

    /// Expansion order K (Υ_0..Υ_K).
    #[arg(long)]
    order: Option<u32>,

    /// Largest m for the symbol chain.
    #[arg(long)]
    m_max: Option<u32>,

    /// Fixed oracle basis size per axis.
    #[arg(long)]
    basis: Option<usize>,

    /// ħ values, comma separated.
    #[arg(long, value_delimiter = ',')]
    hbar: Option<Vec<f64>>,

    /// Rescaled time s, with t = 2 atanh(ħs)/ħ.
    #[arg(long)]
    s: Option<f64>,

    /// s values for the invariants report.
    #[arg(long, value_delimiter = ',')]
    s_grid: Option<Vec<f64>>,

    /// Evaluation points for the oracle sweep.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,

    /// Sphere radii for sphere functionals and detectors.
    #[arg(long, value_delimiter = ',')]
    r_grid: Option<Vec<f64>>,

    /// Tolerance override (detectors, oracle basis truncation).
    #[arg(long)]
    tol: Option<f64>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<Fault>,
}

impl Cli {
    fn partial(&self) -> PartialConfig {
        PartialConfig {
            command: self.command.or(self.command_flag),
            potential: self.potential.clone(),
            dim: self.dim,
            order: self.order,
            m_max: self.m_max,
            basis: self.basis,
            hbar: self.hbar.clone(),
            s: self.s,
            s_grid: self.s_grid.clone(),
            x: self.x.clone(),
            r_grid: self.r_grid.clone(),
            tol: self.tol,
            out: self.out.clone(),
        }
    }
}

pub enum Failure {
    Config(anyhow::Error),
    Check(String),
    Resource(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

impl From<semiheat::Error> for Failure {
    fn from(e: semiheat::Error) -> Self {
        use semiheat::Error::*;
        match e {
            Resource(m) => Failure::Resource(m),
            Internal(_) | Grading(_) => Failure::Check(e.to_string()),
            other => Failure::Config(other.into()),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(path) => PartialConfig::from_file(path)?,
        None => PartialConfig::default(),
    };
    let cfg = JobConfig::resolve(file.merge(cli.partial()), cli.inject_fault)?;
    let mut w = Writer::new(&cfg)?;
    match cfg.command {
        Command::Expand => commands::run_expand(&cfg, &mut w),
        Command::Symbols => commands::run_symbols(&cfg, &mut w),
        Command::Oracle => commands::run_oracle(&cfg, &mut w),
        Command::Invariants => commands::run_invariants(&cfg, &mut w),
        Command::Detect => commands::run_detect(&cfg, &mut w),
        Command::Validate => validate::run_validate(&cfg, &mut w),
    }?;
    eprintln!("wrote {} files to {}", w.written.len(), w.dir().display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("resource limit: {m}");
            ExitCode::from(3)
        }
    }
}
