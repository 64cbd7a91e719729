use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use semiheat::fixtures::{fixture, Fixture, FIXTURE_NAMES};
use semiheat::oracle::DEFAULT_HBARS;
use semiheat::Polynomial;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Expand,
    Symbols,
    Oracle,
    Invariants,
    Detect,
    Validate,
}

/// Fault hooks for exercising the validation driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Doubles `c_μ` for `|μ| = 2` in the `ρ_m` check.
    CTable,
}

/// A job file: every field optional, unknown fields rejected.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<Command>,
    pub potential: Option<String>,
    pub dim: Option<usize>,
    pub order: Option<u32>,
    pub m_max: Option<u32>,
    pub basis: Option<usize>,
    pub hbar: Option<Vec<f64>>,
    pub s: Option<f64>,
    pub s_grid: Option<Vec<f64>>,
    pub x: Option<Vec<f64>>,
    pub r_grid: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `over` win.
    pub fn merge(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            command: over.command.or(self.command),
            potential: over.potential.or(self.potential),
            dim: over.dim.or(self.dim),
            order: over.order.or(self.order),
            m_max: over.m_max.or(self.m_max),
            basis: over.basis.or(self.basis),
            hbar: over.hbar.or(self.hbar),
            s: over.s.or(self.s),
            s_grid: over.s_grid.or(self.s_grid),
            x: over.x.or(self.x),
            r_grid: over.r_grid.or(self.r_grid),
            tol: over.tol.or(self.tol),
            out: over.out.or(self.out),
        }
    }
}

/// The fully resolved job, echoed into every manifest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JobConfig {
    pub command: Command,
    pub potential: String,
    pub dim: usize,
    pub order: u32,
    pub m_max: u32,
    pub basis: Option<usize>,
    pub hbar: Vec<f64>,
    pub s: f64,
    pub s_grid: Vec<f64>,
    pub x: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub tol: f64,
    pub out: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
}

fn default_tol(cmd: Command, potential: &str) -> f64 {
    match cmd {
        Command::Oracle => 1e-12,
        Command::Detect if potential == "radial-bump" => 1e-6,
        _ => 1e-10,
    }
}

fn positive(name: &str, values: &[f64]) -> anyhow::Result<()> {
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        bail!("{name} entries must be positive, got {v}");
    }
    Ok(())
}

impl JobConfig {
    pub fn resolve(p: PartialConfig, fault: Option<Fault>) -> anyhow::Result<Self> {
        let Some(command) = p.command else {
            bail!("no command given (positional argument or \"command\" in the config file)");
        };
        let potential = p.potential.unwrap_or_else(|| "quadratic".into());
        let tol = p.tol.unwrap_or_else(|| default_tol(command, &potential));
        let cfg = JobConfig {
            command,
            dim: p.dim.unwrap_or(1),
            order: p.order.unwrap_or(1),
            m_max: p.m_max.unwrap_or(6),
            basis: p.basis,
            hbar: p.hbar.unwrap_or_else(|| DEFAULT_HBARS.to_vec()),
            s: p.s.unwrap_or(0.5),
            s_grid: p.s_grid.unwrap_or_else(|| vec![0.5, 1.0, 2.0]),
            x: p.x.unwrap_or_else(|| vec![0.0, 0.5, 1.0]),
            r_grid: p.r_grid.unwrap_or_else(|| vec![0.5, 1.0, 1.5, 2.0]),
            tol,
            out: p.out.unwrap_or_else(|| PathBuf::from("out")),
            potential,
            fault,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> anyhow::Result<()> {
        if !(1..=3).contains(&self.dim) {
            bail!("dim must be 1, 2 or 3, got {}", self.dim);
        }
        if self.m_max == 0 {
            bail!("m_max must be at least 1");
        }
        positive("hbar", &self.hbar)?;
        positive("s", &[self.s])?;
        positive("s_grid", &self.s_grid)?;
        positive("r_grid", &self.r_grid)?;
        positive("tol", &[self.tol])?;
        if let Some(x) = self.x.iter().find(|x| !x.is_finite()) {
            bail!("x entries must be finite, got {x}");
        }
        if self.x.is_empty() {
            bail!("x must not be empty");
        }
        Ok(())
    }

    /// The potential: a builtin fixture name, an inline Polynomial JSON
    /// object, or a path to one.
    pub fn load_potential(&self) -> anyhow::Result<Fixture> {
        let spec = self.potential.trim();
        if FIXTURE_NAMES.contains(&spec) {
            return Ok(fixture(spec, self.dim)?);
        }
        let text = if spec.starts_with('{') {
            spec.to_string()
        } else {
            std::fs::read_to_string(spec).with_context(|| {
                format!(
                    "potential {spec:?} is neither a builtin ({}) nor a readable file",
                    FIXTURE_NAMES.join(", ")
                )
            })?
        };
        let p: Polynomial = serde_json::from_str(&text).context("parsing potential JSON")?;
        if p.dim() != self.dim {
            bail!("potential has dim {}, config has dim {}", p.dim(), self.dim);
        }
        Ok(Fixture::Polynomial(p))
    }

    pub fn load_polynomial(&self) -> anyhow::Result<Polynomial> {
        match self.load_potential()? {
            Fixture::Polynomial(p) => Ok(p),
            Fixture::Numeric(_) => {
                bail!(
                    "{:?} is a numeric fixture; this command needs a polynomial",
                    self.potential
                )
            }
        }
    }
}
