//! Run configuration: command-line flags over a JSON config file over defaults.

use std::path::{Path, PathBuf};

use clap::Args;
use ptcubic::params::ModelParams;
use serde::Deserialize;

use crate::error::CliError;

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub m: Option<f64>,
    pub mu: Option<f64>,
    pub epsilon: Option<f64>,
    pub hbar: Option<f64>,
    pub ell: Option<f64>,
    pub order: Option<u32>,
    pub basis: Option<i64>,
    pub levels: Option<i64>,
    #[serde(rename = "E")]
    pub energies: Option<Energies>,
    pub dt: Option<f64>,
    pub steps: Option<i64>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub points: Option<i64>,
}

/// `"E": 1` or `"E": [1, 5, 8]`.
#[derive(Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Energies {
    One(f64),
    Many(Vec<f64>),
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

/// Flags shared by every subcommand; each overrides the matching config key.
#[derive(Args, Debug, Default, Clone)]
pub struct Overrides {
    /// JSON file with any of: m, mu, epsilon, hbar, ell, order, basis, levels, E, dt, steps, xmin, xmax, points
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub m: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true)]
    pub ell: Option<f64>,
    /// Expansion order (metric: highest Q order; hamiltonian, observables, density: highest ϵ power)
    #[arg(long, global = true)]
    pub order: Option<u32>,
    /// Harmonic-oscillator basis size
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub basis: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub levels: Option<i64>,
    /// Orbit energy; repeat for a sweep
    #[arg(long = "E", global = true, allow_negative_numbers = true)]
    pub energies: Vec<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub steps: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub xmax: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub points: Option<i64>,
    /// Worker threads for parameter sweeps
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    /// `None` lets each command pick its own default.
    pub order: Option<u32>,
    pub basis: usize,
    pub levels: usize,
    pub energies: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
    pub xmin: f64,
    pub xmax: f64,
    pub points: usize,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            order: None,
            basis: ptcubic::spectral::DEFAULT_BASIS,
            levels: 5,
            energies: vec![1.0],
            dt: 1e-3,
            steps: 20_000,
            xmin: -4.0,
            xmax: 4.0,
            points: 400,
            jobs: 1,
        }
    }
}

fn count(name: &str, v: i64) -> Result<usize, CliError> {
    if v <= 0 {
        return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
    }
    Ok(v as usize)
}

impl RunConfig {
    pub fn order_or(&self, default: u32) -> u32 {
        self.order.unwrap_or(default)
    }

    /// Merges flags over the config file over defaults, then validates.
    pub fn resolve(flags: &Overrides) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Self::merge(flags, &file)
    }

    pub fn merge(flags: &Overrides, file: &ConfigFile) -> Result<Self, CliError> {
        let d = Self::default();
        let pick = |flag: Option<f64>, key: Option<f64>, default: f64| flag.or(key).unwrap_or(default);
        let params = ModelParams {
            m: pick(flags.m, file.m, d.params.m),
            mu: pick(flags.mu, file.mu, d.params.mu),
            epsilon: pick(flags.epsilon, file.epsilon, d.params.epsilon),
            hbar: pick(flags.hbar, file.hbar, d.params.hbar),
            ell: pick(flags.ell, file.ell, d.params.ell),
        };
        params.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let energies = if !flags.energies.is_empty() {
            flags.energies.clone()
        } else {
            match &file.energies {
                Some(Energies::One(e)) => vec![*e],
                Some(Energies::Many(v)) => v.clone(),
                None => d.energies,
            }
        };
        if energies.is_empty() || energies.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(CliError::Usage(format!("E must be a positive number or list, got {energies:?}")));
        }
        let cfg = Self {
            params,
            order: flags.order.or(file.order),
            basis: flags.basis.or(file.basis).map(|v| count("basis", v)).transpose()?.unwrap_or(d.basis),
            levels: flags.levels.or(file.levels).map(|v| count("levels", v)).transpose()?.unwrap_or(d.levels),
            energies,
            dt: pick(flags.dt, file.dt, d.dt),
            steps: flags.steps.or(file.steps).map(|v| count("steps", v)).transpose()?.unwrap_or(d.steps),
            xmin: pick(flags.xmin, file.xmin, d.xmin),
            xmax: pick(flags.xmax, file.xmax, d.xmax),
            points: flags.points.or(file.points).map(|v| count("points", v)).transpose()?.unwrap_or(d.points),
            jobs: flags.jobs.max(1),
        };
        if !(cfg.dt.is_finite() && cfg.dt > 0.0) {
            return Err(CliError::Usage(format!("dt must be positive, got {}", cfg.dt)));
        }
        if !(cfg.xmin.is_finite() && cfg.xmax.is_finite() && cfg.xmin < cfg.xmax) {
            return Err(CliError::Usage(format!("need xmin < xmax, got [{}, {}]", cfg.xmin, cfg.xmax)));
        }
        if cfg.levels > cfg.basis {
            return Err(CliError::Usage(format!("levels ({}) exceeds basis ({})", cfg.levels, cfg.basis)));
        }
        Ok(cfg)
    }

    /// Canonical text used to key golden files.
    pub fn fingerprint(&self) -> String {
        let p = &self.params;
        format!(
            "m={:e};mu={:e};epsilon={:e};hbar={:e};ell={:e};order={:?};basis={};levels={};E={:?};dt={:e};steps={};xmin={:e};xmax={:e};points={}",
            p.m, p.mu, p.epsilon, p.hbar, p.ell, self.order, self.basis, self.levels, self.energies, self.dt, self.steps, self.xmin, self.xmax, self.points
        )
    }
}
