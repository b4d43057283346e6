use std::path::{Path, PathBuf};

use pinlab::excursion::Family;
use serde::Deserialize;

use crate::error::{CliError, Result};

/// One experiment, read from a JSON file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub law: Family<f64>,
    pub beta: f64,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub u_grid: Option<Grid>,
    #[serde(rename = "N_ladder", default = "default_ladder")]
    pub n_ladder: Vec<usize>,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub options: Options,
}

fn default_ladder() -> Vec<usize> {
    vec![1 << 11, 1 << 12, 1 << 13]
}

fn default_replicas() -> usize {
    16
}

fn default_seed() -> u64 {
    1
}

/// `points` equally spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.min + step * i as f64).collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.points == 0 {
            return Err(CliError::Config(format!("{name}: grid needs at least one point")));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            return Err(CliError::Config(format!("{name}: need finite min <= max")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub csv_path: Option<PathBuf>,
    pub json_path: Option<PathBuf>,
}

/// Command-specific settings; every field has a default.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// System size for `simulate` and `scan` (default: largest ladder entry).
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// `δ` grid for `rate`.
    pub delta_grid: Option<Grid>,
    pub critical: Option<CriticalOptions>,
    pub report: Option<ReportOptions>,
    pub dp: Option<DpOptions>,
    pub force: Option<ForceOptions>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalOptions {
    pub u_lo: Option<f64>,
    pub u_hi: Option<f64>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportOptions {
    pub margin: Option<f64>,
    pub scan_points: Option<usize>,
    pub coupled_n: Option<usize>,
    pub coupled_replicas: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DpOptions {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default = "default_windows")]
    pub windows: Vec<(f64, f64)>,
}

fn default_windows() -> Vec<(f64, f64)> {
    vec![(0.1, 0.2), (0.3, 0.4)]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceOptions {
    /// Up-step probability; taken from a `biased_rw` law block when absent.
    pub p: Option<f64>,
    /// Command run on the mapped model.
    pub command: String,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(CliError::Config(format!("beta must be positive, got {}", self.beta)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(CliError::Config(format!(
                "sigma must be nonnegative, got {}",
                self.sigma
            )));
        }
        if let Some(g) = &self.u_grid {
            g.validate("u_grid")?;
        }
        if let Some(g) = &self.options.delta_grid {
            g.validate("delta_grid")?;
            if g.min < 0.0 {
                return Err(CliError::Config("delta_grid: densities must be nonnegative".into()));
            }
        }
        if self.n_ladder.is_empty() || self.n_ladder[0] == 0 || self.n_ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config(
                "N_ladder must be nonempty, positive and strictly increasing".into(),
            ));
        }
        if self.replicas == 0 {
            return Err(CliError::Config("replicas must be at least 1".into()));
        }
        if self.options.n == Some(0) {
            return Err(CliError::Config("options.N must be at least 1".into()));
        }
        Ok(())
    }

    pub fn u_values(&self) -> Result<Vec<f64>> {
        self.u_grid
            .map(|g| g.values())
            .ok_or_else(|| CliError::Config("this command needs u_grid".into()))
    }

    /// Size used by single-size commands.
    pub fn size(&self) -> usize {
        self.options
            .n
            .unwrap_or(*self.n_ladder.last().expect("validated ladder"))
    }

    pub fn csv_path(&self) -> Result<&Path> {
        self.outputs
            .csv_path
            .as_deref()
            .ok_or_else(|| CliError::Config("outputs.csv_path is required for this command".into()))
    }

    pub fn json_path(&self) -> Result<&Path> {
        self.outputs
            .json_path
            .as_deref()
            .ok_or_else(|| CliError::Config("outputs.json_path is required for this command".into()))
    }
}
