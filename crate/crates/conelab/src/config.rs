//! Run configuration: one flat JSON document, every field optional with
//! the documented default. Times given to commands are absolute; the
//! switch-on instant `y0` is subtracted before evaluation, so with the
//! default `y0 = 0` command times coincide with source-relative offsets.

use anyhow::{Context, Result};
use conelab_core::lab::{GridSpec, CAUSAL_THRESHOLD};
use conelab_core::propagator::FieldParams;
use conelab_core::source::SourceSpec;
use conelab_core::QuadratureSpec;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

/// Environment variable holding a config path, used when no `--config`
/// flag is given.
pub const CONFIG_ENV: &str = "CONELAB_CONFIG";

/// Marker for errors that are the caller's fault (bad flags, unreadable or
/// invalid config); the CLI maps these to the usage exit code.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub r_count: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            t_min: 0.1,
            t_max: 5.0,
            t_count: 40,
            r_min: 0.1,
            r_max: 5.0,
            r_count: 40,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    pub accel_order: usize,
    pub mollifier_widths: Vec<f64>,
    pub hard_cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let spec = QuadratureSpec::default();
        QuadratureConfig {
            abs_tol: spec.abs_tol,
            rel_tol: spec.rel_tol,
            max_panels: spec.max_panels,
            accel_order: spec.accel_order,
            mollifier_widths: spec.mollifier_widths,
            hard_cutoff: spec.hard_cutoff,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub m: f64,
    pub g: f64,
    pub lambda: f64,
    /// Absolute switch-on time of the source.
    pub y0: f64,
    /// Half-width of the light-cone band excluded from pointwise claims.
    pub band_eps: f64,
    /// Leakage ratio above which an observable is declared non-causal.
    pub causal_threshold: f64,
    pub grid: GridConfig,
    pub quadrature: QuadratureConfig,
    /// Default CSV destination for `scan`.
    pub output_path: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            m: 1.0,
            g: 0.1,
            lambda: 20.0,
            y0: 0.0,
            band_eps: 0.05,
            causal_threshold: CAUSAL_THRESHOLD,
            grid: GridConfig::default(),
            quadrature: QuadratureConfig::default(),
            output_path: "scan.csv".to_string(),
        }
    }
}

impl RunConfig {
    /// Resolve the config: explicit path, then the environment variable,
    /// then built-in defaults. A named file that is missing or malformed is
    /// a usage error; absence of any file is not.
    pub fn load(explicit: Option<&Path>) -> Result<RunConfig> {
        let env_path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        let path = match (explicit, env_path.as_deref()) {
            (Some(p), _) => p,
            (None, Some(p)) => p,
            (None, None) => return Ok(RunConfig::default()),
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            UsageError(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid_spec()
            .validate()
            .and_then(|_| self.quadrature_spec().validate())
            .and_then(|_| self.source().validate())
            .map_err(|e| UsageError(format!("invalid config: {e}")))?;
        if !(self.causal_threshold > 0.0) {
            return Err(UsageError("causal_threshold must be positive".into()).into());
        }
        if !self.y0.is_finite() {
            return Err(UsageError("y0 must be finite".into()).into());
        }
        Ok(())
    }

    /// Grid in source-relative time, ready for the lab scans.
    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            t_range: (
                self.grid.t_min - self.y0,
                self.grid.t_max - self.y0,
                self.grid.t_count,
            ),
            r_range: (self.grid.r_min, self.grid.r_max, self.grid.r_count),
            band_eps: self.band_eps,
            m: self.m,
            g: self.g,
            lambda: self.lambda,
        }
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            abs_tol: self.quadrature.abs_tol,
            rel_tol: self.quadrature.rel_tol,
            max_panels: self.quadrature.max_panels,
            accel_order: self.quadrature.accel_order,
            mollifier_widths: self.quadrature.mollifier_widths.clone(),
            hard_cutoff: self.quadrature.hard_cutoff,
        }
    }

    pub fn params(&self) -> FieldParams {
        FieldParams {
            m: self.m,
            g: self.g,
            lambda: self.lambda,
        }
    }

    pub fn source(&self) -> SourceSpec {
        SourceSpec {
            y0: self.y0,
            g: self.g,
        }
    }
}

pub fn write_default_config(path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&RunConfig::default())?;
    std::fs::write(path, text).context("writing config")?;
    Ok(())
}
