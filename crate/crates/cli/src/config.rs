//! Experiment configuration: JSON file, flag overrides, defaults.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// Suite selector. `all` runs every registered check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Transforms,
    Fring,
    PhiBlowup,
    Fiber,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Transforms => "transforms",
            Suite::Fring => "fring",
            Suite::PhiBlowup => "phi-blowup",
            Suite::Fiber => "fiber",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance for exact pointwise identities.
    pub identity: f64,
    /// Additive tolerance for analytic inequalities.
    pub inequality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-9,
            inequality: 1e-6,
        }
    }
}

/// The on-disk configuration. Every field is optional; defaults are
/// applied for omitted ones and flags override the file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: Option<Suite>,
    pub dimension: Option<usize>,
    pub radius_bound: Option<f64>,
    pub seed: Option<u64>,
    pub num_pairs: Option<u64>,
    pub deltas: Option<Vec<f64>>,
    pub radii: Option<Vec<f64>>,
    pub max_fiber: Option<u32>,
    pub tolerance: Option<Tolerances>,
    pub out_dir: Option<PathBuf>,
}

/// Fully resolved parameters; this struct (not the raw file) is echoed in
/// the report, so output paths never enter it.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub suite: Suite,
    pub dimension: usize,
    pub radius_bound: f64,
    pub seed: u64,
    pub num_pairs: u64,
    pub deltas: Vec<f64>,
    pub radii: Vec<f64>,
    pub max_fiber: u32,
    pub tolerance: Tolerances,
}

impl ResolvedConfig {
    /// Apply defaults; `suite` must be known by now (flag or file).
    pub fn resolve(config: &ExperimentConfig, suite: Suite) -> Result<Self, String> {
        let resolved = ResolvedConfig {
            suite,
            dimension: config.dimension.unwrap_or(2),
            radius_bound: config.radius_bound.unwrap_or(10.0),
            seed: config.seed.unwrap_or(7),
            num_pairs: config.num_pairs.unwrap_or(20_000),
            deltas: config
                .deltas
                .clone()
                .unwrap_or_else(|| vec![1.0, 0.5, 0.25, 0.125]),
            radii: config.radii.clone().unwrap_or_else(|| {
                vec![
                    (2.0f64).exp() - 1.0,
                    (4.0f64).exp() - 1.0,
                    (6.0f64).exp() - 1.0,
                ]
            }),
            max_fiber: config.max_fiber.unwrap_or(64),
            tolerance: config.tolerance.clone().unwrap_or_default(),
        };
        resolved.validate()?;
        Ok(resolved)
    }

    fn validate(&self) -> Result<(), String> {
        if self.dimension == 0 {
            return Err("dimension must be >= 1".into());
        }
        if !(self.radius_bound > 0.0) {
            return Err("radius_bound must be positive".into());
        }
        if self.num_pairs == 0 {
            return Err("num_pairs must be positive".into());
        }
        if self.deltas.is_empty()
            || !self.deltas.windows(2).all(|w| w[0] > w[1])
            || !self.deltas.iter().all(|d| *d > 0.0)
        {
            return Err("deltas must be strictly decreasing and positive".into());
        }
        if self.radii.is_empty() || !self.radii.iter().all(|r| *r > 1.0) {
            return Err("radii must be nonempty and exceed 1".into());
        }
        if self.max_fiber == 0 {
            return Err("max_fiber must be >= 1".into());
        }
        if !(self.tolerance.identity >= 0.0) || !(self.tolerance.inequality >= 0.0) {
            return Err("tolerances must be >= 0".into());
        }
        Ok(())
    }
}
