//! Experiment configuration: a single JSON file, with every field
//! overridable from the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::builtins::Builtin;
use super::DriverError;

/// Which parameter set an experiment runs on.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SetSpec {
    Builtin { builtin: String },
    IfsFile { ifs_file: PathBuf },
}

/// Covariance selection; only the squared exponential is currently
/// available, with an optional pre-normalization length scale.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CovarianceSpec {
    pub name: String,
    #[serde(default = "default_length_scale")]
    pub length_scale: f64,
}

impl Default for CovarianceSpec {
    fn default() -> Self {
        Self {
            name: "sqexp".into(),
            length_scale: 1.0,
        }
    }
}

fn default_length_scale() -> f64 {
    1.0
}

fn default_u_grid() -> Vec<f64> {
    vec![2.0, 2.25, 2.5, 2.75, 3.0]
}

fn default_reps() -> u64 {
    10_000
}

fn default_seed() -> u64 {
    1
}

fn default_band() -> f64 {
    2.0
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Full experiment description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub set: SetSpec,
    #[serde(default)]
    pub covariance: CovarianceSpec,
    #[serde(default = "default_u_grid")]
    pub u_grid: Vec<f64>,
    #[serde(default = "default_reps")]
    pub reps: u64,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    /// Tube-radius ladder; defaults to the geometric ladder from
    /// diameter/8 down to 4h.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    /// Attractor iteration depth for IFS sets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    /// Rasterization cell side for tube geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    /// Grid spacing for field simulation on solid sets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim_resolution: Option<f64>,
    /// Force a prediction regime: `strong`, `weak`, `log`, or `outer`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
    #[serde(default = "default_band")]
    pub weak_band_constant: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn for_builtin(name: &str) -> Self {
        Self {
            set: SetSpec::Builtin {
                builtin: name.to_string(),
            },
            covariance: CovarianceSpec::default(),
            u_grid: default_u_grid(),
            reps: default_reps(),
            master_seed: default_seed(),
            epsilons: None,
            depth: None,
            resolution: None,
            sim_resolution: None,
            regime: None,
            weak_band_constant: default_band(),
            output_dir: default_output_dir(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DriverError> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            DriverError::Config(format!("cannot read {}: {e}", path.as_ref().display()))
        })?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| DriverError::Config(format!("invalid config JSON: {e}")))?;
        Ok(config)
    }

    /// Check every invariant the commands rely on.
    pub fn validate(&self) -> Result<(), DriverError> {
        match &self.set {
            SetSpec::Builtin { builtin } => {
                if Builtin::parse(builtin).is_none() {
                    return Err(DriverError::Config(format!(
                        "unknown builtin set '{builtin}' (expected one of cantor, sierpinski, koch, interval, square, disc)"
                    )));
                }
            }
            SetSpec::IfsFile { ifs_file } => {
                if !ifs_file.exists() {
                    return Err(DriverError::Config(format!(
                        "IFS file {} does not exist",
                        ifs_file.display()
                    )));
                }
            }
        }
        if self.covariance.name != "sqexp" {
            return Err(DriverError::Config(format!(
                "unknown covariance '{}' (only 'sqexp' is available)",
                self.covariance.name
            )));
        }
        if !(self.covariance.length_scale > 0.0) {
            return Err(DriverError::Config(
                "length_scale must be positive".into(),
            ));
        }
        if self.u_grid.is_empty() || self.u_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(DriverError::Config(
                "u_grid must be non-empty and strictly ascending".into(),
            ));
        }
        if self.reps < 100 {
            return Err(DriverError::Config("reps must be at least 100".into()));
        }
        if let Some(eps) = &self.epsilons {
            if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0)) {
                return Err(DriverError::Config(
                    "epsilons must be positive when given".into(),
                ));
            }
        }
        for (name, value) in [
            ("resolution", self.resolution),
            ("sim_resolution", self.sim_resolution),
        ] {
            if let Some(v) = value {
                if !(v > 0.0) {
                    return Err(DriverError::Config(format!("{name} must be positive")));
                }
            }
        }
        if let Some(r) = &self.regime {
            if !matches!(r.as_str(), "strong" | "weak" | "log" | "outer") {
                return Err(DriverError::Config(format!(
                    "unknown regime '{r}' (expected strong, weak, log, or outer)"
                )));
            }
        }
        if self.weak_band_constant < 1.0 {
            return Err(DriverError::Config(
                "weak_band_constant must be at least 1".into(),
            ));
        }
        Ok(())
    }
}
