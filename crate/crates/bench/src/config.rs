//! Bench and grid files (TOML).

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use stage_ctl_core::controllers::ControllerConfig;
use stage_ctl_core::plant::{DisturbanceSpec, PlantParams};
use stage_ctl_core::sim::SimConfig;
use stage_ctl_core::trajgen::ScanProfile;

use crate::{BenchError, Result};

/// One named scenario layered over [`BenchSpec::base`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    /// Column name in the report.
    pub name: String,
    /// External disturbance; `None` keeps the base value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<DisturbanceSpec>,
    /// True plant override.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plant: Option<PlantParams>,
    /// Reference override.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ScanProfile>,
    /// Measurement noise override (m).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_std: Option<f64>,
}

impl CaseSpec {
    /// Case without extra disturbance.
    pub fn case1() -> Self {
        CaseSpec {
            name: "case1".into(),
            dist: Some(DisturbanceSpec::None),
            plant: None,
            profile: None,
            noise_std: None,
        }
    }

    /// Case with the 0.03 m/s² 1 Hz sinusoidal disturbance.
    pub fn case2() -> Self {
        CaseSpec {
            name: "case2".into(),
            dist: Some(DisturbanceSpec::Sinusoid {
                amplitude: 0.03,
                frequency: 1.0,
            }),
            ..Self::case1()
        }
    }

    /// `base` with this case's overrides applied.
    pub fn apply(&self, base: &SimConfig) -> SimConfig {
        let mut cfg = base.clone();
        if let Some(d) = self.dist {
            cfg.dist = d;
        }
        if let Some(p) = self.plant {
            cfg.plant = p;
        }
        if let Some(p) = self.profile {
            cfg.profile = p;
        }
        if let Some(n) = self.noise_std {
            cfg.noise_std = n;
        }
        cfg
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn default_cases() -> Vec<CaseSpec> {
    vec![CaseSpec::case1(), CaseSpec::case2()]
}

fn default_controllers() -> Vec<ControllerConfig> {
    ControllerConfig::benchmark_set().to_vec()
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

/// A full benchmark: every controller × case × seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    /// Where traces and the summary go.
    pub output_dir: PathBuf,
    /// Parallel episodes.
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Measurement-noise seeds.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Settings shared by every run; its `controller` and `seed` are replaced per run.
    #[serde(default)]
    pub base: SimConfig,
    /// Scenarios, in report column order.
    #[serde(default = "default_cases")]
    pub cases: Vec<CaseSpec>,
    /// Controllers under test.
    #[serde(default = "default_controllers")]
    pub controllers: Vec<ControllerConfig>,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            output_dir: PathBuf::from("bench-out"),
            workers: default_workers(),
            seeds: default_seeds(),
            base: SimConfig::default(),
            cases: default_cases(),
            controllers: default_controllers(),
        }
    }
}

impl BenchSpec {
    /// Parses TOML text and validates it.
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: BenchSpec = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Reads and validates a TOML file.
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read(path)?)
    }

    /// Fully resolved TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("bench spec serializes")
    }

    /// Checks non-emptiness, unique case names and every episode config.
    pub fn validate(&self) -> Result<()> {
        if self.cases.is_empty() || self.controllers.is_empty() || self.seeds.is_empty() {
            return Err(BenchError::Invalid(
                "need at least one case, controller and seed".into(),
            ));
        }
        if self.workers == 0 {
            return Err(BenchError::Invalid("workers must be at least 1".into()));
        }
        let mut names = BTreeSet::new();
        for case in &self.cases {
            if case.name.is_empty()
                || !case
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
            {
                return Err(BenchError::Invalid(format!(
                    "case name {:?} must be [A-Za-z0-9_-]+",
                    case.name
                )));
            }
            if !names.insert(case.name.as_str()) {
                return Err(BenchError::Invalid(format!(
                    "duplicate case {:?}",
                    case.name
                )));
            }
            for controller in &self.controllers {
                let cfg = SimConfig {
                    controller: controller.clone(),
                    ..case.apply(&self.base)
                };
                cfg.validate()?;
                controller.build(&cfg.plant, cfg.h_ctrl)?;
            }
        }
        Ok(())
    }
}

/// Parameter grid for `tune`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Settings for the Case 1 evaluation runs.
    #[serde(default)]
    pub base: SimConfig,
    /// Candidate values per controller field; nested fields use dots (`rbf.w_max`).
    pub params: BTreeMap<String, Vec<f64>>,
    /// Parallel episodes.
    #[serde(default = "default_workers")]
    pub workers: usize,
}

impl GridSpec {
    /// Parses TOML text.
    pub fn from_toml(text: &str) -> Result<Self> {
        let grid: GridSpec = toml::from_str(text)?;
        if grid.params.values().any(|v| v.is_empty()) {
            return Err(BenchError::Invalid(
                "every grid parameter needs at least one value".into(),
            ));
        }
        if grid.workers == 0 {
            return Err(BenchError::Invalid("workers must be at least 1".into()));
        }
        grid.base.validate()?;
        Ok(grid)
    }

    /// Reads a TOML file.
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read(path)?)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| BenchError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Copy of `base` with the field at dotted `path` set to `value`.
pub fn set_param(base: &ControllerConfig, path: &str, value: f64) -> Result<ControllerConfig> {
    let mut tree = toml::Value::try_from(base).map_err(|e| BenchError::Invalid(e.to_string()))?;
    let mut node = &mut tree;
    for key in path.split('.') {
        node = node
            .as_table_mut()
            .and_then(|t| t.get_mut(key))
            .ok_or_else(|| {
                BenchError::Invalid(format!("{} has no parameter {path}", base.label()))
            })?;
    }
    *node = match node {
        toml::Value::Integer(_) if value.fract() == 0.0 && value.abs() < 9.0e15 => {
            toml::Value::Integer(value as i64)
        }
        toml::Value::Integer(_) | toml::Value::Float(_) => toml::Value::Float(value),
        toml::Value::Boolean(_) => toml::Value::Boolean(value != 0.0),
        _ => return Err(BenchError::Invalid(format!("{path} is not numeric"))),
    };
    Ok(tree.try_into()?)
}
