use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qfibounds_core::BoundId;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    BoundSuite,
    ContinuitySweep,
    UnitarySuite,
    EntanglementSuite,
    ScalingSweep,
    Typicality,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::BoundSuite => "bound-suite",
            Experiment::ContinuitySweep => "continuity-sweep",
            Experiment::UnitarySuite => "unitary-suite",
            Experiment::EntanglementSuite => "entanglement-suite",
            Experiment::ScalingSweep => "scaling-sweep",
            Experiment::Typicality => "typicality",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

fn default_seed() -> u64 {
    42
}
fn default_dims() -> Vec<usize> {
    vec![2]
}
fn default_n_qubits() -> Vec<usize> {
    vec![2, 3, 4]
}
fn default_localities() -> Vec<usize> {
    vec![1, 2]
}
fn default_rank_floor() -> f64 {
    1e-2
}
fn default_sigma_floor() -> f64 {
    0.05
}
fn default_lambda_floor() -> f64 {
    qfibounds_core::bounds::DEFAULT_LAMBDA_FLOOR
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("qfibounds-out")
}
fn default_eps_grid() -> Vec<f64> {
    vec![1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5, 1e-6]
}
fn default_restarts() -> usize {
    qfibounds_core::entanglement::DEFAULT_RESTARTS
}
fn default_seesaw_restarts() -> usize {
    2
}
fn default_components() -> usize {
    32
}
fn default_seesaw_iterations() -> usize {
    300
}
fn default_brute_grid() -> usize {
    120
}

/// One experiment run, read from a JSON file. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_n_qubits")]
    pub n_qubits: Vec<usize>,
    /// Localities `k` for the entanglement pipelines.
    #[serde(default = "default_localities")]
    pub localities: Vec<usize>,
    #[serde(default)]
    pub samples: usize,
    /// Sampled mixed states have `lambda_min >= rank_floor`.
    #[serde(default = "default_rank_floor")]
    pub rank_floor: f64,
    /// Identity weight mixed into probes and separable fits.
    #[serde(default = "default_sigma_floor")]
    pub sigma_floor: f64,
    /// Evaluators refuse states with `lambda_min` below this.
    #[serde(default = "default_lambda_floor")]
    pub lambda_floor: f64,
    /// Relative satisfaction tolerance per bound id.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Restrict the bound suite to these ids.
    #[serde(default)]
    pub bounds: Option<Vec<String>>,
    #[serde(default = "default_eps_grid")]
    pub eps_grid: Vec<f64>,
    /// Restarts for pure-state entanglement.
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_seesaw_restarts")]
    pub seesaw_restarts: usize,
    /// Cap on the number of product components in separable fits.
    #[serde(default = "default_components")]
    pub max_components: usize,
    #[serde(default = "default_seesaw_iterations")]
    pub seesaw_iterations: usize,
    #[serde(default = "default_brute_grid")]
    pub brute_grid: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub format: Format,
}

impl ExperimentConfig {
    /// Config with every optional field at its default.
    pub fn new(experiment: Experiment) -> Self {
        serde_json::from_value(serde_json::json!({ "experiment": experiment })).expect("defaults deserialize")
    }

    pub fn from_json_str(text: &str, origin: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| HarnessError::ConfigParse {
            path: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json_str(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::InvalidConfig(m));
        if self.dims.contains(&0) {
            return bad("dims must be positive".into());
        }
        let max_dim = self.dims.iter().copied().max().unwrap_or(1) as f64;
        if !(self.rank_floor > 0.0 && self.rank_floor <= 1.0 / max_dim) {
            return bad(format!("rank_floor {} outside (0, 1/{max_dim}]", self.rank_floor));
        }
        if !(0.0..=1.0).contains(&self.sigma_floor) {
            return bad(format!("sigma_floor {} outside [0, 1]", self.sigma_floor));
        }
        if !(self.lambda_floor >= 0.0) {
            return bad("lambda_floor must be nonnegative".into());
        }
        for (k, v) in &self.tolerances {
            if BoundId::parse(k).is_none() {
                return bad(format!("unknown bound id `{k}` in tolerances"));
            }
            if !(*v >= 0.0) {
                return bad(format!("tolerance for `{k}` must be nonnegative"));
            }
        }
        for id in self.bounds.iter().flatten() {
            if BoundId::parse(id).is_none() {
                return bad(format!("unknown bound id `{id}`"));
            }
        }
        if self.eps_grid.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return bad("eps_grid values must lie in (0, 1]".into());
        }
        if self.localities.contains(&0) || self.n_qubits.contains(&0) {
            return bad("localities and n_qubits must be positive".into());
        }
        if self.max_components == 0 || self.brute_grid < 2 {
            return bad("max_components must be positive and brute_grid at least 2".into());
        }
        Ok(())
    }

    pub fn tolerance_map(&self) -> BTreeMap<BoundId, f64> {
        self.tolerances.iter().filter_map(|(k, v)| BoundId::parse(k).map(|id| (id, *v))).collect()
    }

    pub fn bound_filter(&self) -> Option<Vec<BoundId>> {
        self.bounds.as_ref().map(|ids| ids.iter().filter_map(|s| BoundId::parse(s)).collect())
    }
}
