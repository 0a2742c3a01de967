use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::search::{Algorithm, SearchParams};

/// One algorithm entry of an experiment; unset fields take the algorithm's defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub algo: Algorithm,
    pub budget: Option<u64>,
    pub mu: Option<usize>,
    pub lambda: Option<usize>,
    pub init_count: Option<usize>,
    pub m_max: Option<u32>,
    pub count_initialization: Option<bool>,
    pub batch_size: Option<usize>,
}

impl AlgorithmSpec {
    pub fn new(algo: Algorithm) -> AlgorithmSpec {
        AlgorithmSpec {
            algo,
            budget: None,
            mu: None,
            lambda: None,
            init_count: None,
            m_max: None,
            count_initialization: None,
            batch_size: None,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> AlgorithmSpec {
        self.budget = Some(budget);
        self
    }

    pub fn params(&self, curve_every: u64) -> SearchParams {
        let mut p = SearchParams::defaults_for(self.algo);
        if let Some(v) = self.budget {
            p.budget = v;
        }
        if let Some(v) = self.mu {
            p.mu = v;
        }
        if let Some(v) = self.lambda {
            p.lambda = v;
        }
        if let Some(v) = self.init_count {
            p.init_count = v;
        }
        if let Some(v) = self.m_max {
            p.mutation.m_max = v;
        }
        if let Some(v) = self.count_initialization {
            p.count_initialization = v;
        }
        if let Some(v) = self.batch_size {
            p.batch_size = v;
        }
        p.qd_sample_every = curve_every;
        p
    }
}

fn default_repeats() -> u32 {
    10
}

fn default_curve_every() -> u64 {
    1_000
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

/// Experiment description, read from TOML.
///
/// Relative paths resolve against the directory holding the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Level files, or directories whose `*.txt` files are all used.
    pub corpus: Vec<PathBuf>,
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "default_repeats")]
    pub repeats: u32,
    pub master_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Spacing, in evaluations, of the stored fitness and QD curves.
    #[serde(default = "default_curve_every")]
    pub curve_every: u64,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut cfg = ExperimentConfig::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.rebase(base);
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Makes relative paths relative to `base`.
    pub fn rebase(&mut self, base: &Path) {
        let fix = |p: &PathBuf| if p.is_relative() { base.join(p) } else { p.clone() };
        self.corpus = self.corpus.iter().map(fix).collect();
        self.output_dir = fix(&self.output_dir);
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.repeats < 1 {
            return Err(HarnessError::Param("repeats must be at least 1".into()));
        }
        if self.curve_every < 1 {
            return Err(HarnessError::Param("curve_every must be at least 1".into()));
        }
        if self.corpus.is_empty() || self.algorithms.is_empty() {
            return Err(HarnessError::Param("corpus and algorithms must be non-empty".into()));
        }
        for spec in &self.algorithms {
            spec.params(self.curve_every)
                .validate()
                .map_err(|e| HarnessError::Param(e.to_string()))?;
        }
        Ok(())
    }
}
