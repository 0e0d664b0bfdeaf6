//! Experiment configuration file (TOML) with a flat schema whose keys
//! mirror the hyperparameter tables: model sizes, regularizer weights,
//! genetic-search rates (the probability keys are quoted, e.g. "p^m"),
//! and the inner predictor settings.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::datagen::ToyConfig;
use crate::error::{Error, Result};
use crate::evolution::{FitnessMode, GAConfig};
use crate::rationalizer::{InnerConfig, RegularizerConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetSource {
    GenerateToy,
    Load,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSection {
    pub source: DatasetSource,
    /// Directory of JSONL splits when source = "load"; generation seed
    /// offset is the experiment seed when source = "generate_toy".
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub toy: Option<ToyConfig>,
    /// Generation seed for source = "generate_toy"; fixed so every run
    /// seed sees the same dataset.
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSection {
    pub emb_dim: usize,
    pub emb_type: String,
    pub num_classes: usize,
    pub hidden_size: usize,
    pub cell_type: String,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            emb_dim: 25,
            emb_type: "one_hot".into(),
            num_classes: 3,
            hidden_size: 8,
            cell_type: "GRU".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaSection {
    #[serde(rename = "G")]
    pub generations: usize,
    #[serde(rename = "I")]
    pub population_size: usize,
    #[serde(rename = "p^m")]
    pub p_mut: f64,
    #[serde(rename = "p^c")]
    pub p_cross: f64,
    #[serde(rename = "p^sl")]
    pub p_select: f64,
    #[serde(rename = "p^su")]
    pub p_survive: f64,
    pub mut_sigma: f64,
    pub tau: f64,
    pub eps_hat: f64,
    pub patience: usize,
    #[serde(default)]
    pub reevaluate_survivors: bool,
}

impl Default for GaSection {
    fn default() -> Self {
        GaSection {
            generations: 100,
            population_size: 50,
            p_mut: 1.0,
            p_cross: 1.0,
            p_select: 0.5,
            p_survive: 0.5,
            mut_sigma: 0.05,
            tau: 0.1,
            eps_hat: 1e-8,
            patience: 25,
            reevaluate_survivors: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub out_dir: PathBuf,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub fitness_mode: FitnessMode,
    pub dataset: DatasetSection,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default = "RegularizerConfig::default")]
    pub regularizer: RegularizerConfig,
    #[serde(default)]
    pub ga: GaSection,
    #[serde(default)]
    pub inner: InnerConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            out_dir: PathBuf::from("runs"),
            seeds: vec![0, 1, 2, 3, 4],
            fitness_mode: FitnessMode::Goodness,
            dataset: DatasetSection {
                source: DatasetSource::GenerateToy,
                path: None,
                toy: None,
                seed: 0,
            },
            model: ModelSection::default(),
            regularizer: RegularizerConfig::default(),
            ga: GaSection::default(),
            inner: InnerConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = toml::from_str(&raw)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed required".into()));
        }
        if self.model.num_classes < 2 {
            return Err(Error::Config("num_classes must be >= 2".into()));
        }
        if self.model.hidden_size == 0 {
            return Err(Error::Config("hidden_size must be >= 1".into()));
        }
        if matches!(self.dataset.source, DatasetSource::Load) && self.dataset.path.is_none() {
            return Err(Error::Config("dataset.source = \"load\" requires dataset.path".into()));
        }
        if let Some(toy) = &self.dataset.toy {
            toy.validate()?;
        }
        self.ga_config(0).validate()
    }

    /// GAConfig for one seed run.
    pub fn ga_config(&self, seed: u64) -> GAConfig {
        GAConfig {
            population_size: self.ga.population_size,
            generations: self.ga.generations,
            p_mut: self.ga.p_mut,
            p_cross: self.ga.p_cross,
            p_select: self.ga.p_select,
            p_survive: self.ga.p_survive,
            mut_sigma: self.ga.mut_sigma,
            tau: self.ga.tau,
            eps_hat: self.ga.eps_hat,
            inner: self.inner,
            master_seed: seed,
            patience: self.ga.patience,
            fitness_mode: self.fitness_mode,
            reevaluate_survivors: self.ga.reevaluate_survivors,
        }
    }

    /// Hex digest over the canonical JSON form; embedded in every output.
    /// The output directory is not part of the identity, so moving an
    /// experiment does not change its hash.
    pub fn hash(&self) -> String {
        let mut identity = self.clone();
        identity.out_dir = PathBuf::new();
        let canonical = serde_json::to_vec(&identity).expect("config serializes");
        let digest = Sha256::digest(&canonical);
        let mut out = String::with_capacity(16);
        for b in &digest[..8] {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }
}
