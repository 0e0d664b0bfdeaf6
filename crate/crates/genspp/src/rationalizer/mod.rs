//! Select-then-predict architecture: generator, masking, regularization
//! objectives, and per-genome predictor training.

pub mod generator;
pub mod predictor;
pub mod regularizer;
pub mod training;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generator::GeneratorNet;
pub use predictor::PredictorNet;
pub use regularizer::{contiguity_loss, regularizer_omega, sparsity_loss, RegularizerConfig};
pub use training::{
    apply_mask, compute_reference_loss, mask_ids, masked_split, task_loss, train_predictor,
    train_predictor_masked, InnerConfig, InnerOptimizer, MaskedExample,
};

/// One annotated sequence: token ids, class label, optional gold rationale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    pub tokens: Vec<u32>,
    pub label: usize,
    pub gold_mask: Option<Vec<u8>>,
}

impl Example {
    pub fn validate(&self) -> Result<()> {
        if let Some(m) = &self.gold_mask {
            if m.len() != self.tokens.len() {
                return Err(Error::InvalidInput(format!(
                    "gold_mask length {} does not match {} tokens",
                    m.len(),
                    self.tokens.len()
                )));
            }
            if m.iter().any(|&v| v > 1) {
                return Err(Error::InvalidInput("gold_mask entries must be 0/1".into()));
            }
        }
        Ok(())
    }
}

/// Frozen token embedding. Never trained and never part of a genome.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    rows: Vec<Vec<f64>>,
}

impl Embedding {
    /// Token id i maps to unit vector e_i zero-padded to `dim`.
    pub fn one_hot(vocab: usize, dim: usize) -> Result<Self> {
        if vocab > dim {
            return Err(Error::Config(format!(
                "one-hot embedding needs vocab ({vocab}) <= emb_dim ({dim})"
            )));
        }
        Ok(Embedding {
            rows: (0..vocab)
                .map(|i| {
                    let mut e = vec![0.0; dim];
                    e[i] = 1.0;
                    e
                })
                .collect(),
        })
    }

    /// Pretrained table, one row per vocabulary id.
    pub fn from_table(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map(|r| r.len()).unwrap_or(0);
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Config("embedding rows must be non-empty and equal-length".into()));
        }
        Ok(Embedding { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn vocab(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn embed(&self, id: u32) -> Result<&[f64]> {
        self.rows
            .get(id as usize)
            .map(|r| r.as_slice())
            .ok_or_else(|| Error::InvalidInput(format!("token id {id} outside vocabulary")))
    }
}
