//! Dataset construction, persistence, and encoding.

pub mod io;
pub mod toy;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rationalizer::{Embedding, Example};

pub use io::{load_jsonl, majority_vote_mask, save_jsonl, write_atomic};
pub use toy::{generate_toy_dataset, Contamination, DatasetSplits, ToyConfig};

/// Token <-> id table; id = index into the token list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocab {
    tokens: Vec<String>,
}

impl Vocab {
    pub fn new(tokens: Vec<String>) -> Self {
        Vocab { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.tokens.iter().position(|t| t == token).map(|i| i as u32)
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    /// One-hot embedding sized for this vocabulary, zero-padded to emb_dim.
    pub fn one_hot_embedding(&self, emb_dim: usize) -> Result<Embedding> {
        Embedding::one_hot(self.len(), emb_dim)
    }
}

/// One-hot sequence encoding of an example's tokens.
pub fn encode_tokens(ex: &Example, vocab: &Vocab, emb_dim: usize) -> Result<Vec<Vec<f64>>> {
    let emb = vocab.one_hot_embedding(emb_dim)?;
    ex.tokens
        .iter()
        .map(|&t| {
            if vocab.token(t).is_none() {
                return Err(crate::error::Error::InvalidInput(format!(
                    "token id {t} outside vocabulary of size {}",
                    vocab.len()
                )));
            }
            Ok(emb.embed(t)?.to_vec())
        })
        .collect()
}
