//! Generator g_theta: embedding -> GRU -> per-token dense head -> sigmoid
//! -> hard rounding to a binary mask.

use rand::Rng;

use super::{Embedding, Example};
use crate::error::{Error, Result};
use crate::nn::{Dense, GruParams, ParamLayout, Segment};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorNet {
    pub gru: GruParams,
    /// hidden -> 1 selection head.
    pub head: Dense,
}

impl GeneratorNet {
    pub fn init(hidden: usize, emb_dim: usize, rng: &mut impl Rng) -> Self {
        GeneratorNet {
            gru: GruParams::init(hidden, emb_dim, rng),
            head: Dense::init(1, hidden, rng),
        }
    }

    pub fn hidden(&self) -> usize {
        self.gru.hidden()
    }

    pub fn layout(hidden: usize, emb_dim: usize) -> ParamLayout {
        let mut segments = GruParams::layout(hidden, emb_dim).segments;
        segments.push(Segment::new("head_w", &[1, hidden]));
        segments.push(Segment::new("head_b", &[1]));
        ParamLayout::new(segments)
    }

    /// Flat genome in layout order.
    pub fn to_genome(&self) -> Vec<f64> {
        let layout = Self::layout(self.hidden(), self.gru.input_dim());
        let mut parts = self.gru.param_slices();
        parts.push(&self.head.w.data);
        parts.push(&self.head.b);
        layout.flatten(&parts).expect("layout matches own params")
    }

    pub fn from_genome(hidden: usize, emb_dim: usize, genome: &[f64]) -> Result<Self> {
        let layout = Self::layout(hidden, emb_dim);
        let parts = layout.split(genome)?;
        if genome.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("genome contains non-finite values".into()));
        }
        let gru = GruParams::from_slices(hidden, emb_dim, &parts[..9]);
        let head = Dense {
            w: crate::nn::Mat {
                rows: 1,
                cols: hidden,
                data: parts[9].to_vec(),
            },
            b: parts[10].to_vec(),
        };
        Ok(GeneratorNet { gru, head })
    }

    pub fn genome_len(hidden: usize, emb_dim: usize) -> usize {
        Self::layout(hidden, emb_dim).total_len()
    }

    /// Hard masks for a batch of examples. m^i = 1 iff the sigmoid of the
    /// head output is >= 0.5, i.e. iff the head logit is >= 0.
    pub fn masks(&self, emb: &Embedding, examples: &[Example]) -> Result<Vec<Vec<u8>>> {
        let proj = self.gru.project_vocab(emb.rows());
        let h0 = vec![0.0; self.hidden()];
        let mut out = Vec::with_capacity(examples.len());
        for ex in examples {
            if ex.tokens.is_empty() {
                return Err(Error::InvalidInput("generate_mask: empty token sequence".into()));
            }
            for &t in &ex.tokens {
                if t as usize >= emb.vocab() {
                    return Err(Error::InvalidInput(format!(
                        "token id {t} outside vocabulary of size {}",
                        emb.vocab()
                    )));
                }
            }
            let ids: Vec<Option<u32>> = ex.tokens.iter().map(|&t| Some(t)).collect();
            let trace = self.gru.forward_ids(&proj, &ids, &h0);
            let mask: Vec<u8> = trace
                .h
                .iter()
                .map(|h| if self.head.forward(h)[0] >= 0.0 { 1 } else { 0 })
                .collect();
            out.push(mask);
        }
        Ok(out)
    }

    /// Mask for a single example.
    pub fn generate_mask(&self, emb: &Embedding, ex: &Example) -> Result<Vec<u8>> {
        Ok(self.masks(emb, std::slice::from_ref(ex))?.pop().unwrap())
    }
}
