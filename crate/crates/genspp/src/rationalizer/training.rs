//! Per-genome predictor training: a fresh predictor is trained by
//! mini-batch Adam on the masked input while the generator stays frozen.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Embedding, Example, GeneratorNet, PredictorNet};
use crate::error::{Error, Result};
use crate::nn::{AdamState, GruProjGrads};
use crate::rng::stream;

const PRED_INIT_STREAM: u64 = 0x70;
const SHUFFLE_STREAM: u64 = 0x71;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerOptimizer {
    Adam,
    Sgd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InnerConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub optimizer: InnerOptimizer,
    /// Heavy-ball momentum; only used by the SGD optimizer.
    pub momentum: f64,
}

impl Default for InnerConfig {
    fn default() -> Self {
        InnerConfig {
            epochs: 3,
            batch_size: 64,
            lr: 1e-2,
            optimizer: InnerOptimizer::Adam,
            momentum: 0.9,
        }
    }
}

/// Masked token ids (None = masked out) plus the class label.
pub type MaskedExample = (Vec<Option<u32>>, usize);

/// x-tilde as token ids: selected positions keep their id, the rest
/// become the zero embedding. Sequence length is preserved.
pub fn mask_ids(ex: &Example, mask: &[u8]) -> Result<MaskedExample> {
    if mask.len() != ex.tokens.len() {
        return Err(Error::InvalidInput(format!(
            "apply_mask: mask length {} vs {} tokens",
            mask.len(),
            ex.tokens.len()
        )));
    }
    let ids = ex
        .tokens
        .iter()
        .zip(mask)
        .map(|(&t, &m)| if m == 1 { Some(t) } else { None })
        .collect();
    Ok((ids, ex.label))
}

/// x-tilde as explicit embedded vectors (x ⊙ m with the embedding applied).
pub fn apply_mask(ex: &Example, mask: &[u8], emb: &Embedding) -> Result<Vec<Vec<f64>>> {
    if mask.len() != ex.tokens.len() {
        return Err(Error::InvalidInput(format!(
            "apply_mask: mask length {} vs {} tokens",
            mask.len(),
            ex.tokens.len()
        )));
    }
    ex.tokens
        .iter()
        .zip(mask)
        .map(|(&t, &m)| {
            let e = emb.embed(t)?;
            Ok(if m == 1 {
                e.to_vec()
            } else {
                vec![0.0; emb.dim()]
            })
        })
        .collect()
}

/// Trains a fresh predictor on pre-masked sequences. Returns the trained
/// net and its mean loss on the (pre-masked) fitness split.
pub fn train_predictor_masked(
    train: &[MaskedExample],
    fitness: &[MaskedExample],
    emb: &Embedding,
    hidden: usize,
    num_classes: usize,
    inner: &InnerConfig,
    seed: u64,
) -> Result<(PredictorNet, f64)> {
    if train.is_empty() || fitness.is_empty() {
        return Err(Error::InvalidInput("train_predictor: empty split".into()));
    }
    let mut init_rng = stream(seed, &[PRED_INIT_STREAM]);
    let mut pred = PredictorNet::init(hidden, emb.dim(), num_classes, &mut init_rng);
    let mut shuffle_rng = stream(seed, &[SHUFFLE_STREAM]);
    let layout_len = pred.to_flat().len();
    let mut adam = AdamState::new(layout_len, inner.lr);
    let mut velocity = vec![0.0f64; layout_len];

    let mut order: Vec<usize> = (0..train.len()).collect();
    for _ in 0..inner.epochs {
        order.shuffle(&mut shuffle_rng);
        for chunk in order.chunks(inner.batch_size.max(1)) {
            let proj = pred.project(emb);
            let mut grads = pred.zeros_like();
            let mut proj_grads = GruProjGrads::zeros(emb.vocab(), hidden);
            let scale = 1.0 / chunk.len() as f64;
            for &i in chunk {
                let (ids, label) = &train[i];
                let (_, trace) = pred.forward_loss(&proj, ids, *label)?;
                let (_, mut dlogits) = crate::nn::softmax_cross_entropy(&trace.logits, *label)?;
                for d in dlogits.iter_mut() {
                    *d *= scale;
                }
                pred.backward(ids, &trace, &dlogits, &mut grads, &mut proj_grads);
            }
            proj_grads.fold_into(emb.rows(), &mut grads.gru);
            let mut flat = pred.to_flat();
            match inner.optimizer {
                InnerOptimizer::Adam => adam.step(&mut flat, &grads.to_flat())?,
                InnerOptimizer::Sgd => {
                    for ((w, v), g) in
                        flat.iter_mut().zip(velocity.iter_mut()).zip(grads.to_flat())
                    {
                        *v = inner.momentum * *v + g;
                        *w -= inner.lr * *v;
                    }
                }
            }
            pred = PredictorNet::from_flat(hidden, emb.dim(), num_classes, &flat)?;
        }
    }
    let l_t = pred.mean_loss(emb, fitness)?;
    Ok((pred, l_t))
}

/// Alg. 1 inner step: generate masks with the frozen generator, then train
/// a fresh predictor on the masked train split. L_t is measured on the
/// masked fitness split.
pub fn train_predictor(
    gen: &GeneratorNet,
    emb: &Embedding,
    train: &[Example],
    fitness: &[Example],
    num_classes: usize,
    pred_hidden: usize,
    inner: &InnerConfig,
    seed: u64,
) -> Result<(PredictorNet, f64)> {
    let masked_train = masked_split(gen, emb, train)?;
    let masked_fit = masked_split(gen, emb, fitness)?;
    train_predictor_masked(
        &masked_train,
        &masked_fit,
        emb,
        pred_hidden,
        num_classes,
        inner,
        seed,
    )
}

pub fn masked_split(
    gen: &GeneratorNet,
    emb: &Embedding,
    split: &[Example],
) -> Result<Vec<MaskedExample>> {
    let masks = gen.masks(emb, split)?;
    split
        .iter()
        .zip(&masks)
        .map(|(ex, m)| mask_ids(ex, m))
        .collect()
}

/// Mean cross-entropy of the predictor on generator-masked data (Eq. 1
/// with theta frozen).
pub fn task_loss(
    pred: &PredictorNet,
    gen: &GeneratorNet,
    emb: &Embedding,
    data: &[Example],
) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::InvalidInput("task_loss: empty batch".into()));
    }
    let masked = masked_split(gen, emb, data)?;
    pred.mean_loss(emb, &masked)
}

/// Reference loss l: a predictor trained on the unmasked input with the
/// same inner configuration, evaluated on the unmasked fitness split.
/// Used to calibrate tau = l + eps when tau is not given explicitly.
pub fn compute_reference_loss(
    emb: &Embedding,
    train: &[Example],
    fitness: &[Example],
    num_classes: usize,
    pred_hidden: usize,
    inner: &InnerConfig,
    seed: u64,
) -> Result<f64> {
    let unmasked = |split: &[Example]| -> Vec<MaskedExample> {
        split
            .iter()
            .map(|ex| (ex.tokens.iter().map(|&t| Some(t)).collect(), ex.label))
            .collect()
    };
    let (_, l) = train_predictor_masked(
        &unmasked(train),
        &unmasked(fitness),
        emb,
        pred_hidden,
        num_classes,
        inner,
        seed,
    )?;
    Ok(l)
}
