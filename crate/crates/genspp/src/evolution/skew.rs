//! Deliberately skewed generator pretraining: gradient descent pushes a
//! fresh generator toward the degenerate "select only the first token"
//! mask. The resulting genome seeds populations for the recovery
//! experiments.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::nn::{sigmoid_bce, AdamState, Dense, GruParams, GruProjGrads};
use crate::rationalizer::{Embedding, Example, GeneratorNet};
use crate::rng::stream;

const SKEW_INIT_STREAM: u64 = 0x80;
const SKEW_SHUFFLE_STREAM: u64 = 0x81;

/// Trains a fresh generator for `epochs` epochs of mini-batch Adam
/// (batch 64, lr 1e-3) against the target mask [1, 0, ..., 0] with
/// per-token sigmoid cross-entropy, mean reduction over tokens and batch.
/// Returns the flat genome and the mean loss per epoch.
pub fn skew_pretrain_genome(
    emb: &Embedding,
    train: &[Example],
    gen_hidden: usize,
    epochs: usize,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if train.is_empty() {
        return Err(Error::InvalidInput("skew pretraining: empty train split".into()));
    }
    let batch_size = 64;
    let lr = 1e-3;
    let mut init_rng = stream(seed, &[SKEW_INIT_STREAM]);
    let mut gen = GeneratorNet::init(gen_hidden, emb.dim(), &mut init_rng);
    let mut shuffle_rng = stream(seed, &[SKEW_SHUFFLE_STREAM]);
    let mut adam = AdamState::new(GeneratorNet::genome_len(gen_hidden, emb.dim()), lr);

    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut epoch_losses = Vec::with_capacity(epochs);
    for _ in 0..epochs {
        order.shuffle(&mut shuffle_rng);
        let mut epoch_loss = 0.0;
        let mut epoch_tokens = 0usize;
        for chunk in order.chunks(batch_size) {
            let proj = gen.gru.project_vocab(emb.rows());
            let mut grads = GeneratorNet {
                gru: GruParams::zeros(gen_hidden, emb.dim()),
                head: Dense::zeros(1, gen_hidden),
            };
            let mut proj_grads = GruProjGrads::zeros(emb.vocab(), gen_hidden);
            let scale = 1.0 / chunk.len() as f64;
            for &i in chunk {
                let ex = &train[i];
                let n = ex.tokens.len();
                if n == 0 {
                    return Err(Error::InvalidInput("skew pretraining: empty token sequence".into()));
                }
                let ids: Vec<Option<u32>> = ex.tokens.iter().map(|&t| Some(t)).collect();
                let h0 = vec![0.0; gen_hidden];
                let trace = gen.gru.forward_ids(&proj, &ids, &h0);
                let tok_scale = scale / n as f64;
                let mut dh_up = vec![vec![0.0; gen_hidden]; n];
                for t in 0..n {
                    let logit = gen.head.forward(&trace.h[t])[0];
                    let target = if t == 0 { 1.0 } else { 0.0 };
                    let (loss, dlogit) = sigmoid_bce(logit, target);
                    epoch_loss += loss / n as f64;
                    let dy = [dlogit * tok_scale];
                    dh_up[t] = gen.head.backward(&trace.h[t], &dy, &mut grads.head);
                }
                epoch_tokens += 1;
                gen.gru
                    .backward_ids(&ids, &trace, &dh_up, &mut grads.gru, &mut proj_grads);
            }
            proj_grads.fold_into(emb.rows(), &mut grads.gru);
            let mut flat = gen.to_genome();
            adam.step(&mut flat, &grads.to_genome())?;
            gen = GeneratorNet::from_genome(gen_hidden, emb.dim(), &flat)?;
        }
        epoch_losses.push(epoch_loss / epoch_tokens as f64);
    }
    Ok((gen.to_genome(), epoch_losses))
}
