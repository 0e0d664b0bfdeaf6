//! Classification and per-token losses.

use crate::error::{Error, Result};
use crate::nn::linalg::sigmoid;

/// Numerically stable softmax cross-entropy. Returns the loss and the
/// gradient w.r.t. the logits (softmax - onehot).
pub fn softmax_cross_entropy(logits: &[f64], label: usize) -> Result<(f64, Vec<f64>)> {
    if label >= logits.len() {
        return Err(Error::InvalidInput(format!(
            "softmax_cross_entropy: label {label} out of range for {} classes",
            logits.len()
        )));
    }
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    let mut grad: Vec<f64> = exps.iter().map(|e| e / sum).collect();
    let loss = -(grad[label].max(f64::MIN_POSITIVE)).ln();
    grad[label] -= 1.0;
    Ok((loss, grad))
}

/// Binary cross-entropy on a pre-sigmoid logit against a {0,1} target.
/// Returns the loss and the gradient w.r.t. the logit.
pub fn sigmoid_bce(logit: f64, target: f64) -> (f64, f64) {
    // log(1+e^x) computed stably
    let softplus = |x: f64| {
        if x > 0.0 {
            x + (-x).exp().ln_1p()
        } else {
            x.exp().ln_1p()
        }
    };
    let loss = softplus(logit) - target * logit;
    let grad = sigmoid(logit) - target;
    (loss, grad)
}
