//! Temporal max pooling over a sequence of hidden states.

use crate::error::{Error, Result};

/// Elementwise max over time. Returns the pooled vector and, per
/// coordinate, the timestep that attained the max (first occurrence on
/// ties, which is where the subgradient is routed).
pub fn max_pool_time(states: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<usize>)> {
    let first = states
        .first()
        .ok_or_else(|| Error::InvalidInput("max_pool_time: empty sequence".into()))?;
    let mut pooled = first.clone();
    let mut argmax = vec![0usize; first.len()];
    for (t, s) in states.iter().enumerate().skip(1) {
        for i in 0..pooled.len() {
            if s[i] > pooled[i] {
                pooled[i] = s[i];
                argmax[i] = t;
            }
        }
    }
    Ok((pooled, argmax))
}

/// Scatters the pooled gradient back to the argmax timesteps.
pub fn max_pool_backward(dpooled: &[f64], argmax: &[usize], seq_len: usize) -> Vec<Vec<f64>> {
    let mut dh = vec![vec![0.0; dpooled.len()]; seq_len];
    for (i, &t) in argmax.iter().enumerate() {
        dh[t][i] += dpooled[i];
    }
    dh
}
