//! Sparsity and contiguity objectives on binary masks, and the combined
//! normalized regularizer used by the fitness function.
//!
//! ```
//! use genspp::rationalizer::{regularizer_omega, RegularizerConfig};
//!
//! let cfg = RegularizerConfig::default(); // lambda_s 1.0, lambda_c 2.0, alpha 0.15
//! let mut mask = vec![0u8; 20];
//! mask[5..8].fill(1); // 3 of 20 selected, one contiguous block
//! let omega = regularizer_omega(&mask, &cfg)?;
//! assert!(omega < 0.25); // near-ideal mask, small penalty
//!
//! let alternating: Vec<u8> = (0..20).map(|i| (i % 2) as u8).collect();
//! assert!(regularizer_omega(&alternating, &cfg)? > 0.75);
//! # Ok::<(), genspp::Error>(())
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizerConfig {
    pub lambda_s: f64,
    pub lambda_c: f64,
    /// Target selection fraction in [0, 1].
    pub alpha: f64,
}

impl Default for RegularizerConfig {
    fn default() -> Self {
        RegularizerConfig {
            lambda_s: 1.0,
            lambda_c: 2.0,
            alpha: 0.15,
        }
    }
}

/// Relaxed sparsity objective |alpha - (1/n) sum m|.
pub fn sparsity_loss(mask: &[u8], alpha: f64) -> f64 {
    let frac = mask.iter().map(|&m| m as f64).sum::<f64>() / mask.len() as f64;
    (alpha - frac).abs()
}

/// Number of 0<->1 transitions.
pub fn contiguity_loss(mask: &[u8]) -> f64 {
    mask.windows(2)
        .map(|w| (w[1] as f64 - w[0] as f64).abs())
        .sum()
}

/// Weighted, normalized combination in [0, 1]. The sparsity term is
/// normalized by its maximum max(alpha, 1-alpha), the contiguity term by
/// its maximum n-1 (zero for single-token sequences).
pub fn regularizer_omega(mask: &[u8], cfg: &RegularizerConfig) -> Result<f64> {
    let lam_sum = cfg.lambda_s + cfg.lambda_c;
    if lam_sum <= 0.0 {
        return Err(Error::Config(
            "regularizer needs lambda_s + lambda_c > 0".into(),
        ));
    }
    let n = mask.len();
    let s_norm = sparsity_loss(mask, cfg.alpha) / cfg.alpha.max(1.0 - cfg.alpha);
    let c_norm = if n > 1 {
        contiguity_loss(mask) / (n as f64 - 1.0)
    } else {
        0.0
    };
    let omega = (cfg.lambda_s * s_norm + cfg.lambda_c * c_norm) / lam_sum;
    Ok(omega.clamp(0.0, 1.0))
}
