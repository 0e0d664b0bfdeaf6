//! Two-sided Wilcoxon signed-rank test for paired samples: exact null
//! distribution up to n = 25, normal approximation with continuity and
//! tie corrections beyond.

use crate::error::{Error, Result};

const EXACT_LIMIT: usize = 25;

/// Average ranks of the absolute differences, doubled so ties stay
/// integral (a tie of two at ranks 3,4 gives both the doubled rank 7).
fn doubled_ranks(abs_diffs: &[f64]) -> Vec<u64> {
    let n = abs_diffs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| abs_diffs[a].partial_cmp(&abs_diffs[b]).unwrap());
    let mut ranks = vec![0u64; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && abs_diffs[order[j + 1]] == abs_diffs[order[i]] {
            j += 1;
        }
        // positions i..=j share the average rank (i+1 + ... + j+1)/(j-i+1)
        let doubled_avg = (i as u64 + 1) + (j as u64 + 1);
        for &idx in &order[i..=j] {
            ranks[idx] = doubled_avg;
        }
        i = j + 1;
    }
    ranks
}

/// Exact P(W <= w) over all 2^n sign assignments, computed by dynamic
/// programming over the doubled rank sums.
fn exact_cdf_leq(doubled: &[u64], w2: u64) -> f64 {
    let total: u64 = doubled.iter().sum();
    let mut counts = vec![0.0f64; total as usize + 1];
    counts[0] = 1.0;
    for &r in doubled {
        for s in (r as usize..counts.len()).rev() {
            counts[s] += counts[s - r as usize];
        }
    }
    let hits: f64 = counts[..=(w2.min(total)) as usize].iter().sum();
    hits / 2f64.powi(doubled.len() as i32)
}

/// Standard normal CDF via the Abramowitz and Stegun 7.1.26 erf
/// polynomial (absolute error < 1.5e-7).
pub fn normal_cdf(x: f64) -> f64 {
    let t = 1.0 / (1.0 + 0.3275911 * x.abs() / std::f64::consts::SQRT_2);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    let erf = 1.0 - poly * (-x * x / 2.0).exp();
    if x >= 0.0 {
        0.5 * (1.0 + erf)
    } else {
        0.5 * (1.0 - erf)
    }
}

/// Two-sided p-value for paired samples `a` and `b`. Zero differences are
/// dropped; all-zero differences give p = 1.0; fewer than 5 informative
/// pairs is an error.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput("wilcoxon: sample lengths differ".into()));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(Error::InvalidInput("wilcoxon: non-finite difference".into()));
    }
    if diffs.is_empty() {
        return Ok(1.0);
    }
    let n = diffs.len();
    if n < 5 {
        return Err(Error::InvalidInput(format!(
            "wilcoxon needs >= 5 nonzero differences, got {n}"
        )));
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let doubled = doubled_ranks(&abs);
    let w2_plus: u64 = diffs
        .iter()
        .zip(&doubled)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, &r)| r)
        .sum();
    let w2_total: u64 = doubled.iter().sum();
    let w2_minus = w2_total - w2_plus;

    if n <= EXACT_LIMIT {
        let p = 2.0 * exact_cdf_leq(&doubled, w2_plus.min(w2_minus));
        return Ok(p.min(1.0));
    }

    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    // tie correction on the variance: sum(t^3 - t)/48 per tie group
    let mut tie_term = 0.0;
    let mut sorted = abs.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += (t * t * t - t) / 48.0;
        i = j + 1;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
    let w_min = (w2_plus.min(w2_minus) as f64) / 2.0;
    let z = (w_min - mean + 0.5) / var.sqrt();
    Ok((2.0 * normal_cdf(z)).min(1.0))
}
