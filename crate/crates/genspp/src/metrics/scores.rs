//! Classification and highlight metrics plus the string-matching
//! reference baselines.

use serde::{Deserialize, Serialize};

use crate::datagen::Vocab;
use crate::error::{Error, Result};
use crate::rationalizer::Example;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// Macro F1 over classes, percent.
    pub clf_f1: f64,
    /// Token-level highlight F1, percent.
    pub hl_f1: f64,
    /// Mean selected fraction, percent.
    pub ratio_r: f64,
    /// Mean selected token count.
    pub size_s: f64,
    pub n_examples: usize,
}

/// Unweighted mean over classes of per-class F1, percent. Classes absent
/// from both predictions and labels contribute 0.
pub fn macro_f1(preds: &[usize], labels: &[usize], num_classes: usize) -> Result<f64> {
    if preds.is_empty() || preds.len() != labels.len() {
        return Err(Error::InvalidInput("macro_f1: empty or mismatched inputs".into()));
    }
    if preds.iter().chain(labels).any(|&c| c >= num_classes) {
        return Err(Error::InvalidInput("macro_f1: class index out of range".into()));
    }
    let mut total = 0.0;
    for c in 0..num_classes {
        let tp = preds
            .iter()
            .zip(labels)
            .filter(|(&p, &l)| p == c && l == c)
            .count() as f64;
        let fp = preds
            .iter()
            .zip(labels)
            .filter(|(&p, &l)| p == c && l != c)
            .count() as f64;
        let fne = preds
            .iter()
            .zip(labels)
            .filter(|(&p, &l)| p != c && l == c)
            .count() as f64;
        let denom = 2.0 * tp + fp + fne;
        if denom > 0.0 {
            total += 2.0 * tp / denom;
        }
    }
    Ok(100.0 * total / num_classes as f64)
}

fn check_aligned(pred_masks: &[Vec<u8>], gold_masks: &[Vec<u8>]) -> Result<()> {
    if pred_masks.len() != gold_masks.len() {
        return Err(Error::InvalidInput("token_f1: example counts differ".into()));
    }
    for (p, g) in pred_masks.iter().zip(gold_masks) {
        if p.len() != g.len() {
            return Err(Error::InvalidInput(format!(
                "token_f1: mask lengths {} vs {}",
                p.len(),
                g.len()
            )));
        }
    }
    Ok(())
}

/// Micro-averaged binary F1 over all token positions, percent. A corpus
/// with no selected tokens on either side scores 0.
pub fn token_f1(pred_masks: &[Vec<u8>], gold_masks: &[Vec<u8>]) -> Result<f64> {
    check_aligned(pred_masks, gold_masks)?;
    let mut tp = 0.0;
    let mut fp = 0.0;
    let mut fne = 0.0;
    for (p, g) in pred_masks.iter().zip(gold_masks) {
        for (&pi, &gi) in p.iter().zip(g) {
            match (pi, gi) {
                (1, 1) => tp += 1.0,
                (1, 0) => fp += 1.0,
                (0, 1) => fne += 1.0,
                _ => {}
            }
        }
    }
    let denom = 2.0 * tp + fp + fne;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(100.0 * 2.0 * tp / denom)
}

/// Per-example binary F1 averaged over examples, percent. An example with
/// empty prediction and empty gold counts as a perfect match.
pub fn token_f1_macro(pred_masks: &[Vec<u8>], gold_masks: &[Vec<u8>]) -> Result<f64> {
    check_aligned(pred_masks, gold_masks)?;
    if pred_masks.is_empty() {
        return Err(Error::InvalidInput("token_f1: empty corpus".into()));
    }
    let mut total = 0.0;
    for (p, g) in pred_masks.iter().zip(gold_masks) {
        let tp = p.iter().zip(g).filter(|(&a, &b)| a == 1 && b == 1).count() as f64;
        let psum = p.iter().filter(|&&v| v == 1).count() as f64;
        let gsum = g.iter().filter(|&&v| v == 1).count() as f64;
        total += if psum + gsum == 0.0 {
            1.0
        } else {
            2.0 * tp / (psum + gsum)
        };
    }
    Ok(100.0 * total / pred_masks.len() as f64)
}

/// (R, S): mean selected fraction as a percent and mean selected count.
pub fn selection_stats(pred_masks: &[Vec<u8>]) -> (f64, f64) {
    if pred_masks.is_empty() {
        return (0.0, 0.0);
    }
    let mut ratio = 0.0;
    let mut size = 0.0;
    for m in pred_masks {
        let s = m.iter().map(|&v| v as f64).sum::<f64>();
        size += s;
        if !m.is_empty() {
            ratio += s / m.len() as f64;
        }
    }
    let n = pred_masks.len() as f64;
    (100.0 * ratio / n, size / n)
}

/// Mask marking every (possibly overlapping) occurrence of `pattern` in
/// the example's token string.
pub fn match_mask(ex: &Example, vocab: &Vocab, pattern: &str) -> Result<Vec<u8>> {
    let pat: Vec<char> = pattern.chars().collect();
    if pat.is_empty() {
        return Err(Error::InvalidInput("match pattern must be non-empty".into()));
    }
    let chars: Vec<char> = ex
        .tokens
        .iter()
        .map(|&t| {
            vocab
                .token(t)
                .and_then(|s| s.chars().next())
                .ok_or_else(|| Error::InvalidInput(format!("token id {t} outside vocabulary")))
        })
        .collect::<Result<_>>()?;
    let mut mask = vec![0u8; chars.len()];
    if pat.len() <= chars.len() {
        for start in 0..=chars.len() - pat.len() {
            if chars[start..start + pat.len()] == pat[..] {
                for m in mask[start..start + pat.len()].iter_mut() {
                    *m = 1;
                }
            }
        }
    }
    Ok(mask)
}

/// Reference baseline: each example's prediction marks every occurrence
/// of its class pattern; Hl-F1 is the per-example average so the three
/// canonical pattern maps land on their published scores.
pub fn string_match_baseline(
    pattern_map: &[String],
    split: &[Example],
    vocab: &Vocab,
) -> Result<MetricsReport> {
    if split.is_empty() {
        return Err(Error::InvalidInput("string_match_baseline: empty split".into()));
    }
    let mut preds = Vec::with_capacity(split.len());
    let mut golds = Vec::with_capacity(split.len());
    for ex in split {
        let pattern = pattern_map
            .get(ex.label)
            .ok_or_else(|| Error::InvalidInput(format!("no pattern for class {}", ex.label)))?;
        preds.push(match_mask(ex, vocab, pattern)?);
        golds.push(ex.gold_mask.clone().ok_or_else(|| {
            Error::InvalidInput("string_match_baseline needs gold rationales".into())
        })?);
    }
    let (ratio_r, size_s) = selection_stats(&preds);
    Ok(MetricsReport {
        clf_f1: 100.0,
        hl_f1: token_f1_macro(&preds, &golds)?,
        ratio_r,
        size_s,
        n_examples: split.len(),
    })
}
