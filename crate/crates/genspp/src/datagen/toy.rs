//! Synthetic highlight-classification dataset: random strings stamped
//! with exactly one class highlight and contaminated with short chunks
//! of the highlight patterns.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Vocab;
use crate::error::{Error, Result};
use crate::rationalizer::Example;
use crate::rng::stream;

const TOY_STREAM: u64 = 0x20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contamination {
    pub min_chunks: usize,
    pub max_chunks: usize,
    pub chunk_len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyConfig {
    /// Class c is defined by class_highlights[c] occurring exactly once.
    pub class_highlights: Vec<String>,
    pub string_len: usize,
    pub total: usize,
    pub split_fractions: (f64, f64, f64),
    pub alphabet: Vec<char>,
    pub contamination: Contamination,
    pub max_attempts: usize,
}

impl Default for ToyConfig {
    fn default() -> Self {
        ToyConfig {
            class_highlights: vec!["aba".into(), "baa".into(), "abc".into()],
            string_len: 20,
            total: 10_000,
            split_fractions: (0.64, 0.16, 0.20),
            alphabet: vec!['a', 'b', 'c'],
            contamination: Contamination {
                min_chunks: 3,
                max_chunks: 4,
                chunk_len: 2,
            },
            max_attempts: 1000,
        }
    }
}

impl ToyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.class_highlights.is_empty() {
            return Err(Error::Config("at least one class highlight required".into()));
        }
        let shortest = self
            .class_highlights
            .iter()
            .map(|h| h.chars().count())
            .min()
            .unwrap();
        if shortest == 0 {
            return Err(Error::Config("highlights must be non-empty".into()));
        }
        for h in &self.class_highlights {
            if h.chars().count() > self.string_len {
                return Err(Error::Config(format!(
                    "highlight {h:?} longer than string_len {}",
                    self.string_len
                )));
            }
            if let Some(ch) = h.chars().find(|c| !self.alphabet.contains(c)) {
                return Err(Error::Config(format!(
                    "highlight {h:?} uses {ch:?} outside the alphabet"
                )));
            }
        }
        let (a, b, c) = self.split_fractions;
        if (a + b + c - 1.0).abs() > 1e-9 || a <= 0.0 || b <= 0.0 || c <= 0.0 {
            return Err(Error::Config("split fractions must be positive and sum to 1".into()));
        }
        if self.contamination.chunk_len >= shortest {
            return Err(Error::Config(
                "contamination chunk_len must be shorter than every highlight".into(),
            ));
        }
        if self.contamination.min_chunks > self.contamination.max_chunks {
            return Err(Error::Config("contamination min_chunks > max_chunks".into()));
        }
        if self.alphabet.is_empty() {
            return Err(Error::Config("alphabet must be non-empty".into()));
        }
        if self.max_attempts == 0 {
            return Err(Error::Config("max_attempts must be >= 1".into()));
        }
        Ok(())
    }

    pub fn vocab(&self) -> Vocab {
        Vocab::new(self.alphabet.iter().map(|c| c.to_string()).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSplits {
    pub train: Vec<Example>,
    pub validation: Vec<Example>,
    pub test: Vec<Example>,
    pub vocab: Vocab,
}

impl DatasetSplits {
    pub fn splits(&self) -> [(&str, &[Example]); 3] {
        [
            ("train", &self.train),
            ("validation", &self.validation),
            ("test", &self.test),
        ]
    }
}

/// Number of (possibly overlapping) occurrences of `pat` in `s`.
fn count_occurrences(s: &[char], pat: &[char]) -> usize {
    if pat.is_empty() || pat.len() > s.len() {
        return 0;
    }
    s.windows(pat.len()).filter(|w| *w == pat).count()
}

fn accepts(s: &[char], class: usize, highlights: &[Vec<char>]) -> bool {
    highlights.iter().enumerate().all(|(c, h)| {
        let want = usize::from(c == class);
        count_occurrences(s, h) == want
    })
}

/// All length-`chunk_len` substrings of the highlight patterns. Chunks
/// are drawn from every class, so their distribution carries no label
/// information; the post-write rescan keeps them from completing a
/// second highlight.
fn contamination_chunks(highlights: &[Vec<char>], chunk_len: usize) -> Vec<Vec<char>> {
    let mut out = Vec::new();
    for h in highlights {
        for w in h.windows(chunk_len) {
            out.push(w.to_vec());
        }
    }
    out
}

fn sample_string(
    cfg: &ToyConfig,
    highlights: &[Vec<char>],
    class: usize,
    rng: &mut impl Rng,
) -> Option<(Vec<char>, usize)> {
    let n = cfg.string_len;
    let h = &highlights[class];
    let mut s: Vec<char> = (0..n)
        .map(|_| cfg.alphabet[rng.gen_range(0..cfg.alphabet.len())])
        .collect();
    let pos = rng.gen_range(0..=n - h.len());
    s[pos..pos + h.len()].copy_from_slice(h);

    let chunks = contamination_chunks(highlights, cfg.contamination.chunk_len);
    if !chunks.is_empty() {
        let k = rng.gen_range(cfg.contamination.min_chunks..=cfg.contamination.max_chunks);
        let mut occupied = vec![(pos, pos + h.len())];
        for _ in 0..k {
            let chunk = &chunks[rng.gen_range(0..chunks.len())];
            let mut placed = false;
            for _ in 0..50 {
                let p = rng.gen_range(0..=n - chunk.len());
                let span = (p, p + chunk.len());
                if occupied.iter().all(|&(a, b)| span.1 <= a || span.0 >= b) {
                    s[span.0..span.1].copy_from_slice(chunk);
                    occupied.push(span);
                    placed = true;
                    break;
                }
            }
            if !placed {
                return None;
            }
        }
    }
    if accepts(&s, class, highlights) {
        Some((s, pos))
    } else {
        None
    }
}

/// Deterministic toy dataset: classes are assigned round-robin so every
/// contiguous split stays balanced within one example per class; exact
/// duplicate strings are rejected globally so the splits share nothing.
pub fn generate_toy_dataset(cfg: &ToyConfig, seed: u64) -> Result<DatasetSplits> {
    cfg.validate()?;
    let highlights: Vec<Vec<char>> = cfg
        .class_highlights
        .iter()
        .map(|h| h.chars().collect())
        .collect();
    let vocab = cfg.vocab();
    let mut rng = stream(seed, &[TOY_STREAM]);
    let mut seen = std::collections::HashSet::new();
    let mut examples = Vec::with_capacity(cfg.total);

    for i in 0..cfg.total {
        let class = i % highlights.len();
        let mut found = None;
        for _ in 0..cfg.max_attempts {
            if let Some((s, pos)) = sample_string(cfg, &highlights, class, &mut rng) {
                if seen.insert(s.clone()) {
                    found = Some((s, pos));
                    break;
                }
            }
        }
        let (s, pos) = found.ok_or_else(|| Error::Generation {
            class,
            msg: format!("no valid string after {} attempts", cfg.max_attempts),
        })?;
        let tokens: Vec<u32> = s
            .iter()
            .map(|c| vocab.id(&c.to_string()).expect("alphabet covers string"))
            .collect();
        let mut gold = vec![0u8; cfg.string_len];
        for g in gold[pos..pos + highlights[class].len()].iter_mut() {
            *g = 1;
        }
        examples.push(Example {
            tokens,
            label: class,
            gold_mask: Some(gold),
        });
    }

    let n_train = (cfg.total as f64 * cfg.split_fractions.0).round() as usize;
    let n_val = (cfg.total as f64 * cfg.split_fractions.1).round() as usize;
    let test = examples.split_off(n_train + n_val);
    let validation = examples.split_off(n_train);
    Ok(DatasetSplits {
        train: examples,
        validation,
        test,
        vocab,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ToyConfig {
        ToyConfig {
            total: 300,
            ..Default::default()
        }
    }

    #[test]
    fn default_config_is_valid() {
        assert!(ToyConfig::default().validate().is_ok());
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut c = ToyConfig::default();
        c.string_len = 2;
        assert!(c.validate().is_err());
        let mut c = ToyConfig::default();
        c.split_fractions = (0.5, 0.5, 0.5);
        assert!(c.validate().is_err());
        let mut c = ToyConfig::default();
        c.contamination.chunk_len = 3;
        assert!(c.validate().is_err());
        let mut c = ToyConfig::default();
        c.class_highlights = vec!["abz".into(), "baa".into()];
        assert!(c.validate().is_err());
    }

    #[test]
    fn acceptance_rules_hold_on_every_example() {
        let cfg = small_cfg();
        let ds = generate_toy_dataset(&cfg, 1).unwrap();
        let highlights: Vec<Vec<char>> = cfg
            .class_highlights
            .iter()
            .map(|h| h.chars().collect())
            .collect();
        for (_, split) in ds.splits() {
            for ex in split {
                let s: Vec<char> = ex
                    .tokens
                    .iter()
                    .map(|&t| ds.vocab.token(t).unwrap().chars().next().unwrap())
                    .collect();
                for (c, h) in highlights.iter().enumerate() {
                    let want = usize::from(c == ex.label);
                    assert_eq!(count_occurrences(&s, h), want, "class {c} in {s:?}");
                }
                let gold = ex.gold_mask.as_ref().unwrap();
                assert_eq!(gold.iter().map(|&v| v as usize).sum::<usize>(), 3);
                let first = gold.iter().position(|&v| v == 1).unwrap();
                assert!(gold[first..first + 3].iter().all(|&v| v == 1));
                // gold marks an occurrence of the class highlight
                assert_eq!(&s[first..first + 3], highlights[ex.label].as_slice());
            }
        }
    }

    #[test]
    fn split_sizes_and_class_balance() {
        let ds = generate_toy_dataset(&ToyConfig::default(), 2).unwrap();
        assert_eq!(ds.train.len(), 6400);
        assert_eq!(ds.validation.len(), 1600);
        assert_eq!(ds.test.len(), 2000);
        for (_, split) in ds.splits() {
            let mut counts = [0usize; 3];
            for ex in split {
                counts[ex.label] += 1;
            }
            let lo = *counts.iter().min().unwrap();
            let hi = *counts.iter().max().unwrap();
            assert!(hi - lo <= 1, "counts {counts:?}");
        }
    }

    #[test]
    fn no_duplicate_strings_across_splits() {
        let ds = generate_toy_dataset(&small_cfg(), 3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for (_, split) in ds.splits() {
            for ex in split {
                assert!(seen.insert(ex.tokens.clone()));
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = small_cfg();
        let a = generate_toy_dataset(&cfg, 7).unwrap();
        let b = generate_toy_dataset(&cfg, 7).unwrap();
        assert_eq!(a, b);
        let c = generate_toy_dataset(&cfg, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn overlapping_occurrences_are_counted() {
        let s: Vec<char> = "aaaa".chars().collect();
        let p: Vec<char> = "aa".chars().collect();
        assert_eq!(count_occurrences(&s, &p), 3);
    }
}
