//! genspp: interlocking-free selective rationalization trained by genetic
//! search.
//!
//! A generator network emits a hard binary mask over the input tokens and
//! a predictor classifies the masked sequence. Instead of differentiating
//! through the discrete mask, generator weights are evolved: each genome
//! is scored by training a small predictor from scratch on the masked
//! data, and a feasibility-gated fitness trades task loss against mask
//! sparsity and contiguity.
//!
//! Generate the synthetic benchmark and score a reference baseline:
//!
//! ```
//! use genspp::datagen::{generate_toy_dataset, ToyConfig};
//! use genspp::metrics::string_match_baseline;
//!
//! let cfg = ToyConfig { total: 300, ..Default::default() };
//! let data = generate_toy_dataset(&cfg, 0)?;
//! assert_eq!(data.train.len(), 192);
//!
//! let patterns: Vec<String> = cfg.class_highlights.clone();
//! let report = string_match_baseline(&patterns, &data.test, &data.vocab)?;
//! assert_eq!(report.hl_f1, 100.0);
//! # Ok::<(), genspp::Error>(())
//! ```
//!
//! Run a tiny end-to-end search:
//!
//! ```
//! use genspp::datagen::{generate_toy_dataset, ToyConfig};
//! use genspp::evolution::{run_ga, EvalContext, GAConfig};
//! use genspp::rationalizer::{InnerConfig, RegularizerConfig};
//!
//! let data = generate_toy_dataset(&ToyConfig { total: 120, ..Default::default() }, 0)?;
//! let emb = data.vocab.one_hot_embedding(25)?;
//! let ctx = EvalContext {
//!     emb: &emb,
//!     train: &data.train,
//!     fitness_split: &data.validation,
//!     reg: RegularizerConfig::default(),
//!     num_classes: 3,
//!     gen_hidden: 4,
//!     pred_hidden: 4,
//! };
//! let cfg = GAConfig {
//!     population_size: 4,
//!     generations: 1,
//!     tau: 5.0,
//!     inner: InnerConfig { epochs: 1, batch_size: 32, ..Default::default() },
//!     master_seed: 0,
//!     ..Default::default()
//! };
//! let (best, history) = run_ga(&cfg, &ctx)?;
//! assert!(best.report.unwrap().goodness >= 0.0);
//! assert_eq!(history.records.len(), 2);
//! # Ok::<(), genspp::Error>(())
//! ```

pub mod datagen;
pub mod error;
pub mod evolution;
pub mod metrics;
pub mod nn;
pub mod rationalizer;
pub mod rng;
pub mod runner;

pub use error::{Error, Result};
