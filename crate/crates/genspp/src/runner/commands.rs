//! Experiment commands: dataset generation, the seeded evolutionary runs,
//! skewed-initialization runs, the string-matching baselines, and the
//! objective-landscape export.
//!
//! All numeric outputs (JSON records, CSV histories, summaries) are
//! deterministic for a fixed config; wall-clock timings go to a separate
//! plain-text sidecar that carries no experimental results.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{DatasetSource, ExperimentConfig};
use crate::datagen::{
    generate_toy_dataset, load_jsonl, save_jsonl, write_atomic, DatasetSplits, ToyConfig,
};
use crate::error::{Error, Result};
use crate::evolution::{
    init_population_skewed, run_ga, run_ga_with_population, skew_pretrain_genome, EvalContext,
    FitnessReport, GAHistory, Individual, SkewMode,
};
use crate::metrics::{macro_f1, selection_stats, string_match_baseline, token_f1, MetricsReport};
use crate::rationalizer::{mask_ids, Embedding, Example, GeneratorNet};

const SKEW_PRETRAIN_STREAM: u64 = 0x30;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub config_hash: String,
    pub metrics: MetricsReport,
    pub best: FitnessReport,
    pub best_generation: usize,
    pub generations_run: usize,
    pub history_file: String,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryStat {
    pub mean: f64,
    pub std: f64,
}

fn stat(values: &[f64]) -> SummaryStat {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    SummaryStat {
        mean,
        std: var.sqrt(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub clf_f1: SummaryStat,
    pub hl_f1: SummaryStat,
    pub ratio_r: SummaryStat,
    pub size_s: SummaryStat,
}

pub fn summarize(config_hash: &str, records: &[RunRecord]) -> Summary {
    let pick = |f: fn(&MetricsReport) -> f64| -> Vec<f64> {
        records.iter().map(|r| f(&r.metrics)).collect()
    };
    Summary {
        config_hash: config_hash.to_string(),
        seeds: records.iter().map(|r| r.seed).collect(),
        clf_f1: stat(&pick(|m| m.clf_f1)),
        hl_f1: stat(&pick(|m| m.hl_f1)),
        ratio_r: stat(&pick(|m| m.ratio_r)),
        size_s: stat(&pick(|m| m.size_s)),
    }
}

pub fn resolve_dataset(cfg: &ExperimentConfig) -> Result<DatasetSplits> {
    match cfg.dataset.source {
        DatasetSource::GenerateToy => {
            let toy = cfg.dataset.toy.clone().unwrap_or_default();
            generate_toy_dataset(&toy, cfg.dataset.seed)
        }
        DatasetSource::Load => {
            let path = cfg.dataset.path.as_ref().expect("validated");
            load_jsonl(path)
        }
    }
}

pub fn embedding_for(cfg: &ExperimentConfig, splits: &DatasetSplits) -> Result<Embedding> {
    match cfg.model.emb_type.as_str() {
        "one_hot" => splits.vocab.one_hot_embedding(cfg.model.emb_dim),
        other => Err(Error::Config(format!(
            "unsupported emb_type {other:?}; expected \"one_hot\""
        ))),
    }
}

/// Test-split metrics of a finished run: the best generator masks the
/// input, its trained predictor classifies the masked sequences.
pub fn evaluate_individual_on(
    best: &Individual,
    cfg: &ExperimentConfig,
    emb: &Embedding,
    split: &[Example],
) -> Result<MetricsReport> {
    let gen = GeneratorNet::from_genome(cfg.model.hidden_size, emb.dim(), &best.genome)?;
    let pred = best
        .predictor
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("best individual was never evaluated".into()))?;
    let masks = gen.masks(emb, split)?;
    let proj = pred.project(emb);
    let mut preds = Vec::with_capacity(split.len());
    for (ex, m) in split.iter().zip(&masks) {
        let (ids, _) = mask_ids(ex, m)?;
        preds.push(pred.predict(&proj, &ids)?);
    }
    let labels: Vec<usize> = split.iter().map(|ex| ex.label).collect();
    let clf_f1 = macro_f1(&preds, &labels, cfg.model.num_classes)?;
    let mut pred_masks = Vec::new();
    let mut gold_masks = Vec::new();
    for (ex, m) in split.iter().zip(&masks) {
        if let Some(g) = &ex.gold_mask {
            pred_masks.push(m.clone());
            gold_masks.push(g.clone());
        }
    }
    let hl_f1 = if gold_masks.is_empty() {
        0.0
    } else {
        token_f1(&pred_masks, &gold_masks)?
    };
    let (ratio_r, size_s) = selection_stats(&masks);
    Ok(MetricsReport {
        clf_f1,
        hl_f1,
        ratio_r,
        size_s,
        n_examples: split.len(),
    })
}

fn eval_context<'a>(
    cfg: &ExperimentConfig,
    emb: &'a Embedding,
    splits: &'a DatasetSplits,
) -> EvalContext<'a> {
    EvalContext {
        emb,
        train: &splits.train,
        fitness_split: &splits.validation,
        reg: cfg.regularizer,
        num_classes: cfg.model.num_classes,
        gen_hidden: cfg.model.hidden_size,
        pred_hidden: cfg.model.hidden_size,
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("serialize {}: {e}", path.display())))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

fn finish_run(
    cfg: &ExperimentConfig,
    seed: u64,
    best: &Individual,
    history: &GAHistory,
    emb: &Embedding,
    splits: &DatasetSplits,
    started: Instant,
) -> Result<RunRecord> {
    let metrics = evaluate_individual_on(best, cfg, emb, &splits.test)?;
    let history_file = format!("history_seed{seed}.csv");
    std::fs::create_dir_all(&cfg.out_dir)?;
    write_atomic(&cfg.out_dir.join(&history_file), history.to_csv().as_bytes())?;
    let record = RunRecord {
        seed,
        config_hash: cfg.hash(),
        metrics,
        best: best.report.expect("best individual is evaluated"),
        best_generation: best.birth_generation,
        generations_run: history.records.len().saturating_sub(1),
        history_file,
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    write_json(&cfg.out_dir.join(format!("run_seed{seed}.json")), &record)?;
    Ok(record)
}

fn write_outputs(cfg: &ExperimentConfig, records: &[RunRecord]) -> Result<Summary> {
    let summary = summarize(&cfg.hash(), records);
    write_json(&cfg.out_dir.join("summary.json"), &summary)?;
    write_json(&cfg.out_dir.join("config.json"), cfg)?;
    let mut timings = String::new();
    for r in records {
        timings.push_str(&format!("seed {}: {:.1} s\n", r.seed, r.wall_time_secs));
    }
    write_atomic(&cfg.out_dir.join("timings.txt"), timings.as_bytes())?;
    Ok(summary)
}

/// Benchmark recipe: one full genetic search per seed, test-split
/// evaluation of each best individual, aggregate summary.
pub fn cmd_evolve(cfg: &ExperimentConfig) -> Result<(Vec<RunRecord>, Summary)> {
    cfg.validate()?;
    let splits = resolve_dataset(cfg)?;
    let emb = embedding_for(cfg, &splits)?;
    let ctx = eval_context(cfg, &emb, &splits);
    let mut records = Vec::with_capacity(cfg.seeds.len());
    for &seed in &cfg.seeds {
        let started = Instant::now();
        let (best, history) = run_ga(&cfg.ga_config(seed), &ctx)?;
        records.push(finish_run(cfg, seed, &best, &history, &emb, &splits, started)?);
    }
    let summary = write_outputs(cfg, &records)?;
    Ok((records, summary))
}

/// Skewed-initialization recipe: pretrain a generator toward the
/// first-token mask for `k` epochs, seed the population with it per
/// `mode`, then run the search as usual.
pub fn cmd_skew(
    cfg: &ExperimentConfig,
    k: usize,
    mode: SkewMode,
) -> Result<(Vec<RunRecord>, Summary)> {
    cfg.validate()?;
    let splits = resolve_dataset(cfg)?;
    let emb = embedding_for(cfg, &splits)?;
    let ctx = eval_context(cfg, &emb, &splits);
    let mut records = Vec::with_capacity(cfg.seeds.len());
    for &seed in &cfg.seeds {
        let started = Instant::now();
        let skew_seed = crate::rng::derive_seed(seed, &[SKEW_PRETRAIN_STREAM]);
        let (genome, _) =
            skew_pretrain_genome(&emb, &splits.train, cfg.model.hidden_size, k, skew_seed)?;
        let ga_cfg = cfg.ga_config(seed);
        let pop = init_population_skewed(&ga_cfg, &ctx, &genome, mode);
        let (best, history) = run_ga_with_population(&ga_cfg, &ctx, pop)?;
        records.push(finish_run(cfg, seed, &best, &history, &emb, &splits, started)?);
    }
    let summary = write_outputs(cfg, &records)?;
    Ok((records, summary))
}

/// Dataset files for the synthetic benchmark.
pub fn cmd_gen_data(toy: &ToyConfig, seed: u64, out: &Path) -> Result<DatasetSplits> {
    let splits = generate_toy_dataset(toy, seed)?;
    save_jsonl(&splits, out)?;
    Ok(splits)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaselineRow {
    pub name: String,
    pub patterns: Vec<String>,
    pub hl_f1: f64,
}

/// The three reference pattern maps: the true highlights, the swapped
/// assignment, and highlight bigrams.
pub fn baseline_maps(toy: &ToyConfig) -> Vec<(String, Vec<String>)> {
    let correct = toy.class_highlights.clone();
    let mut swapped = correct.clone();
    swapped.reverse();
    let bigrams: Vec<String> = correct
        .iter()
        .map(|h| h.chars().skip(1).collect())
        .collect();
    vec![
        ("correct".into(), correct),
        ("swapped".into(), swapped),
        ("bigram".into(), bigrams),
    ]
}

pub fn cmd_baseline(toy: &ToyConfig, seed: u64, out: Option<&Path>) -> Result<Vec<BaselineRow>> {
    let splits = generate_toy_dataset(toy, seed)?;
    let mut rows = Vec::new();
    for (name, patterns) in baseline_maps(toy) {
        let report = string_match_baseline(&patterns, &splits.test, &splits.vocab)?;
        rows.push(BaselineRow {
            name,
            patterns,
            hl_f1: report.hl_f1,
        });
    }
    if let Some(path) = out {
        let mut csv = String::from("name,patterns,hl_f1\n");
        for r in &rows {
            csv.push_str(&format!("{},{},{:.4}\n", r.name, r.patterns.join("|"), r.hl_f1));
        }
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        write_atomic(path, csv.as_bytes())?;
    }
    Ok(rows)
}

pub fn cmd_landscape(resolution: usize, out: &Path) -> Result<PathBuf> {
    let rows = crate::metrics::loss_landscape_grid(resolution)?;
    let csv = crate::metrics::landscape_csv(&rows);
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_atomic(out, csv.as_bytes())?;
    Ok(out.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::config::DatasetSection;

    fn smoke_config(dir: &Path) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.out_dir = dir.to_path_buf();
        cfg.seeds = vec![0];
        cfg.dataset = DatasetSection {
            source: DatasetSource::GenerateToy,
            path: None,
            toy: Some(ToyConfig {
                total: 120,
                ..Default::default()
            }),
            seed: 0,
        };
        cfg.model.hidden_size = 4;
        cfg.ga.population_size = 4;
        cfg.ga.generations = 0;
        cfg.ga.tau = 5.0;
        cfg.inner.epochs = 1;
        cfg
    }

    #[test]
    fn evolve_smoke_emits_all_files() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = smoke_config(dir.path());
        let (records, summary) = cmd_evolve(&cfg).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(summary.seeds, vec![0]);
        for name in [
            "run_seed0.json",
            "history_seed0.csv",
            "summary.json",
            "config.json",
            "timings.txt",
        ] {
            assert!(dir.path().join(name).exists(), "{name} missing");
        }
        assert_eq!(records[0].config_hash, cfg.hash());
    }

    #[test]
    fn evolve_reruns_byte_identical() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let mut cfg_a = smoke_config(dir_a.path());
        cfg_a.ga.generations = 1;
        let mut cfg_b = cfg_a.clone();
        cfg_b.out_dir = dir_b.path().to_path_buf();
        cmd_evolve(&cfg_a).unwrap();
        cmd_evolve(&cfg_b).unwrap();
        for name in ["run_seed0.json", "history_seed0.csv", "summary.json"] {
            let a = std::fs::read(dir_a.path().join(name)).unwrap();
            let b = std::fs::read(dir_b.path().join(name)).unwrap();
            assert_eq!(a, b, "{name} differs");
        }
    }

    #[test]
    fn summary_matches_recomputation() {
        let r = |seed: u64, clf: f64| RunRecord {
            seed,
            config_hash: "x".into(),
            metrics: MetricsReport {
                clf_f1: clf,
                hl_f1: 2.0 * clf,
                ratio_r: 10.0,
                size_s: 2.0,
                n_examples: 5,
            },
            best: FitnessReport::from_losses(0.05, 0.1, 0.2, 1e-8),
            best_generation: 0,
            generations_run: 0,
            history_file: "h.csv".into(),
            wall_time_secs: 0.0,
        };
        let records = vec![r(0, 90.0), r(1, 94.0)];
        let s = summarize("x", &records);
        assert!((s.clf_f1.mean - 92.0).abs() < 1e-12);
        assert!((s.clf_f1.std - 2.0).abs() < 1e-12);
        assert!((s.hl_f1.mean - 184.0).abs() < 1e-12);
    }

    #[test]
    fn baseline_maps_shapes() {
        let toy = ToyConfig::default();
        let maps = baseline_maps(&toy);
        assert_eq!(maps[0].1, vec!["aba", "baa", "abc"]);
        assert_eq!(maps[1].1, vec!["abc", "baa", "aba"]);
        assert_eq!(maps[2].1, vec!["ba", "aa", "bc"]);
    }

    #[test]
    fn landscape_command_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("grid.csv");
        cmd_landscape(11, &out).unwrap();
        let a = std::fs::read(&out).unwrap();
        cmd_landscape(11, &out).unwrap();
        assert_eq!(a, std::fs::read(&out).unwrap());
        assert_eq!(a.iter().filter(|&&b| b == b'\n').count(), 122);
    }
}
