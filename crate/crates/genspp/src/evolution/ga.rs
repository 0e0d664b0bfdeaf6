//! Population lifecycle of the genetic search (Algorithm 1): initialize,
//! evaluate, pair by roulette, one-point crossover, Gaussian mutation,
//! half-elitism survival, best-ever tracking and convergence patience.
//!
//! Reproducibility contract: all stochasticity flows from seeds derived
//! as hash(master_seed, stream, generation, index), so results do not
//! depend on evaluation order or thread count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fitness::{FitnessMode, FitnessReport};
use super::operators::{
    gaussian_mutate, half_elitism_survival, one_point_crossover, roulette_select,
    selection_weights, Genome,
};
use crate::error::{Error, Result};
use crate::rationalizer::{
    regularizer_omega, train_predictor_masked, Embedding, Example, GeneratorNet, InnerConfig,
    PredictorNet, RegularizerConfig,
};
use crate::rng::{derive_seed, stream};

const INIT_STREAM: u64 = 0x10;
const OPS_STREAM: u64 = 0x11;
const EVAL_STREAM: u64 = 0x12;
const SKEW_NOISE_STREAM: u64 = 0x13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GAConfig {
    pub population_size: usize,
    pub generations: usize,
    pub p_mut: f64,
    pub p_cross: f64,
    /// Selection rate; realized structurally as the I/2 pairs drawn for
    /// recombination.
    pub p_select: f64,
    /// Survival rate; realized structurally as the elitist I/2 kept.
    pub p_survive: f64,
    pub mut_sigma: f64,
    /// Feasibility threshold tau = l + eps.
    pub tau: f64,
    pub eps_hat: f64,
    pub inner: InnerConfig,
    pub master_seed: u64,
    /// Stop when best-ever goodness fails to improve by >1e-6 for this
    /// many generations.
    pub patience: usize,
    pub fitness_mode: FitnessMode,
    /// Re-score survivors with fresh predictors every generation instead
    /// of keeping the fitness report from their birth generation.
    pub reevaluate_survivors: bool,
}

impl Default for GAConfig {
    fn default() -> Self {
        GAConfig {
            population_size: 50,
            generations: 100,
            p_mut: 1.0,
            p_cross: 1.0,
            p_select: 0.5,
            p_survive: 0.5,
            mut_sigma: 0.05,
            tau: 0.1,
            eps_hat: 1e-8,
            inner: InnerConfig::default(),
            master_seed: 0,
            patience: 25,
            fitness_mode: FitnessMode::Goodness,
            reevaluate_survivors: false,
        }
    }
}

impl GAConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 || self.population_size % 2 != 0 {
            return Err(Error::Config("population size I must be even and >= 2".into()));
        }
        for (name, p) in [
            ("p_mut", self.p_mut),
            ("p_cross", self.p_cross),
            ("p_select", self.p_select),
            ("p_survive", self.p_survive),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must be in [0, 1]")));
            }
        }
        if self.mut_sigma <= 0.0 {
            return Err(Error::Config("mut_sigma must be > 0".into()));
        }
        if self.tau <= 0.0 {
            return Err(Error::Config("tau must be > 0".into()));
        }
        Ok(())
    }
}

/// Everything an individual evaluation needs besides its genome.
pub struct EvalContext<'a> {
    pub emb: &'a Embedding,
    pub train: &'a [Example],
    /// Split L_t and omega are measured on (validation by default).
    pub fitness_split: &'a [Example],
    pub reg: RegularizerConfig,
    pub num_classes: usize,
    pub gen_hidden: usize,
    pub pred_hidden: usize,
}

#[derive(Debug, Clone)]
pub struct Individual {
    pub id: u64,
    pub genome: Genome,
    pub report: Option<FitnessReport>,
    pub birth_generation: usize,
    /// Trained predictor from the evaluation, kept for test-time metrics.
    pub predictor: Option<PredictorNet>,
}

impl Individual {
    fn fitness(&self, mode: FitnessMode) -> f64 {
        self.report.map(|r| r.fitness(mode)).unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_goodness: f64,
    pub mean_goodness: f64,
    pub best_l_t: f64,
    pub best_omega: f64,
    pub best_id: u64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GAHistory {
    pub records: Vec<GenerationRecord>,
}

impl GAHistory {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "generation,best_goodness,mean_goodness,best_l_t,best_omega,best_id\n",
        );
        for r in &self.records {
            out.push_str(&format!(
                "{},{:.12},{:.12},{:.12},{:.12},{}\n",
                r.generation, r.best_goodness, r.mean_goodness, r.best_l_t, r.best_omega, r.best_id
            ));
        }
        out
    }
}

/// Random population of I unevaluated genomes drawn from the generator
/// init distribution.
pub fn init_population(cfg: &GAConfig, ctx: &EvalContext) -> Vec<Individual> {
    let mut rng = stream(cfg.master_seed, &[INIT_STREAM]);
    (0..cfg.population_size)
        .map(|i| Individual {
            id: i as u64,
            genome: GeneratorNet::init(ctx.gen_hidden, ctx.emb.dim(), &mut rng).to_genome(),
            report: None,
            birth_generation: 0,
            predictor: None,
        })
        .collect()
}

/// Skewed initialization modes for the recovery experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkewMode {
    /// Index 0 carries the skew genome bit-exactly, the rest are random.
    OneSkewed,
    /// Every individual is the skew genome plus N(0, sigma) noise.
    AllNoisy,
}

pub fn init_population_skewed(
    cfg: &GAConfig,
    ctx: &EvalContext,
    skew_genome: &Genome,
    mode: SkewMode,
) -> Vec<Individual> {
    match mode {
        SkewMode::OneSkewed => {
            let mut pop = init_population(cfg, ctx);
            pop[0].genome = skew_genome.clone();
            pop
        }
        SkewMode::AllNoisy => {
            let mut rng = stream(cfg.master_seed, &[SKEW_NOISE_STREAM]);
            (0..cfg.population_size)
                .map(|i| Individual {
                    id: i as u64,
                    genome: gaussian_mutate(skew_genome, 1.0, cfg.mut_sigma, &mut rng),
                    report: None,
                    birth_generation: 0,
                    predictor: None,
                })
                .collect()
        }
    }
}

/// Two-stage evaluation of one genome: decode the generator, train a
/// fresh predictor on the masked train split, then score the masked
/// fitness split.
pub fn evaluate_individual(
    genome: &Genome,
    ctx: &EvalContext,
    cfg: &GAConfig,
    seed: u64,
) -> Result<(FitnessReport, PredictorNet)> {
    let gen = GeneratorNet::from_genome(ctx.gen_hidden, ctx.emb.dim(), genome)?;
    let fit_masks = gen.masks(ctx.emb, ctx.fitness_split)?;
    let masked_fit: Vec<_> = ctx
        .fitness_split
        .iter()
        .zip(&fit_masks)
        .map(|(ex, m)| crate::rationalizer::training::mask_ids(ex, m))
        .collect::<Result<_>>()?;
    let masked_train = crate::rationalizer::training::masked_split(&gen, ctx.emb, ctx.train)?;
    let (pred, l_t) = train_predictor_masked(
        &masked_train,
        &masked_fit,
        ctx.emb,
        ctx.pred_hidden,
        ctx.num_classes,
        &cfg.inner,
        seed,
    )?;
    let mut omega = 0.0;
    for m in &fit_masks {
        omega += regularizer_omega(m, &ctx.reg)?;
    }
    omega /= fit_masks.len() as f64;
    Ok((FitnessReport::from_losses(l_t, omega, cfg.tau, cfg.eps_hat), pred))
}

fn evaluate_batch(
    individuals: &mut [Individual],
    ctx: &EvalContext,
    cfg: &GAConfig,
    generation: usize,
    idx_offset: usize,
) -> Result<()> {
    let results: Vec<Result<(FitnessReport, PredictorNet)>> = individuals
        .par_iter()
        .enumerate()
        .map(|(idx, ind)| {
            let seed = derive_seed(
                cfg.master_seed,
                &[EVAL_STREAM, generation as u64, (idx_offset + idx) as u64],
            );
            evaluate_individual(&ind.genome, ctx, cfg, seed)
        })
        .collect();
    for (ind, res) in individuals.iter_mut().zip(results) {
        let (report, pred) = res?;
        ind.report = Some(report);
        ind.predictor = Some(pred);
    }
    Ok(())
}

fn record_generation(history: &mut GAHistory, generation: usize, pop: &[Individual]) {
    let best = pop
        .iter()
        .max_by(|a, b| {
            let ga = a.report.map(|r| r.goodness).unwrap_or(0.0);
            let gb = b.report.map(|r| r.goodness).unwrap_or(0.0);
            ga.partial_cmp(&gb)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(b.id.cmp(&a.id))
        })
        .expect("non-empty population");
    let report = best.report.expect("evaluated");
    let mean = pop
        .iter()
        .map(|i| i.report.map(|r| r.goodness).unwrap_or(0.0))
        .sum::<f64>()
        / pop.len() as f64;
    history.records.push(GenerationRecord {
        generation,
        best_goodness: report.goodness,
        mean_goodness: mean,
        best_l_t: report.l_t,
        best_omega: report.omega,
        best_id: best.id,
    });
}

/// Full genetic search. Returns the best-ever individual (by goodness)
/// and the per-generation history.
pub fn run_ga(cfg: &GAConfig, ctx: &EvalContext) -> Result<(Individual, GAHistory)> {
    cfg.validate()?;
    if ctx.train.is_empty() || ctx.fitness_split.is_empty() {
        return Err(Error::Config("run_ga: empty data split".into()));
    }
    let i_count = cfg.population_size;
    let mut pop = init_population(cfg, ctx);
    run_ga_from(cfg, ctx, &mut pop, i_count)
}

/// Same as [`run_ga`] but starting from a caller-provided population
/// (used by the skew experiments).
pub fn run_ga_with_population(
    cfg: &GAConfig,
    ctx: &EvalContext,
    mut pop: Vec<Individual>,
) -> Result<(Individual, GAHistory)> {
    cfg.validate()?;
    if ctx.train.is_empty() || ctx.fitness_split.is_empty() {
        return Err(Error::Config("run_ga: empty data split".into()));
    }
    let i_count = cfg.population_size;
    if pop.len() != i_count {
        return Err(Error::Config("run_ga: population size mismatch".into()));
    }
    run_ga_from(cfg, ctx, &mut pop, i_count)
}

fn run_ga_from(
    cfg: &GAConfig,
    ctx: &EvalContext,
    pop: &mut Vec<Individual>,
    i_count: usize,
) -> Result<(Individual, GAHistory)> {
    let mut history = GAHistory::default();
    let mut next_id = pop.iter().map(|i| i.id).max().unwrap_or(0) + 1;

    evaluate_batch(pop, ctx, cfg, 0, 0)?;
    record_generation(&mut history, 0, pop);
    let mut best_ever = best_of(pop);
    let mut last_improvement = 0usize;

    for g in 1..=cfg.generations {
        if cfg.reevaluate_survivors {
            evaluate_batch(pop, ctx, cfg, g, i_count)?;
        }
        let fitness: Vec<f64> = pop.iter().map(|i| i.fitness(cfg.fitness_mode)).collect();
        let weights = selection_weights(&fitness);
        let mut ops_rng = stream(cfg.master_seed, &[OPS_STREAM, g as u64]);
        let draws = roulette_select(&weights, i_count, &mut ops_rng);

        let mut children: Vec<Individual> = Vec::with_capacity(i_count);
        for pair in draws.chunks(2) {
            let (pa, pb) = (&pop[pair[0]], &pop[pair[1]]);
            let (c1, c2) = if ops_rng.gen::<f64>() < cfg.p_cross {
                one_point_crossover(&pa.genome, &pb.genome, &mut ops_rng)?
            } else {
                (pa.genome.clone(), pb.genome.clone())
            };
            for c in [c1, c2] {
                children.push(Individual {
                    id: next_id,
                    genome: gaussian_mutate(&c, cfg.p_mut, cfg.mut_sigma, &mut ops_rng),
                    report: None,
                    birth_generation: g,
                    predictor: None,
                });
                next_id += 1;
            }
        }
        evaluate_batch(&mut children, ctx, cfg, g, 0)?;

        let mut combined = std::mem::take(pop);
        combined.append(&mut children);
        let ids: Vec<u64> = combined.iter().map(|i| i.id).collect();
        let fitness: Vec<f64> = combined
            .iter()
            .map(|i| i.fitness(cfg.fitness_mode))
            .collect();
        let mut keep = half_elitism_survival(&ids, &fitness, i_count, &mut ops_rng)?;
        keep.sort_unstable();
        let mut kept = Vec::with_capacity(i_count);
        for (pos, ind) in combined.into_iter().enumerate() {
            if keep.binary_search(&pos).is_ok() {
                kept.push(ind);
            }
        }
        *pop = kept;

        record_generation(&mut history, g, pop);
        let gen_best = best_of(pop);
        let prev = best_ever.report.map(|r| r.goodness).unwrap_or(0.0);
        let cur = gen_best.report.map(|r| r.goodness).unwrap_or(0.0);
        if cur > prev + 1e-6 {
            best_ever = gen_best;
            last_improvement = g;
        } else if cur > prev {
            best_ever = gen_best;
        }
        if g - last_improvement >= cfg.patience {
            break;
        }
    }
    Ok((best_ever, history))
}

fn best_of(pop: &[Individual]) -> Individual {
    pop.iter()
        .max_by(|a, b| {
            let ga = a.report.map(|r| r.goodness).unwrap_or(0.0);
            let gb = b.report.map(|r| r.goodness).unwrap_or(0.0);
            ga.partial_cmp(&gb)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(b.id.cmp(&a.id))
        })
        .expect("non-empty population")
        .clone()
}
