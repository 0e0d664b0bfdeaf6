use genspp::datagen::{generate_toy_dataset, ToyConfig};
use genspp::evolution::{evaluate_individual, gaussian_mutate, run_ga, EvalContext, GAConfig};
use genspp::metrics::selection_stats;
use genspp::rationalizer::{GeneratorNet, RegularizerConfig};
use genspp::rng::stream;

fn main() {
    let data = generate_toy_dataset(&ToyConfig::default(), 0).unwrap();
    let emb = data.vocab.one_hot_embedding(25).unwrap();
    let ctx = EvalContext {
        emb: &emb,
        train: &data.train,
        fitness_split: &data.validation,
        reg: RegularizerConfig::default(),
        num_classes: 3,
        gen_hidden: 8,
        pred_hidden: 8,
    };
    let cfg = GAConfig { population_size: 20, generations: 30, master_seed: 11, ..Default::default() };
    let (best, _) = run_ga(&cfg, &ctx).unwrap();
    let rep = best.report.unwrap();
    println!("plateau best: goodness {:.4} l_t {:.4} omega {:.4}", rep.goodness, rep.l_t, rep.omega);

    // head logit distribution over the validation split
    let gen = GeneratorNet::from_genome(8, emb.dim(), &best.genome).unwrap();
    let proj_stats = {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut n = 0usize;
        let mut below = [0usize; 4]; // logit < 0.05, 0.1, 0.2, 0.5
        for ex in &data.validation {
            let logits = gen_logits(&gen, &emb, &ex.tokens);
            for l in logits {
                lo = lo.min(l);
                hi = hi.max(l);
                sum += l;
                sumsq += l * l;
                n += 1;
                for (i, th) in [0.05, 0.1, 0.2, 0.5].iter().enumerate() {
                    if l < *th {
                        below[i] += 1;
                    }
                }
            }
        }
        let mean = sum / n as f64;
        let std = (sumsq / n as f64 - mean * mean).sqrt();
        (lo, hi, mean, std, below, n)
    };
    println!(
        "logits: min {:.3} max {:.3} mean {:.3} std {:.3}; frac < 0.05/0.1/0.2/0.5 = {:.3}/{:.3}/{:.3}/{:.3}",
        proj_stats.0,
        proj_stats.1,
        proj_stats.2,
        proj_stats.3,
        proj_stats.4[0] as f64 / proj_stats.5 as f64,
        proj_stats.4[1] as f64 / proj_stats.5 as f64,
        proj_stats.4[2] as f64 / proj_stats.5 as f64,
        proj_stats.4[3] as f64 / proj_stats.5 as f64,
    );

    let base_masks = gen.masks(&emb, &data.validation).unwrap();

    // one-step mutation ensemble from the plateau genome
    let mut rng = stream(777, &[1]);
    let mut changed = 0usize;
    let mut best_good = 0.0f64;
    let mut feas = 0usize;
    let mut beat = 0usize;
    let trials = 60;
    for k in 0..trials {
        let child = gaussian_mutate(&best.genome, 1.0, cfg.mut_sigma, &mut rng);
        let cg = GeneratorNet::from_genome(8, emb.dim(), &child).unwrap();
        let masks = cg.masks(&emb, &data.validation).unwrap();
        if masks == base_masks {
            continue;
        }
        changed += 1;
        let (r, _) = selection_stats(&masks);
        let (crep, _) = evaluate_individual(&child, &ctx, &cfg, 10_000 + k as u64).unwrap();
        if crep.feasible {
            feas += 1;
        }
        if crep.goodness > rep.goodness {
            beat += 1;
            println!("  escape: R {:.1} l_t {:.4} omega {:.4} goodness {:.4}", r, crep.l_t, crep.omega, crep.goodness);
        }
        best_good = best_good.max(crep.goodness);
    }
    println!(
        "one-step mutants: {trials} tried, {changed} changed masks, {feas} feasible, {beat} beat plateau, best goodness {best_good:.4}"
    );

    // neutral drift: 50 unselected steps, report mask rate drift
    let mut g = best.genome.clone();
    for step in 1..=50 {
        g = gaussian_mutate(&g, 1.0, cfg.mut_sigma, &mut rng);
        if step % 10 == 0 {
            let cg = GeneratorNet::from_genome(8, emb.dim(), &g).unwrap();
            let masks = cg.masks(&emb, &data.validation).unwrap();
            let (r, s) = selection_stats(&masks);
            let diff: usize = masks
                .iter()
                .zip(&base_masks)
                .map(|(a, b)| a.iter().zip(b.iter()).filter(|(x, y)| x != y).count())
                .sum();
            println!("drift step {step}: R {r:.1} S {s:.2} changed-positions {diff}");
        }
    }
}

fn gen_logits(
    gen: &GeneratorNet,
    emb: &genspp::rationalizer::Embedding,
    tokens: &[u32],
) -> Vec<f64> {
    let proj = gen.gru.project_vocab(emb.rows());
    let h0 = vec![0.0; gen.hidden()];
    let ids: Vec<Option<u32>> = tokens.iter().map(|&t| Some(t)).collect();
    let trace = gen.gru.forward_ids(&proj, &ids, &h0);
    trace.h.iter().map(|h| gen.head.forward(h)[0]).collect()
}
