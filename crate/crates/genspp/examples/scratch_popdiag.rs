use genspp::datagen::{generate_toy_dataset, ToyConfig};
use genspp::evolution::{
    evaluate_individual, gaussian_mutate, half_elitism_survival, init_population,
    one_point_crossover, roulette_select, selection_weights, EvalContext, GAConfig,
    Individual,
};
use genspp::metrics::{selection_stats, token_f1};
use genspp::rationalizer::{GeneratorNet, RegularizerConfig};
use genspp::rng::{derive_seed, stream};
use rand::Rng;

fn eval_all(pop: &mut [Individual], ctx: &EvalContext, cfg: &GAConfig, g: u64, off: u64) {
    for (idx, ind) in pop.iter_mut().enumerate() {
        let seed = derive_seed(cfg.master_seed, &[0x12, g, off + idx as u64]);
        let (rep, pred) = evaluate_individual(&ind.genome, ctx, cfg, seed).unwrap();
        ind.report = Some(rep);
        ind.predictor = Some(pred);
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let master_seed: u64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(11);
    let generations: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(12);
    let pop_size: usize = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(20);
    let reevaluate: bool = args.get(4).map(|s| s == "1").unwrap_or(false);
    let sigma: f64 = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(0.05);
    let plain: bool = args.get(6).map(|s| s == "1").unwrap_or(false);
    let use_sgd: bool = args.get(7).map(|s| s == "sgd").unwrap_or(false);
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
    let inner = if use_sgd {
        genspp::rationalizer::InnerConfig {
            optimizer: genspp::rationalizer::InnerOptimizer::Sgd,
            lr: 0.1,
            momentum: 0.9,
            ..Default::default()
        }
    } else {
        genspp::rationalizer::InnerConfig::default()
    };
    let cfg = GAConfig {
        population_size: pop_size,
        generations,
        master_seed,
        reevaluate_survivors: reevaluate,
        mut_sigma: sigma,
        inner,
        ..Default::default()
    };
    let golds: Vec<Vec<u8>> =
        data.validation.iter().map(|ex| ex.gold_mask.clone().unwrap()).collect();
    let describe = |ind: &Individual| -> String {
        let gen = GeneratorNet::from_genome(8, emb.dim(), &ind.genome).unwrap();
        let masks = gen.masks(&emb, &data.validation).unwrap();
        let (r, s) = selection_stats(&masks);
        let f1 = token_f1(&masks, &golds).unwrap();
        let rep = ind.report.as_ref().unwrap();
        format!(
            "id {:3} b{:2} R {:6.2} S {:4.2} f1 {:5.1} l_t {:6.3} om {:.3} {} good {:.3}",
            ind.id,
            ind.birth_generation,
            r,
            s,
            f1,
            rep.l_t,
            rep.omega,
            if rep.feasible { "F" } else { "." },
            rep.goodness
        )
    };

    let shaped = |ind: &Individual| -> f64 {
        match &ind.report {
            Some(r) if r.feasible => r.goodness,
            Some(r) if !plain => 0.5 * (1.0 - r.l_t.min(1.0)),
            _ => 0.0,
        }
    };
    // running mean of shaped fitness draws per individual id
    let mut draws: std::collections::HashMap<u64, Vec<f64>> = std::collections::HashMap::new();
    let mean_fit = |draws: &std::collections::HashMap<u64, Vec<f64>>, ind: &Individual| -> f64 {
        let v = &draws[&ind.id];
        v.iter().sum::<f64>() / v.len() as f64
    };
    let i_count = cfg.population_size;
    let mut pop = init_population(&cfg, &ctx);
    let mut next_id = pop.iter().map(|i| i.id).max().unwrap() + 1;
    eval_all(&mut pop, &ctx, &cfg, 0, 0);
    for ind in &pop {
        draws.entry(ind.id).or_default().push(shaped(ind));
    }
    println!("== gen 0");
    for ind in &pop {
        println!("  {} m {:.3}", describe(ind), mean_fit(&draws, ind));
    }
    for g in 1..=cfg.generations as u64 {
        if cfg.reevaluate_survivors {
            eval_all(&mut pop, &ctx, &cfg, g, i_count as u64);
            for ind in &pop {
                draws.entry(ind.id).or_default().push(shaped(ind));
            }
        }
        let fitness: Vec<f64> = pop.iter().map(|i| mean_fit(&draws, i)).collect();
        let weights = selection_weights(&fitness);
        let mut ops_rng = stream(cfg.master_seed, &[0x11, g]);
        let draws = roulette_select(&weights, i_count, &mut ops_rng);
        let mut children: Vec<Individual> = Vec::with_capacity(i_count);
        for pair in draws.chunks(2) {
            let (pa, pb) = (&pop[pair[0]], &pop[pair[1]]);
            let (c1, c2) = if ops_rng.gen::<f64>() < cfg.p_cross {
                one_point_crossover(&pa.genome, &pb.genome, &mut ops_rng).unwrap()
            } else {
                (pa.genome.clone(), pb.genome.clone())
            };
            for c in [c1, c2] {
                children.push(Individual {
                    id: next_id,
                    genome: gaussian_mutate(&c, cfg.p_mut, cfg.mut_sigma, &mut ops_rng),
                    report: None,
                    birth_generation: g as usize,
                    predictor: None,
                });
                next_id += 1;
            }
        }
        eval_all(&mut children, &ctx, &cfg, g, 0);
        for ind in &children {
            draws.entry(ind.id).or_default().push(shaped(ind));
        }
        let mut combined = std::mem::take(&mut pop);
        combined.append(&mut children);
        let ids: Vec<u64> = combined.iter().map(|i| i.id).collect();
        let fitness: Vec<f64> = combined.iter().map(|i| mean_fit(&draws, i)).collect();
        let mut keep = half_elitism_survival(&ids, &fitness, i_count, &mut ops_rng).unwrap();
        keep.sort_unstable();
        let mut kept = Vec::with_capacity(i_count);
        for (pos, ind) in combined.into_iter().enumerate() {
            if keep.binary_search(&pos).is_ok() {
                kept.push(ind);
            }
        }
        pop = kept;
        println!("== gen {g}");
        for ind in &pop {
            println!("  {} m {:.3}", describe(ind), mean_fit(&draws, ind));
        }
    }
}
