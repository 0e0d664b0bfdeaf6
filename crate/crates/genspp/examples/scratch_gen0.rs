use genspp::datagen::{generate_toy_dataset, ToyConfig};
use genspp::evolution::{evaluate_individual, init_population, EvalContext, GAConfig};
use genspp::metrics::{selection_stats, token_f1};
use genspp::rationalizer::{GeneratorNet, RegularizerConfig};
use genspp::rng::derive_seed;

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
    let cfg = GAConfig {
        population_size: 20,
        generations: 30,
        master_seed: 11,
        ..Default::default()
    };
    let pop = init_population(&cfg, &ctx);
    let golds: Vec<Vec<u8>> = data
        .validation
        .iter()
        .map(|ex| ex.gold_mask.clone().unwrap())
        .collect();
    for (idx, ind) in pop.iter().enumerate() {
        let seed = derive_seed(cfg.master_seed, &[0x12, 0, idx as u64]);
        let (rep, _) = evaluate_individual(&ind.genome, &ctx, &cfg, seed).unwrap();
        let gen = GeneratorNet::from_genome(8, emb.dim(), &ind.genome).unwrap();
        let masks = gen.masks(&emb, &data.validation).unwrap();
        let (r, s) = selection_stats(&masks);
        let f1 = token_f1(&masks, &golds).unwrap();
        // mask variability: number of distinct masks in validation
        let distinct: std::collections::HashSet<_> = masks.iter().collect();
        println!(
            "ind {idx:2} R {r:6.2} S {s:5.2} distinct {:4} hl_f1 {f1:6.2} l_t {:.4} omega {:.4} good {:.4} feas {}",
            distinct.len(),
            rep.l_t,
            rep.omega,
            rep.goodness,
            rep.feasible
        );
    }
}
