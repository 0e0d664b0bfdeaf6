use genspp::datagen::{generate_toy_dataset, ToyConfig};
use genspp::evolution::{evaluate_individual, EvalContext, GAConfig};
use genspp::metrics::{selection_stats, token_f1};
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
    let cfg = GAConfig { population_size: 20, master_seed: 11, ..Default::default() };
    let golds: Vec<Vec<u8>> = data
        .validation
        .iter()
        .map(|ex| ex.gold_mask.clone().unwrap())
        .collect();
    for scale in [1.0f64, 2.0, 4.0, 8.0] {
        println!("== init scale x{scale}");
        let mut rng = stream(11, &[0x99]);
        for idx in 0..20u64 {
            let mut genome = GeneratorNet::init(8, emb.dim(), &mut rng).to_genome();
            for g in genome.iter_mut() {
                *g *= scale;
            }
            let gen = GeneratorNet::from_genome(8, emb.dim(), &genome).unwrap();
            let masks = gen.masks(&emb, &data.validation).unwrap();
            let (r, _) = selection_stats(&masks);
            let f1 = token_f1(&masks, &golds).unwrap();
            // two eval seeds to see coin reliability
            let (rep1, _) = evaluate_individual(&genome, &ctx, &cfg, 5000 + idx).unwrap();
            let (rep2, _) = evaluate_individual(&genome, &ctx, &cfg, 6000 + idx).unwrap();
            if rep1.feasible || rep2.feasible || idx < 6 {
                println!(
                    "  ind {idx:2} R {r:6.2} hl_f1 {f1:6.2} omega {:.3} l_t {:.3}/{:.3} good {:.3}/{:.3}",
                    rep1.omega, rep1.l_t, rep2.l_t, rep1.goodness, rep2.goodness
                );
            }
        }
    }
}
