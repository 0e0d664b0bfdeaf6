use genspp::datagen::{generate_toy_dataset, ToyConfig};
use genspp::evolution::{run_ga, run_ga_with_population, EvalContext, GAConfig, Individual};
use genspp::metrics::{selection_stats, token_f1};
use genspp::rationalizer::{GeneratorNet, RegularizerConfig};
use genspp::rng::stream;
use rand::seq::SliceRandom;
use rand::Rng;

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
    let golds: Vec<Vec<u8>> = data.validation.iter().map(|e| e.gold_mask.clone().unwrap()).collect();

    let variants: Vec<(&str, f64, f64, u64, bool)> = vec![
        // name, p_mut, sigma, seed, wide_init
        ("pmut0.1", 0.1, 0.05, 11, false),
        ("pmut0.02", 0.02, 0.05, 11, false),
        ("sigma0.224", 1.0, 0.224, 11, false),
        ("wide-init", 1.0, 0.05, 11, true),
        ("wide+pmut0.1", 0.1, 0.05, 11, true),
        ("base-seed12", 1.0, 0.05, 12, false),
        ("base-seed13", 1.0, 0.05, 13, false),
    ];
    for (name, p_mut, sigma, seed, wide) in variants {
        let cfg = GAConfig {
            population_size: 20,
            generations: 30,
            master_seed: seed,
            p_mut,
            mut_sigma: sigma,
            ..Default::default()
        };
        let result = if wide {
            let d = GeneratorNet::genome_len(8, emb.dim());
            let mut rng = stream(seed, &[0x99]);
            let pop: Vec<Individual> = (0..20)
                .map(|i| Individual {
                    id: i as u64,
                    genome: (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                    report: None,
                    birth_generation: 0,
                    predictor: None,
                })
                .collect();
            run_ga_with_population(&cfg, &ctx, pop)
        } else {
            run_ga(&cfg, &ctx)
        };
        let (best, history) = result.unwrap();
        let rep = best.report.unwrap();
        let gen = GeneratorNet::from_genome(8, emb.dim(), &best.genome).unwrap();
        let masks = gen.masks(&emb, &data.validation).unwrap();
        let f1 = token_f1(&masks, &golds).unwrap();
        let (r, s) = selection_stats(&masks);
        // rate-matched random masks
        let rate = r / 100.0;
        let mut rng = stream(12, &[60]);
        let rand_masks: Vec<Vec<u8>> = data
            .validation
            .iter()
            .map(|ex| {
                let n = ex.tokens.len();
                let k = ((rate * n as f64).round() as usize).min(n);
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(&mut rng);
                let mut m = vec![0u8; n];
                for &i in &idx[..k] { m[i] = 1; }
                m
            })
            .collect();
        let rf1 = token_f1(&rand_masks, &golds).unwrap();
        println!(
            "{name}: gens={} best goodness={:.4} feas={} l_t={:.4} omega={:.4} | val F1={:.2} rand F1={:.2} margin={:.2} R={:.2} S={:.2}",
            history.records.len() - 1, rep.goodness, rep.feasible, rep.l_t, rep.omega, f1, rf1, f1 - rf1, r, s
        );
    }
}
