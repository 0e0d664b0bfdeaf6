use genspp::datagen::{generate_toy_dataset, Contamination, ToyConfig};
use genspp::evolution::{run_ga, EvalContext, GAConfig};
use genspp::metrics::{selection_stats, token_f1};
use genspp::rationalizer::{GeneratorNet, RegularizerConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let min_chunks: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(3);
    let max_chunks: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(4);
    let master_seed: u64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(11);
    let generations: usize = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(30);
    let pop: usize = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(20);
    let toy = ToyConfig {
        contamination: Contamination { min_chunks, max_chunks, chunk_len: 2 },
        ..Default::default()
    };
    let data = generate_toy_dataset(&toy, 0).unwrap();
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
    let reevaluate: bool = args.get(6).map(|s| s == "1").unwrap_or(false);
    let cfg = GAConfig {
        population_size: pop,
        generations,
        master_seed,
        reevaluate_survivors: reevaluate,
        ..Default::default()
    };
    let (best, history) = run_ga(&cfg, &ctx).unwrap();
    for r in &history.records {
        println!(
            "gen {:3} best_goodness {:.4} mean_goodness {:.4} best_l_t {:.4} best_omega {:.4} id {}",
            r.generation, r.best_goodness, r.mean_goodness, r.best_l_t, r.best_omega, r.best_id
        );
    }
    let rep = best.report.as_ref().unwrap();
    println!("best: feasible={} l_t={:.4} omega={:.4} goodness={:.4}", rep.feasible, rep.l_t, rep.omega, rep.goodness);
    let gen = GeneratorNet::from_genome(8, emb.dim(), &best.genome).unwrap();
    let masks = gen.masks(&emb, &data.validation).unwrap();
    let golds: Vec<Vec<u8>> = data.validation.iter().map(|ex| ex.gold_mask.clone().unwrap()).collect();
    let f1 = token_f1(&masks, &golds).unwrap();
    let (r, s) = selection_stats(&masks);
    println!("val hl_f1={f1:.2} R={r:.2} S={s:.2}");
}
