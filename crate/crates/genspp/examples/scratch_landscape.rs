use genspp::datagen::{generate_toy_dataset, ToyConfig};
use genspp::evolution::FitnessReport;
use genspp::rationalizer::{
    mask_ids, regularizer_omega, train_predictor_masked, Example, InnerConfig, InnerOptimizer,
    MaskedExample, RegularizerConfig,
};

fn masked_with(split: &[Example], masks: &[Vec<u8>]) -> Vec<MaskedExample> {
    split.iter().zip(masks).map(|(ex, m)| mask_ids(ex, m).unwrap()).collect()
}

fn main() {
    let data = generate_toy_dataset(&ToyConfig::default(), 0).unwrap();
    let emb = data.vocab.one_hot_embedding(25).unwrap();
    let inner = InnerConfig::default();
    let reg = RegularizerConfig::default();

    let families: Vec<(&str, Box<dyn Fn(&Example) -> Vec<u8>>)> = vec![
        ("all-ones", Box::new(|ex: &Example| vec![1u8; ex.tokens.len()])),
        ("gold", Box::new(|ex: &Example| ex.gold_mask.clone().unwrap())),
        (
            "stop-after-highlight",
            Box::new(|ex: &Example| {
                let g = ex.gold_mask.as_ref().unwrap();
                let end = g.iter().rposition(|&v| v == 1).unwrap();
                (0..ex.tokens.len()).map(|t| u8::from(t <= end)).collect()
            }),
        ),
        (
            "highlight-to-end",
            Box::new(|ex: &Example| {
                let g = ex.gold_mask.as_ref().unwrap();
                let start = g.iter().position(|&v| v == 1).unwrap();
                (0..ex.tokens.len()).map(|t| u8::from(t >= start)).collect()
            }),
        ),
        (
            "char-a-or-b",
            Box::new(|ex: &Example| ex.tokens.iter().map(|&t| u8::from(t <= 1)).collect()),
        ),
        (
            "gold-last2",
            Box::new(|ex: &Example| {
                let g = ex.gold_mask.as_ref().unwrap();
                let start = g.iter().position(|&v| v == 1).unwrap();
                let mut m = vec![0u8; ex.tokens.len()];
                m[start + 1] = 1;
                m[start + 2] = 1;
                m
            }),
        ),
    ];
    for (name, f) in families {
        let tr: Vec<Vec<u8>> = data.train.iter().map(|e| f(e)).collect();
        let va: Vec<Vec<u8>> = data.validation.iter().map(|e| f(e)).collect();
        let mtr = masked_with(&data.train, &tr);
        let mva = masked_with(&data.validation, &va);
        let omega: f64 =
            va.iter().map(|m| regularizer_omega(m, &reg).unwrap()).sum::<f64>() / va.len() as f64;
        let rate: f64 = va.iter().map(|m| m.iter().map(|&v| v as f64).sum::<f64>() / m.len() as f64).sum::<f64>() / va.len() as f64;
        for opt in [InnerOptimizer::Adam, InnerOptimizer::Sgd] {
            let cfg = InnerConfig { optimizer: opt, ..inner };
            let mut line = format!("{name:22} {opt:?}: omega={omega:.4} R={:5.1} l_t=", 100.0 * rate);
            for seed in [42u64, 7, 11, 123] {
                let (_, l_t) =
                    train_predictor_masked(&mtr, &mva, &emb, 8, 3, &cfg, seed).unwrap();
                let r = FitnessReport::from_losses(l_t, omega, 0.1, 1e-8);
                line.push_str(&format!(" {:.4}({})", l_t, if r.feasible { "F" } else { "-" }));
            }
            println!("{line}");
        }
    }
}
