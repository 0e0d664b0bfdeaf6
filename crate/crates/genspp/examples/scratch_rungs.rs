use genspp::datagen::{generate_toy_dataset, Contamination, ToyConfig};
use genspp::evolution::FitnessReport;
use genspp::rationalizer::{
    mask_ids, regularizer_omega, train_predictor_masked, Example, InnerConfig, MaskedExample,
    RegularizerConfig,
};

fn masked_with(split: &[Example], masks: &[Vec<u8>]) -> Vec<MaskedExample> {
    split.iter().zip(masks).map(|(ex, m)| mask_ids(ex, m).unwrap()).collect()
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let min_chunks: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(3);
    let max_chunks: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(4);
    let toy = ToyConfig {
        contamination: Contamination { min_chunks, max_chunks, chunk_len: 2 },
        ..Default::default()
    };
    let data = generate_toy_dataset(&toy, 0).unwrap();
    let emb = data.vocab.one_hot_embedding(25).unwrap();
    let inner = InnerConfig::default();
    let reg = RegularizerConfig::default();

    let mut families: Vec<(String, Box<dyn Fn(&Example) -> Vec<u8>>)> = Vec::new();
    for l in [1usize, 2, 3, 4, 6, 8] {
        families.push((
            format!("cut-last-{l}"),
            Box::new(move |ex: &Example| {
                let n = ex.tokens.len();
                (0..n).map(|t| u8::from(t < n - l)).collect()
            }),
        ));
    }
    for l in [2usize, 3, 4] {
        families.push((
            format!("cut-first-{l}"),
            Box::new(move |ex: &Example| (0..ex.tokens.len()).map(|t| u8::from(t >= l)).collect()),
        ));
    }
    families.push((
        "cut-first-3-last-3".into(),
        Box::new(|ex: &Example| {
            let n = ex.tokens.len();
            (0..n).map(|t| u8::from(t >= 3 && t < n - 3)).collect()
        }),
    ));

    for (name, f) in families {
        let tr: Vec<Vec<u8>> = data.train.iter().map(|e| f(e)).collect();
        let va: Vec<Vec<u8>> = data.validation.iter().map(|e| f(e)).collect();
        let mtr = masked_with(&data.train, &tr);
        let mva = masked_with(&data.validation, &va);
        let omega: f64 =
            va.iter().map(|m| regularizer_omega(m, &reg).unwrap()).sum::<f64>() / va.len() as f64;
        let mut line = format!("{name:18} omega={omega:.4} l_t:");
        let mut feas = 0usize;
        let mut good_f = 0.0f64;
        let seeds: Vec<u64> = (0..12u64)
            .map(|i| 0x9e3779b97f4a7c15u64.wrapping_mul(i + 3) ^ 0xabcdef)
            .collect();
        for seed in seeds {
            let (_, l_t) = train_predictor_masked(&mtr, &mva, &emb, 8, 3, &inner, seed).unwrap();
            let r = FitnessReport::from_losses(l_t, omega, 0.1, 1e-8);
            if r.feasible {
                feas += 1;
                good_f = r.goodness;
            }
            line.push_str(&format!(" {l_t:.3}"));
        }
        println!("{line}  p={feas}/12 goodness(feasible)={good_f:.4}");
    }
}
