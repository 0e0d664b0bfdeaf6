use genspp::datagen::{generate_toy_dataset, ToyConfig};
use genspp::rationalizer::{
    mask_ids, train_predictor_masked, Example, InnerConfig, MaskedExample,
};
use genspp::rng::derive_seed;

fn masked_with(split: &[Example], masks: &[Vec<u8>]) -> Vec<MaskedExample> {
    split.iter().zip(masks).map(|(ex, m)| mask_ids(ex, m).unwrap()).collect()
}

fn main() {
    let data = generate_toy_dataset(&ToyConfig::default(), 0).unwrap();
    let emb = data.vocab.one_hot_embedding(25).unwrap();
    let inner = InnerConfig::default();
    let ones_tr: Vec<Vec<u8>> = data.train.iter().map(|e| vec![1u8; e.tokens.len()]).collect();
    let ones_va: Vec<Vec<u8>> =
        data.validation.iter().map(|e| vec![1u8; e.tokens.len()]).collect();
    let mtr = masked_with(&data.train, &ones_tr);
    let mva = masked_with(&data.validation, &ones_va);

    let mut groups: Vec<(&str, Vec<u64>)> = Vec::new();
    groups.push(("small", (1..=12).collect()));
    groups.push(("derived-g0", (0..12).map(|i| derive_seed(11, &[0x12, 0, i])).collect()));
    groups.push(("derived-g5", (0..12).map(|i| derive_seed(11, &[0x12, 5, i])).collect()));
    groups.push((
        "large-random",
        (0..12).map(|i| 0x9e3779b97f4a7c15u64.wrapping_mul(i + 17) ^ 0xdeadbeef).collect(),
    ));
    for (name, seeds) in groups {
        let mut line = format!("{name:13}");
        let mut feas = 0;
        for s in seeds {
            let (_, l_t) = train_predictor_masked(&mtr, &mva, &emb, 8, 3, &inner, s).unwrap();
            if l_t < 0.1 {
                feas += 1;
            }
            line.push_str(&format!(" {l_t:.3}"));
        }
        println!("{line}  ({feas}/12 feasible)");
    }
}
