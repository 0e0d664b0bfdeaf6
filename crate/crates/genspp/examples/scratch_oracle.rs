use genspp::datagen::{generate_toy_dataset, ToyConfig};
use genspp::evolution::FitnessReport;
use genspp::metrics::token_f1;
use genspp::nn::{sigmoid_bce, AdamState, Dense, GruParams, GruProjGrads};
use genspp::rationalizer::{
    mask_ids, regularizer_omega, train_predictor_masked, Embedding, Example, GeneratorNet,
    InnerConfig, MaskedExample, RegularizerConfig,
};
use genspp::rng::stream;
use rand::seq::SliceRandom;

fn masked_with(split: &[Example], masks: &[Vec<u8>]) -> Vec<MaskedExample> {
    split.iter().zip(masks).map(|(ex, m)| mask_ids(ex, m).unwrap()).collect()
}

fn report(masks: &[Vec<u8>], l_t: f64) -> FitnessReport {
    let reg = RegularizerConfig::default();
    let omega: f64 =
        masks.iter().map(|m| regularizer_omega(m, &reg).unwrap()).sum::<f64>() / masks.len() as f64;
    FitnessReport::from_losses(l_t, omega, 0.1, 1e-8)
}

fn main() {
    let data = generate_toy_dataset(&ToyConfig::default(), 0).unwrap();
    let emb = data.vocab.one_hot_embedding(25).unwrap();
    let inner = InnerConfig::default();

    // 1. gold masks straight through the inner training loop
    let gold_tr: Vec<Vec<u8>> = data.train.iter().map(|e| e.gold_mask.clone().unwrap()).collect();
    let gold_va: Vec<Vec<u8>> =
        data.validation.iter().map(|e| e.gold_mask.clone().unwrap()).collect();
    let (_, l_t) = train_predictor_masked(
        &masked_with(&data.train, &gold_tr),
        &masked_with(&data.validation, &gold_va),
        &emb, 8, 3, &inner, 42,
    )
    .unwrap();
    let r = report(&gold_va, l_t);
    println!("gold-mask oracle: l_t={:.4} omega={:.4} goodness={:.4} feasible={}", r.l_t, r.omega, r.goodness, r.feasible);

    // 2. supervised generator trained toward gold masks
    let gen_hidden = 8;
    let mut rng = stream(5, &[1]);
    let mut gen = GeneratorNet::init(gen_hidden, emb.dim(), &mut rng);
    let mut adam = AdamState::new(GeneratorNet::genome_len(gen_hidden, emb.dim()), 1e-2);
    let mut order: Vec<usize> = (0..data.train.len()).collect();
    for epoch in 0..30 {
        order.shuffle(&mut rng);
        let mut ep_loss = 0.0;
        for chunk in order.chunks(64) {
            let proj = gen.gru.project_vocab(emb.rows());
            let mut grads = GeneratorNet {
                gru: GruParams::zeros(gen_hidden, emb.dim()),
                head: Dense::zeros(1, gen_hidden),
            };
            let mut proj_grads = GruProjGrads::zeros(emb.vocab(), gen_hidden);
            let scale = 1.0 / chunk.len() as f64;
            for &i in chunk {
                let ex = &data.train[i];
                let gold = ex.gold_mask.as_ref().unwrap();
                let n = ex.tokens.len();
                let ids: Vec<Option<u32>> = ex.tokens.iter().map(|&t| Some(t)).collect();
                let trace = gen.gru.forward_ids(&proj, &ids, &vec![0.0; gen_hidden]);
                let tok_scale = scale / n as f64;
                let mut dh_up = vec![vec![0.0; gen_hidden]; n];
                for t in 0..n {
                    let logit = gen.head.forward(&trace.h[t])[0];
                    let (loss, dlogit) = sigmoid_bce(logit, gold[t] as f64);
                    ep_loss += loss / (n as f64 * data.train.len() as f64);
                    let dy = [dlogit * tok_scale];
                    dh_up[t] = gen.head.backward(&trace.h[t], &dy, &mut grads.head);
                }
                gen.gru.backward_ids(&ids, &trace, &dh_up, &mut grads.gru, &mut proj_grads);
            }
            proj_grads.fold_into(emb.rows(), &mut grads.gru);
            let mut flat = gen.to_genome();
            adam.step(&mut flat, &grads.to_genome()).unwrap();
            gen = GeneratorNet::from_genome(gen_hidden, emb.dim(), &flat).unwrap();
        }
        if epoch % 5 == 0 || epoch == 29 {
            println!("epoch {epoch}: bce={ep_loss:.4}");
        }
    }
    let masks = gen.masks(&emb, &data.validation).unwrap();
    let f1 = token_f1(&masks, &gold_va).unwrap();
    let (_, l_t) = train_predictor_masked(
        &masked_with(&data.train, &gen.masks(&emb, &data.train).unwrap()),
        &masked_with(&data.validation, &masks),
        &emb, 8, 3, &inner, 43,
    )
    .unwrap();
    let r = report(&masks, l_t);
    println!("supervised generator: val hl_f1={f1:.2} l_t={:.4} omega={:.4} goodness={:.4} feasible={}", r.l_t, r.omega, r.goodness, r.feasible);
}
