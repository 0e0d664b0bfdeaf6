use genspp::datagen::{generate_toy_dataset, ToyConfig};
use genspp::nn::{softmax_cross_entropy, AdamState, GruProjGrads};
use genspp::rationalizer::{mask_ids, Example, MaskedExample, PredictorNet};
use genspp::rng::stream;
use rand::seq::SliceRandom;

fn masked_with(split: &[Example], masks: &[Vec<u8>]) -> Vec<MaskedExample> {
    split.iter().zip(masks).map(|(ex, m)| mask_ids(ex, m).unwrap()).collect()
}

#[derive(Clone, Copy)]
enum Opt {
    Adam(f64),
    Sgd { lr: f64, momentum: f64 },
}

fn train_scaled(
    train: &[MaskedExample],
    fit: &[MaskedExample],
    emb: &genspp::rationalizer::Embedding,
    seed: u64,
    opt: Opt,
    epochs: usize,
) -> Vec<f64> {
    let hidden = 8;
    let mut init_rng = stream(seed, &[0x70]);
    let mut pred = PredictorNet::init(hidden, emb.dim(), 3, &mut init_rng);
    let mut shuffle_rng = stream(seed, &[0x71]);
    let n_params = pred.to_flat().len();
    let mut adam = AdamState::new(n_params, if let Opt::Adam(lr) = opt { lr } else { 1e-2 });
    let mut velocity = vec![0.0f64; n_params];
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut curve = Vec::new();
    for _ in 0..epochs {
        order.shuffle(&mut shuffle_rng);
        for chunk in order.chunks(64) {
            let proj = pred.project(emb);
            let mut grads = pred.zeros_like();
            let mut proj_grads = GruProjGrads::zeros(emb.vocab(), hidden);
            let sc = 1.0 / chunk.len() as f64;
            for &i in chunk {
                let (ids, label) = &train[i];
                let (_, trace) = pred.forward_loss(&proj, ids, *label).unwrap();
                let (_, mut dlogits) = softmax_cross_entropy(&trace.logits, *label).unwrap();
                for d in dlogits.iter_mut() {
                    *d *= sc;
                }
                pred.backward(ids, &trace, &dlogits, &mut grads, &mut proj_grads);
            }
            proj_grads.fold_into(emb.rows(), &mut grads.gru);
            let mut flat = pred.to_flat();
            match opt {
                Opt::Adam(_) => adam.step(&mut flat, &grads.to_flat()).unwrap(),
                Opt::Sgd { lr, momentum } => {
                    for ((w, v), g) in flat.iter_mut().zip(velocity.iter_mut()).zip(grads.to_flat())
                    {
                        *v = momentum * *v + g;
                        *w -= lr * *v;
                    }
                }
            }
            pred = PredictorNet::from_flat(hidden, emb.dim(), 3, &flat).unwrap();
        }
        curve.push(pred.mean_loss(emb, fit).unwrap());
    }
    curve
}

fn main() {
    let data = generate_toy_dataset(&ToyConfig::default(), 0).unwrap();
    let emb = data.vocab.one_hot_embedding(25).unwrap();
    let highlights = ["aba", "baa", "abc"];

    let gold = |ex: &Example| ex.gold_mask.clone().unwrap();
    let stop_after = |ex: &Example| {
        let g = ex.gold_mask.clone().unwrap();
        let last = g.iter().rposition(|&b| b == 1).unwrap_or(0);
        (0..g.len()).map(|t| u8::from(t <= last)).collect::<Vec<u8>>()
    };
    let all_ones = |ex: &Example| vec![1u8; ex.tokens.len()];
    let _ = highlights;

    let gold_first2 = |ex: &Example| {
        let g = ex.gold_mask.clone().unwrap();
        let first = g.iter().position(|&b| b == 1).unwrap_or(0);
        (0..g.len()).map(|t| u8::from(t >= first && t < first + 2)).collect::<Vec<u8>>()
    };
    let fams: Vec<(&str, Box<dyn Fn(&Example) -> Vec<u8>>)> = vec![
        ("all-ones", Box::new(all_ones)),
        ("gold", Box::new(gold)),
        ("stop-after-hl", Box::new(stop_after)),
        ("gold-first2", Box::new(gold_first2)),
    ];
    let opts: Vec<(&str, Opt)> = vec![
        ("sgd-m.99-lr.01", Opt::Sgd { lr: 1e-2, momentum: 0.99 }),
        ("sgd-m.9-lr.05", Opt::Sgd { lr: 0.05, momentum: 0.9 }),
        ("sgd-m.9-lr.1", Opt::Sgd { lr: 0.1, momentum: 0.9 }),
        ("sgd-m.9-lr.15", Opt::Sgd { lr: 0.15, momentum: 0.9 }),
        ("sgd-m.9-lr.2", Opt::Sgd { lr: 0.2, momentum: 0.9 }),
    ];
    let seeds: Vec<u64> = (0..6u64).map(|i| 0x9e3779b97f4a7c15u64.wrapping_mul(i + 5) ^ 0x1234).collect();
    for (name, f) in &fams {
        let tr: Vec<Vec<u8>> = data.train.iter().map(|e| f(e)).collect();
        let va: Vec<Vec<u8>> = data.validation.iter().map(|e| f(e)).collect();
        let mtr = masked_with(&data.train, &tr);
        let mva = masked_with(&data.validation, &va);
        for (oname, opt) in &opts {
            let mut feas = 0;
            let mut line = format!("{name:14} {oname:14}");
            for &s in &seeds {
                let curve = train_scaled(&mtr, &mva, &emb, s, *opt, 3);
                let last = *curve.last().unwrap();
                if last < 0.1 {
                    feas += 1;
                }
                line.push_str(&format!(" [{:.2},{:.2},{:.3}]", curve[0], curve[1], last));
            }
            println!("{line}  p={feas}/6");
        }
    }
}
