//! Shared helpers for the integration suites: central finite-difference
//! gradient checking over every differentiable block.

use genspp::nn::{
    max_pool_backward, max_pool_time, softmax_cross_entropy, Dense, GruParams, GruProjGrads,
    ParamLayout, Segment,
};
use genspp::rationalizer::{Embedding, PredictorNet};
use genspp::rng::stream;
use rand::Rng;

pub const FD_STEP: f64 = 1e-5;
pub const REL_TOL: f64 = 1e-4;

pub fn rel_err(a: f64, n: f64) -> f64 {
    (a - n).abs() / a.abs().max(n.abs()).max(1e-6)
}

/// Central finite-difference gradient of `f` at `x`.
pub fn numeric_grad(x: &mut Vec<f64>, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for i in 0..x.len() {
        let orig = x[i];
        x[i] = orig + FD_STEP;
        let hi = f(x);
        x[i] = orig - FD_STEP;
        let lo = f(x);
        x[i] = orig;
        out[i] = (hi - lo) / (2.0 * FD_STEP);
    }
    out
}

pub struct GradCheckOutcome {
    pub instances: usize,
    pub coords: usize,
    pub max_rel_err: f64,
}

impl GradCheckOutcome {
    pub fn merge(&mut self, other: GradCheckOutcome) {
        self.instances += other.instances;
        self.coords += other.coords;
        self.max_rel_err = self.max_rel_err.max(other.max_rel_err);
    }

    pub fn assert_ok(&self, name: &str) {
        assert!(
            self.max_rel_err < REL_TOL,
            "{name}: max rel err {} over {} instances",
            self.max_rel_err,
            self.instances
        );
    }
}

fn compare(analytic: &[f64], numeric: &[f64]) -> (usize, f64) {
    assert_eq!(analytic.len(), numeric.len());
    let mut worst = 0.0f64;
    for (&a, &n) in analytic.iter().zip(numeric) {
        worst = worst.max(rel_err(a, n));
    }
    (analytic.len(), worst)
}

/// Dense layer feeding softmax cross-entropy, checked w.r.t. weights,
/// bias, and the input.
pub fn gradcheck_dense(instances: usize, seed: u64) -> GradCheckOutcome {
    let mut rng = stream(seed, &[1]);
    let mut out = GradCheckOutcome {
        instances,
        coords: 0,
        max_rel_err: 0.0,
    };
    for _ in 0..instances {
        let input = rng.gen_range(2..6);
        let classes = rng.gen_range(2..5);
        let dense = Dense::init(classes, input, &mut rng);
        let x: Vec<f64> = (0..input).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let label = rng.gen_range(0..classes);

        let layout = ParamLayout::new(vec![
            Segment::new("w", &[classes, input]),
            Segment::new("b", &[classes]),
        ]);
        let mut flat = layout.flatten(&[&dense.w.data, &dense.b]).unwrap();

        let loss_at = |flat: &[f64], x: &[f64]| {
            let parts = layout.split(flat).unwrap();
            let d = Dense {
                w: genspp::nn::Mat {
                    rows: classes,
                    cols: input,
                    data: parts[0].to_vec(),
                },
                b: parts[1].to_vec(),
            };
            softmax_cross_entropy(&d.forward(x), label).unwrap().0
        };

        let logits = dense.forward(&x);
        let (_, dlogits) = softmax_cross_entropy(&logits, label).unwrap();
        let mut grads = Dense::zeros(classes, input);
        let dx = dense.backward(&x, &dlogits, &mut grads);
        let analytic = layout.flatten(&[&grads.w.data, &grads.b]).unwrap();

        let numeric = numeric_grad(&mut flat, |p| loss_at(p, &x));
        let (c, e) = compare(&analytic, &numeric);
        out.coords += c;
        out.max_rel_err = out.max_rel_err.max(e);

        let mut xv = x.clone();
        let numeric_x = numeric_grad(&mut xv, |xx| loss_at(&flat, xx));
        let (c, e) = compare(&dx, &numeric_x);
        out.coords += c;
        out.max_rel_err = out.max_rel_err.max(e);
    }
    out
}

/// Full BPTT through the recurrent cell with a random linear readout of
/// every hidden state.
pub fn gradcheck_gru(instances: usize, seed: u64) -> GradCheckOutcome {
    let mut rng = stream(seed, &[2]);
    let mut out = GradCheckOutcome {
        instances,
        coords: 0,
        max_rel_err: 0.0,
    };
    for _ in 0..instances {
        let hidden = rng.gen_range(2..5);
        let input = rng.gen_range(2..5);
        let seq = rng.gen_range(1..6);
        let gru = GruParams::init(hidden, input, &mut rng);
        let inputs: Vec<Vec<f64>> = (0..seq)
            .map(|_| (0..input).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect())
            .collect();
        let readout: Vec<Vec<f64>> = (0..seq)
            .map(|_| (0..hidden).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect())
            .collect();
        let h0 = vec![0.0; hidden];

        let layout = GruParams::layout(hidden, input);
        let mut flat = layout.flatten(&gru.param_slices()).unwrap();

        let loss_at = |flat: &[f64]| {
            let parts = layout.split(flat).unwrap();
            let g = GruParams::from_slices(hidden, input, &parts);
            let trace = g.forward(&inputs, &h0).unwrap();
            trace
                .h
                .iter()
                .zip(&readout)
                .map(|(h, v)| h.iter().zip(v).map(|(a, b)| a * b).sum::<f64>())
                .sum()
        };

        let trace = gru.forward(&inputs, &h0).unwrap();
        let mut grads = GruParams::zeros(hidden, input);
        gru.backward(&inputs, &trace, &readout, &mut grads).unwrap();
        let analytic = layout.flatten(&grads.param_slices()).unwrap();

        let numeric = numeric_grad(&mut flat, |p| loss_at(p));
        let (c, e) = compare(&analytic, &numeric);
        out.coords += c;
        out.max_rel_err = out.max_rel_err.max(e);
    }
    out
}

/// Temporal max-pool with a random linear loss, checked w.r.t. the
/// stacked input states.
pub fn gradcheck_pool(instances: usize, seed: u64) -> GradCheckOutcome {
    let mut rng = stream(seed, &[3]);
    let mut out = GradCheckOutcome {
        instances,
        coords: 0,
        max_rel_err: 0.0,
    };
    for _ in 0..instances {
        let dim = rng.gen_range(2..6);
        let seq = rng.gen_range(1..6);
        let mut flat: Vec<f64> = (0..seq * dim).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let weights: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();

        let loss_at = |flat: &[f64]| {
            let states: Vec<Vec<f64>> = flat.chunks(dim).map(|c| c.to_vec()).collect();
            let (pooled, _) = max_pool_time(&states).unwrap();
            pooled.iter().zip(&weights).map(|(a, b)| a * b).sum()
        };

        let states: Vec<Vec<f64>> = flat.chunks(dim).map(|c| c.to_vec()).collect();
        let (_, argmax) = max_pool_time(&states).unwrap();
        let dstates = max_pool_backward(&weights, &argmax, seq);
        let analytic: Vec<f64> = dstates.into_iter().flatten().collect();

        let numeric = numeric_grad(&mut flat, |p| loss_at(p));
        let (c, e) = compare(&analytic, &numeric);
        out.coords += c;
        out.max_rel_err = out.max_rel_err.max(e);
    }
    out
}

/// Softmax cross-entropy alone.
pub fn gradcheck_ce(instances: usize, seed: u64) -> GradCheckOutcome {
    let mut rng = stream(seed, &[4]);
    let mut out = GradCheckOutcome {
        instances,
        coords: 0,
        max_rel_err: 0.0,
    };
    for _ in 0..instances {
        let classes = rng.gen_range(2..6);
        let mut logits: Vec<f64> = (0..classes).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
        let label = rng.gen_range(0..classes);
        let (_, analytic) = softmax_cross_entropy(&logits, label).unwrap();
        let numeric = numeric_grad(&mut logits, |l| softmax_cross_entropy(l, label).unwrap().0);
        let (c, e) = compare(&analytic, &numeric);
        out.coords += c;
        out.max_rel_err = out.max_rel_err.max(e);
    }
    out
}

/// End-to-end predictor (embedding lookup with masked positions, GRU,
/// max-pool, classifier, cross-entropy) w.r.t. the full flat parameter
/// vector, including the vocab-projection gradient path.
pub fn gradcheck_predictor(instances: usize, seed: u64) -> GradCheckOutcome {
    let mut rng = stream(seed, &[5]);
    let mut out = GradCheckOutcome {
        instances,
        coords: 0,
        max_rel_err: 0.0,
    };
    let mut done = 0;
    while done < instances {
        let hidden = rng.gen_range(2..4);
        let classes = 3;
        let vocab = 3;
        let emb_dim = rng.gen_range(vocab..8);
        let emb = Embedding::one_hot(vocab, emb_dim).unwrap();
        let pred = PredictorNet::init(hidden, emb_dim, classes, &mut rng);
        let seq = rng.gen_range(2..7);
        let ids: Vec<Option<u32>> = (0..seq)
            .map(|_| {
                if rng.gen::<f64>() < 0.3 {
                    None
                } else {
                    Some(rng.gen_range(0..vocab as u32))
                }
            })
            .collect();
        let label = rng.gen_range(0..classes);

        // a near-tie in the temporal max makes the loss non-differentiable
        // at the pooling kink; resample those instances
        {
            let proj = pred.project(&emb);
            let (_, trace) = pred.forward_loss(&proj, &ids, label).unwrap();
            let mut min_margin = f64::INFINITY;
            for d in 0..hidden {
                let mut vals: Vec<f64> = trace.gru.h.iter().map(|h| h[d]).collect();
                vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
                if vals.len() > 1 {
                    min_margin = min_margin.min(vals[0] - vals[1]);
                }
            }
            if min_margin < 1e-3 {
                continue;
            }
        }
        done += 1;

        let mut flat = pred.to_flat();
        let loss_at = |flat: &[f64]| {
            let p = PredictorNet::from_flat(hidden, emb_dim, classes, flat).unwrap();
            let proj = p.project(&emb);
            p.forward_loss(&proj, &ids, label).unwrap().0
        };

        let proj = pred.project(&emb);
        let (_, trace) = pred.forward_loss(&proj, &ids, label).unwrap();
        let (_, dlogits) = softmax_cross_entropy(&trace.logits, label).unwrap();
        let mut grads = pred.zeros_like();
        let mut proj_grads = GruProjGrads::zeros(vocab, hidden);
        pred.backward(&ids, &trace, &dlogits, &mut grads, &mut proj_grads);
        proj_grads.fold_into(emb.rows(), &mut grads.gru);
        let analytic = grads.to_flat();

        let numeric = numeric_grad(&mut flat, |p| loss_at(p));
        let (c, e) = compare(&analytic, &numeric);
        out.coords += c;
        out.max_rel_err = out.max_rel_err.max(e);
    }
    out
}

/// The whole suite; used verbatim by the acceptance gate.
pub fn gradcheck_suite(seed: u64) -> GradCheckOutcome {
    let mut total = gradcheck_dense(30, seed);
    total.merge(gradcheck_gru(30, seed));
    total.merge(gradcheck_pool(20, seed));
    total.merge(gradcheck_ce(20, seed));
    total.merge(gradcheck_predictor(30, seed));
    total
}
