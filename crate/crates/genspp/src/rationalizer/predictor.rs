//! Predictor f_omega: GRU over the masked sequence -> temporal max pool
//! -> linear classifier.

use rand::Rng;

use super::Embedding;
use crate::error::Result;
use crate::nn::{
    max_pool_backward, max_pool_time, softmax_cross_entropy, Dense, GruInputProj, GruParams,
    GruProjGrads, ParamLayout, Segment,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PredictorNet {
    pub gru: GruParams,
    /// hidden -> num_classes.
    pub classifier: Dense,
}

/// Activations needed for one backward pass.
pub struct PredTrace {
    pub gru: crate::nn::GruTrace,
    pub pooled: Vec<f64>,
    pub argmax: Vec<usize>,
    pub logits: Vec<f64>,
}

impl PredictorNet {
    pub fn init(hidden: usize, emb_dim: usize, num_classes: usize, rng: &mut impl Rng) -> Self {
        PredictorNet {
            gru: GruParams::init(hidden, emb_dim, rng),
            classifier: Dense::init(num_classes, hidden, rng),
        }
    }

    pub fn zeros_like(&self) -> Self {
        PredictorNet {
            gru: GruParams::zeros(self.gru.hidden(), self.gru.input_dim()),
            classifier: Dense::zeros(self.classifier.out_dim(), self.classifier.in_dim()),
        }
    }

    pub fn hidden(&self) -> usize {
        self.gru.hidden()
    }

    pub fn num_classes(&self) -> usize {
        self.classifier.out_dim()
    }

    pub fn layout(hidden: usize, emb_dim: usize, num_classes: usize) -> ParamLayout {
        let mut segments = GruParams::layout(hidden, emb_dim).segments;
        segments.push(Segment::new("cls_w", &[num_classes, hidden]));
        segments.push(Segment::new("cls_b", &[num_classes]));
        ParamLayout::new(segments)
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let layout = Self::layout(self.hidden(), self.gru.input_dim(), self.num_classes());
        let mut parts = self.gru.param_slices();
        parts.push(&self.classifier.w.data);
        parts.push(&self.classifier.b);
        layout.flatten(&parts).expect("layout matches own params")
    }

    pub fn from_flat(
        hidden: usize,
        emb_dim: usize,
        num_classes: usize,
        flat: &[f64],
    ) -> Result<Self> {
        let layout = Self::layout(hidden, emb_dim, num_classes);
        let parts = layout.split(flat)?;
        Ok(PredictorNet {
            gru: GruParams::from_slices(hidden, emb_dim, &parts[..9]),
            classifier: Dense {
                w: crate::nn::Mat {
                    rows: num_classes,
                    cols: hidden,
                    data: parts[9].to_vec(),
                },
                b: parts[10].to_vec(),
            },
        })
    }

    pub fn project(&self, emb: &Embedding) -> GruInputProj {
        self.gru.project_vocab(emb.rows())
    }

    /// Forward over masked token ids, returning loss and trace.
    pub fn forward_loss(
        &self,
        proj: &GruInputProj,
        ids: &[Option<u32>],
        label: usize,
    ) -> Result<(f64, PredTrace)> {
        let h0 = vec![0.0; self.hidden()];
        let gru_trace = self.gru.forward_ids(proj, ids, &h0);
        let (pooled, argmax) = max_pool_time(&gru_trace.h)?;
        let logits = self.classifier.forward(&pooled);
        let (loss, _) = softmax_cross_entropy(&logits, label)?;
        Ok((
            loss,
            PredTrace {
                gru: gru_trace,
                pooled,
                argmax,
                logits,
            },
        ))
    }

    /// Backward from a cross-entropy gradient on the logits. Parameter
    /// gradients accumulate into `grads` (same shape) and `proj_grads`.
    pub fn backward(
        &self,
        ids: &[Option<u32>],
        trace: &PredTrace,
        dlogits: &[f64],
        grads: &mut PredictorNet,
        proj_grads: &mut GruProjGrads,
    ) {
        let dpooled = self
            .classifier
            .backward(&trace.pooled, dlogits, &mut grads.classifier);
        let dh = max_pool_backward(&dpooled, &trace.argmax, ids.len());
        self.gru
            .backward_ids(ids, &trace.gru, &dh, &mut grads.gru, proj_grads);
    }

    /// Predicted class (argmax logit, lowest index on ties).
    pub fn predict(&self, proj: &GruInputProj, ids: &[Option<u32>]) -> Result<usize> {
        let h0 = vec![0.0; self.hidden()];
        let trace = self.gru.forward_ids(proj, ids, &h0);
        let (pooled, _) = max_pool_time(&trace.h)?;
        let logits = self.classifier.forward(&pooled);
        let mut best = 0;
        for (i, &l) in logits.iter().enumerate() {
            if l > logits[best] {
                best = i;
            }
        }
        Ok(best)
    }

    /// Mean cross-entropy over a batch of masked sequences.
    pub fn mean_loss(&self, emb: &Embedding, batch: &[(Vec<Option<u32>>, usize)]) -> Result<f64> {
        if batch.is_empty() {
            return Err(crate::error::Error::InvalidInput(
                "mean_loss: empty batch".into(),
            ));
        }
        let proj = self.project(emb);
        let mut total = 0.0;
        for (ids, label) in batch {
            let (loss, _) = self.forward_loss(&proj, ids, *label)?;
            total += loss;
        }
        Ok(total / batch.len() as f64)
    }
}
