//! GRU cell with explicit backpropagation through time.
//!
//! Convention (fixed so genomes stay portable):
//!   z_t = sigma(W_z x_t + U_z h_{t-1} + b_z)
//!   r_t = sigma(W_r x_t + U_r h_{t-1} + b_r)
//!   c_t = tanh(W_h x_t + U_h (r_t . h_{t-1}) + b_h)
//!   h_t = (1 - z_t) . h_{t-1} + z_t . c_t
//!
//! Two input paths are provided: a dense path over explicit input vectors
//! and an id path that consumes token ids through precomputed per-vocab
//! input projections (W x_t is a table lookup when the vocabulary is
//! small). The id path must produce bit-identical hidden states; a parity
//! test enforces this.

use rand::Rng;

use super::layout::{ParamLayout, Segment};
use super::linalg::{sigmoid, Mat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GruParams {
    pub w_z: Mat,
    pub w_r: Mat,
    pub w_h: Mat,
    pub u_z: Mat,
    pub u_r: Mat,
    pub u_h: Mat,
    pub b_z: Vec<f64>,
    pub b_r: Vec<f64>,
    pub b_h: Vec<f64>,
}

/// Per-step activations recorded by a forward pass.
#[derive(Debug, Clone)]
pub struct GruTrace {
    pub h: Vec<Vec<f64>>,
    pub z: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
    pub h0: Vec<f64>,
}

impl GruParams {
    pub fn zeros(hidden: usize, input: usize) -> Self {
        GruParams {
            w_z: Mat::zeros(hidden, input),
            w_r: Mat::zeros(hidden, input),
            w_h: Mat::zeros(hidden, input),
            u_z: Mat::zeros(hidden, hidden),
            u_r: Mat::zeros(hidden, hidden),
            u_h: Mat::zeros(hidden, hidden),
            b_z: vec![0.0; hidden],
            b_r: vec![0.0; hidden],
            b_h: vec![0.0; hidden],
        }
    }

    pub fn init(hidden: usize, input: usize, rng: &mut impl Rng) -> Self {
        GruParams {
            w_z: Mat::init_uniform(hidden, input, rng),
            w_r: Mat::init_uniform(hidden, input, rng),
            w_h: Mat::init_uniform(hidden, input, rng),
            u_z: Mat::init_uniform(hidden, hidden, rng),
            u_r: Mat::init_uniform(hidden, hidden, rng),
            u_h: Mat::init_uniform(hidden, hidden, rng),
            b_z: vec![0.0; hidden],
            b_r: vec![0.0; hidden],
            b_h: vec![0.0; hidden],
        }
    }

    pub fn hidden(&self) -> usize {
        self.u_z.rows
    }

    pub fn input_dim(&self) -> usize {
        self.w_z.cols
    }

    /// Flat-vector layout for a cell of the given dims. Segment order is
    /// part of the genome format.
    pub fn layout(hidden: usize, input: usize) -> ParamLayout {
        ParamLayout::new(vec![
            Segment::new("w_z", &[hidden, input]),
            Segment::new("w_r", &[hidden, input]),
            Segment::new("w_h", &[hidden, input]),
            Segment::new("u_z", &[hidden, hidden]),
            Segment::new("u_r", &[hidden, hidden]),
            Segment::new("u_h", &[hidden, hidden]),
            Segment::new("b_z", &[hidden]),
            Segment::new("b_r", &[hidden]),
            Segment::new("b_h", &[hidden]),
        ])
    }

    pub fn param_slices(&self) -> Vec<&[f64]> {
        vec![
            &self.w_z.data,
            &self.w_r.data,
            &self.w_h.data,
            &self.u_z.data,
            &self.u_r.data,
            &self.u_h.data,
            &self.b_z,
            &self.b_r,
            &self.b_h,
        ]
    }

    pub fn from_slices(hidden: usize, input: usize, parts: &[&[f64]]) -> Self {
        let mat = |rows: usize, cols: usize, data: &[f64]| Mat {
            rows,
            cols,
            data: data.to_vec(),
        };
        GruParams {
            w_z: mat(hidden, input, parts[0]),
            w_r: mat(hidden, input, parts[1]),
            w_h: mat(hidden, input, parts[2]),
            u_z: mat(hidden, hidden, parts[3]),
            u_r: mat(hidden, hidden, parts[4]),
            u_h: mat(hidden, hidden, parts[5]),
            b_z: parts[6].to_vec(),
            b_r: parts[7].to_vec(),
            b_h: parts[8].to_vec(),
        }
    }

    /// Runs the recurrence over `inputs` and records activations.
    pub fn forward(&self, inputs: &[Vec<f64>], h0: &[f64]) -> Result<GruTrace> {
        let n = self.hidden();
        if h0.len() != n {
            return Err(Error::Config(format!(
                "gru_forward: h0 has length {}, hidden size is {n}",
                h0.len()
            )));
        }
        for x in inputs {
            if x.len() != self.input_dim() {
                return Err(Error::Config(format!(
                    "gru_forward: input has length {}, input size is {}",
                    x.len(),
                    self.input_dim()
                )));
            }
        }
        let mut trace = GruTrace {
            h: Vec::with_capacity(inputs.len()),
            z: Vec::with_capacity(inputs.len()),
            r: Vec::with_capacity(inputs.len()),
            c: Vec::with_capacity(inputs.len()),
            h0: h0.to_vec(),
        };
        let mut h_prev = h0.to_vec();
        for x in inputs {
            let mut az = self.b_z.clone();
            let mut ar = self.b_r.clone();
            self.w_z.matvec_add_into(x, &mut az);
            self.u_z.matvec_add_into(&h_prev, &mut az);
            self.w_r.matvec_add_into(x, &mut ar);
            self.u_r.matvec_add_into(&h_prev, &mut ar);
            let z: Vec<f64> = az.iter().map(|&a| sigmoid(a)).collect();
            let r: Vec<f64> = ar.iter().map(|&a| sigmoid(a)).collect();

            let rh: Vec<f64> = r.iter().zip(&h_prev).map(|(ri, hi)| ri * hi).collect();
            let mut ac = self.b_h.clone();
            self.w_h.matvec_add_into(x, &mut ac);
            self.u_h.matvec_add_into(&rh, &mut ac);
            let c: Vec<f64> = ac.iter().map(|&a| a.tanh()).collect();

            let h: Vec<f64> = (0..n)
                .map(|i| (1.0 - z[i]) * h_prev[i] + z[i] * c[i])
                .collect();
            trace.z.push(z);
            trace.r.push(r);
            trace.c.push(c);
            h_prev = h.clone();
            trace.h.push(h);
        }
        Ok(trace)
    }

    /// Backpropagation through time. `dh_up[t]` is the upstream gradient on
    /// h_t. Parameter gradients accumulate into `grads`; gradients w.r.t.
    /// the inputs are not computed (embeddings are frozen everywhere in
    /// this crate).
    pub fn backward(
        &self,
        inputs: &[Vec<f64>],
        trace: &GruTrace,
        dh_up: &[Vec<f64>],
        grads: &mut GruParams,
    ) -> Result<()> {
        if trace.h.len() != inputs.len() || dh_up.len() != inputs.len() {
            return Err(Error::Usage(
                "gru backward: trace/upstream do not match the forward inputs".into(),
            ));
        }
        let n = self.hidden();
        let mut carry = vec![0.0; n];
        for t in (0..inputs.len()).rev() {
            let h_prev = if t == 0 { &trace.h0 } else { &trace.h[t - 1] };
            let (z, r, c) = (&trace.z[t], &trace.r[t], &trace.c[t]);
            let mut dh = vec![0.0; n];
            for i in 0..n {
                dh[i] = dh_up[t][i] + carry[i];
            }
            // h = (1-z) h_prev + z c
            let mut da_z = vec![0.0; n];
            let mut da_c = vec![0.0; n];
            let mut dh_prev = vec![0.0; n];
            for i in 0..n {
                let dz = dh[i] * (c[i] - h_prev[i]);
                da_z[i] = dz * z[i] * (1.0 - z[i]);
                let dc = dh[i] * z[i];
                da_c[i] = dc * (1.0 - c[i] * c[i]);
                dh_prev[i] = dh[i] * (1.0 - z[i]);
            }
            // candidate input U_h (r . h_prev)
            let mut drh = vec![0.0; n];
            self.u_h.t_matvec_add_into(&da_c, &mut drh);
            let mut da_r = vec![0.0; n];
            for i in 0..n {
                da_r[i] = drh[i] * h_prev[i] * r[i] * (1.0 - r[i]);
                dh_prev[i] += drh[i] * r[i];
            }
            self.u_z.t_matvec_add_into(&da_z, &mut dh_prev);
            self.u_r.t_matvec_add_into(&da_r, &mut dh_prev);

            let rh: Vec<f64> = r.iter().zip(h_prev.iter()).map(|(a, b)| a * b).collect();
            grads.w_z.add_outer(&da_z, &inputs[t]);
            grads.w_r.add_outer(&da_r, &inputs[t]);
            grads.w_h.add_outer(&da_c, &inputs[t]);
            grads.u_z.add_outer(&da_z, h_prev);
            grads.u_r.add_outer(&da_r, h_prev);
            grads.u_h.add_outer(&da_c, &rh);
            for i in 0..n {
                grads.b_z[i] += da_z[i];
                grads.b_r[i] += da_r[i];
                grads.b_h[i] += da_c[i];
            }
            carry = dh_prev;
        }
        Ok(())
    }
}

/// Per-vocab input projections: proj_*[v] = W_* emb(v). A masked position
/// contributes zero (its embedding is the zero vector).
#[derive(Debug, Clone)]
pub struct GruInputProj {
    pub p_z: Vec<Vec<f64>>,
    pub p_r: Vec<Vec<f64>>,
    pub p_h: Vec<Vec<f64>>,
}

/// Gradients accumulated on the projections, folded back into W gradients
/// at the end of a batch via dW_* += g_*[v] outer emb(v).
#[derive(Debug, Clone)]
pub struct GruProjGrads {
    pub g_z: Vec<Vec<f64>>,
    pub g_r: Vec<Vec<f64>>,
    pub g_h: Vec<Vec<f64>>,
}

impl GruProjGrads {
    pub fn zeros(vocab: usize, hidden: usize) -> Self {
        GruProjGrads {
            g_z: vec![vec![0.0; hidden]; vocab],
            g_r: vec![vec![0.0; hidden]; vocab],
            g_h: vec![vec![0.0; hidden]; vocab],
        }
    }

    pub fn fold_into(&self, emb_rows: &[Vec<f64>], grads: &mut GruParams) {
        for v in 0..emb_rows.len() {
            grads.w_z.add_outer(&self.g_z[v], &emb_rows[v]);
            grads.w_r.add_outer(&self.g_r[v], &emb_rows[v]);
            grads.w_h.add_outer(&self.g_h[v], &emb_rows[v]);
        }
    }
}

impl GruParams {
    /// Precomputes W_* emb(v) for every vocabulary id.
    pub fn project_vocab(&self, emb_rows: &[Vec<f64>]) -> GruInputProj {
        GruInputProj {
            p_z: emb_rows.iter().map(|e| self.w_z.matvec(e)).collect(),
            p_r: emb_rows.iter().map(|e| self.w_r.matvec(e)).collect(),
            p_h: emb_rows.iter().map(|e| self.w_h.matvec(e)).collect(),
        }
    }

    /// Recurrence over token ids; `None` marks a masked-out position whose
    /// embedding is the zero vector.
    pub fn forward_ids(&self, proj: &GruInputProj, ids: &[Option<u32>], h0: &[f64]) -> GruTrace {
        let n = self.hidden();
        let mut trace = GruTrace {
            h: Vec::with_capacity(ids.len()),
            z: Vec::with_capacity(ids.len()),
            r: Vec::with_capacity(ids.len()),
            c: Vec::with_capacity(ids.len()),
            h0: h0.to_vec(),
        };
        let mut h_prev = h0.to_vec();
        for id in ids {
            let mut az = self.b_z.clone();
            let mut ar = self.b_r.clone();
            let mut ac = self.b_h.clone();
            if let Some(v) = id {
                let v = *v as usize;
                for i in 0..n {
                    az[i] += proj.p_z[v][i];
                    ar[i] += proj.p_r[v][i];
                    ac[i] += proj.p_h[v][i];
                }
            }
            self.u_z.matvec_add_into(&h_prev, &mut az);
            self.u_r.matvec_add_into(&h_prev, &mut ar);
            let z: Vec<f64> = az.iter().map(|&a| sigmoid(a)).collect();
            let r: Vec<f64> = ar.iter().map(|&a| sigmoid(a)).collect();
            let rh: Vec<f64> = r.iter().zip(&h_prev).map(|(ri, hi)| ri * hi).collect();
            self.u_h.matvec_add_into(&rh, &mut ac);
            let c: Vec<f64> = ac.iter().map(|&a| a.tanh()).collect();
            let h: Vec<f64> = (0..n)
                .map(|i| (1.0 - z[i]) * h_prev[i] + z[i] * c[i])
                .collect();
            trace.z.push(z);
            trace.r.push(r);
            trace.c.push(c);
            h_prev = h.clone();
            trace.h.push(h);
        }
        trace
    }

    /// BPTT over the id path. U and b gradients go straight into `grads`;
    /// W gradients accumulate per vocab id in `proj_grads`.
    pub fn backward_ids(
        &self,
        ids: &[Option<u32>],
        trace: &GruTrace,
        dh_up: &[Vec<f64>],
        grads: &mut GruParams,
        proj_grads: &mut GruProjGrads,
    ) {
        let n = self.hidden();
        let mut carry = vec![0.0; n];
        let mut da_z = vec![0.0; n];
        let mut da_c = vec![0.0; n];
        let mut da_r = vec![0.0; n];
        for t in (0..ids.len()).rev() {
            let h_prev = if t == 0 { &trace.h0 } else { &trace.h[t - 1] };
            let (z, r, c) = (&trace.z[t], &trace.r[t], &trace.c[t]);
            let mut dh_prev = vec![0.0; n];
            let mut drh = vec![0.0; n];
            for i in 0..n {
                let dh = dh_up[t][i] + carry[i];
                let dz = dh * (c[i] - h_prev[i]);
                da_z[i] = dz * z[i] * (1.0 - z[i]);
                da_c[i] = dh * z[i] * (1.0 - c[i] * c[i]);
                dh_prev[i] = dh * (1.0 - z[i]);
            }
            self.u_h.t_matvec_add_into(&da_c, &mut drh);
            for i in 0..n {
                da_r[i] = drh[i] * h_prev[i] * r[i] * (1.0 - r[i]);
                dh_prev[i] += drh[i] * r[i];
            }
            self.u_z.t_matvec_add_into(&da_z, &mut dh_prev);
            self.u_r.t_matvec_add_into(&da_r, &mut dh_prev);

            let rh: Vec<f64> = r.iter().zip(h_prev.iter()).map(|(a, b)| a * b).collect();
            grads.u_z.add_outer(&da_z, h_prev);
            grads.u_r.add_outer(&da_r, h_prev);
            grads.u_h.add_outer(&da_c, &rh);
            for i in 0..n {
                grads.b_z[i] += da_z[i];
                grads.b_r[i] += da_r[i];
                grads.b_h[i] += da_c[i];
            }
            if let Some(v) = ids[t] {
                let v = v as usize;
                for i in 0..n {
                    proj_grads.g_z[v][i] += da_z[i];
                    proj_grads.g_r[v][i] += da_r[i];
                    proj_grads.g_h[v][i] += da_c[i];
                }
            }
            carry = dh_prev;
        }
    }
}
