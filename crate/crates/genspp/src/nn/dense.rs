//! Fully connected layer y = Wx + b.

use rand::Rng;

use super::linalg::Mat;

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub w: Mat, // out x in
    pub b: Vec<f64>,
}

impl Dense {
    pub fn zeros(out_dim: usize, in_dim: usize) -> Self {
        Dense {
            w: Mat::zeros(out_dim, in_dim),
            b: vec![0.0; out_dim],
        }
    }

    pub fn init(out_dim: usize, in_dim: usize, rng: &mut impl Rng) -> Self {
        Dense {
            w: Mat::init_uniform(out_dim, in_dim, rng),
            b: vec![0.0; out_dim],
        }
    }

    pub fn out_dim(&self) -> usize {
        self.w.rows
    }

    pub fn in_dim(&self) -> usize {
        self.w.cols
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.b.clone();
        self.w.matvec_add_into(x, &mut y);
        y
    }

    /// Accumulates dW, db into `grads` and returns dx.
    pub fn backward(&self, x: &[f64], dy: &[f64], grads: &mut Dense) -> Vec<f64> {
        grads.w.add_outer(dy, x);
        for (g, d) in grads.b.iter_mut().zip(dy) {
            *g += d;
        }
        let mut dx = vec![0.0; self.in_dim()];
        self.w.t_matvec_add_into(dy, &mut dx);
        dx
    }
}
