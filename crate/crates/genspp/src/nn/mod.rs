//! Minimal neural-network engine: GRU cell, dense layer, temporal max
//! pooling, softmax cross-entropy, reverse-mode gradients, Adam, and the
//! flat-vector parameter codec.
//!
//! Everything is f64 and single-threaded per instance; distinct instances
//! are safe to use from different threads.

pub mod adam;
pub mod dense;
pub mod gru;
pub mod layout;
pub mod linalg;
pub mod loss;
pub mod pool;

pub use adam::AdamState;
pub use dense::Dense;
pub use gru::{GruInputProj, GruParams, GruProjGrads, GruTrace};
pub use layout::{ParamLayout, Segment};
pub use linalg::{sigmoid, Mat};
pub use loss::{sigmoid_bce, softmax_cross_entropy};
pub use pool::{max_pool_backward, max_pool_time};
