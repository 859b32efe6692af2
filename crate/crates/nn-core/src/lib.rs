//! Minimal feedforward neural-network engine: dense and 1-D convolution
//! layers, ReLU/tanh activations, inverted dropout, softmax cross-entropy,
//! and Adam — all in f64 with exact analytic gradients.
//!
//! Networks are single-writer during forward/backward (activations are cached
//! between the two); clones are independent and may run read-only inference
//! concurrently. Weights serialize to a flat JSON layer list that round-trips
//! bit-exactly for finite values.

mod adam;
mod error;
mod layer;
mod loss;
mod network;
mod tensor;

pub use adam::AdamState;
pub use error::{NnError, Result};
pub use layer::{Layer, LayerSpec};
pub use loss::{softmax, softmax_cross_entropy};
pub use network::{Gradients, Network};
pub use tensor::Tensor;
