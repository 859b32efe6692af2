use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NnError, Result};
use crate::tensor::Tensor;

/// A single network layer.
///
/// `Dense` flattens whatever input it receives to a vector (row-major), so a
/// conv stack can feed a dense head without an explicit reshape layer.
/// `Conv1d` is a valid-padding, stride-1 convolution over `[channels, length]`
/// input with kernel width taken from the weight shape.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Layer {
    Dense {
        /// `[out, in]`
        weight: Tensor,
        /// `[out]`
        bias: Tensor,
    },
    Conv1d {
        /// `[out_channels, in_channels, kernel_width]`
        weight: Tensor,
        /// `[out_channels]`
        bias: Tensor,
    },
    Relu,
    Tanh,
    Dropout {
        rate: f64,
    },
}

/// Architecture description used to initialize a [`Layer`] with fresh weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LayerSpec {
    Dense {
        input: usize,
        output: usize,
    },
    Conv1d {
        in_channels: usize,
        out_channels: usize,
        kernel: usize,
    },
    Relu,
    Tanh,
    Dropout {
        rate: f64,
    },
}

/// Values cached by a forward pass, consumed by the matching backward pass.
#[derive(Debug, Clone)]
pub(crate) enum LayerCache {
    Dense { input: Tensor },
    Conv1d { input: Tensor },
    Relu { input: Tensor },
    Tanh { output: Tensor },
    /// `None` when the pass ran with `training == false` (identity).
    Dropout { mask: Option<Tensor> },
}

fn glorot_uniform<R: Rng>(fan_in: usize, fan_out: usize, len: usize, rng: &mut R) -> Vec<f64> {
    let a = (6.0 / (fan_in + fan_out) as f64).sqrt();
    (0..len).map(|_| rng.random_range(-a..a)).collect()
}

impl Layer {
    /// Initializes a layer from its spec. Weights are uniform(-a, a) with
    /// a = sqrt(6 / (fan_in + fan_out)); biases start at zero.
    pub fn init<R: Rng>(spec: &LayerSpec, rng: &mut R) -> Result<Self> {
        match *spec {
            LayerSpec::Dense { input, output } => {
                if input == 0 || output == 0 {
                    return Err(NnError::InvalidConfig(
                        "dense layer dimensions must be positive".into(),
                    ));
                }
                let weight =
                    Tensor::from_parts(vec![output, input], glorot_uniform(input, output, input * output, rng));
                let bias = Tensor::zeros(vec![output]);
                Ok(Layer::Dense { weight, bias })
            }
            LayerSpec::Conv1d {
                in_channels,
                out_channels,
                kernel,
            } => {
                if in_channels == 0 || out_channels == 0 || kernel == 0 {
                    return Err(NnError::InvalidConfig(
                        "conv1d layer dimensions must be positive".into(),
                    ));
                }
                let fan_in = in_channels * kernel;
                let fan_out = out_channels * kernel;
                let weight = Tensor::from_parts(
                    vec![out_channels, in_channels, kernel],
                    glorot_uniform(fan_in, fan_out, out_channels * in_channels * kernel, rng),
                );
                let bias = Tensor::zeros(vec![out_channels]);
                Ok(Layer::Conv1d { weight, bias })
            }
            LayerSpec::Relu => Ok(Layer::Relu),
            LayerSpec::Tanh => Ok(Layer::Tanh),
            LayerSpec::Dropout { rate } => {
                Self::check_dropout_rate(rate)?;
                Ok(Layer::Dropout { rate })
            }
        }
    }

    fn check_dropout_rate(rate: f64) -> Result<()> {
        if !(0.0..1.0).contains(&rate) {
            return Err(NnError::InvalidConfig(format!(
                "dropout rate must be in [0, 1), got {rate}"
            )));
        }
        Ok(())
    }

    /// Validates parameter shape consistency (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        match self {
            Layer::Dense { weight, bias } => {
                if weight.rank() != 2 {
                    return Err(NnError::InvalidConfig(format!(
                        "dense weight must be rank 2, got shape {:?}",
                        weight.shape()
                    )));
                }
                if bias.shape() != [weight.shape()[0]] {
                    return Err(NnError::InvalidConfig(format!(
                        "dense bias shape {:?} does not match weight rows {}",
                        bias.shape(),
                        weight.shape()[0]
                    )));
                }
                Ok(())
            }
            Layer::Conv1d { weight, bias } => {
                if weight.rank() != 3 {
                    return Err(NnError::InvalidConfig(format!(
                        "conv1d weight must be rank 3, got shape {:?}",
                        weight.shape()
                    )));
                }
                if bias.shape() != [weight.shape()[0]] {
                    return Err(NnError::InvalidConfig(format!(
                        "conv1d bias shape {:?} does not match out channels {}",
                        bias.shape(),
                        weight.shape()[0]
                    )));
                }
                Ok(())
            }
            Layer::Dropout { rate } => Self::check_dropout_rate(*rate),
            Layer::Relu | Layer::Tanh => Ok(()),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Layer::Dense { .. } => "dense",
            Layer::Conv1d { .. } => "conv1d",
            Layer::Relu => "relu",
            Layer::Tanh => "tanh",
            Layer::Dropout { .. } => "dropout",
        }
    }

    pub fn param_count(&self) -> usize {
        match self {
            Layer::Dense { weight, bias } | Layer::Conv1d { weight, bias } => {
                weight.len() + bias.len()
            }
            _ => 0,
        }
    }

    pub(crate) fn append_params(&self, out: &mut Vec<f64>) {
        if let Layer::Dense { weight, bias } | Layer::Conv1d { weight, bias } = self {
            out.extend_from_slice(weight.data());
            out.extend_from_slice(bias.data());
        }
    }

    pub(crate) fn load_params(&mut self, src: &[f64], offset: &mut usize) {
        if let Layer::Dense { weight, bias } | Layer::Conv1d { weight, bias } = self {
            let w = weight.len();
            weight.data_mut().copy_from_slice(&src[*offset..*offset + w]);
            *offset += w;
            let b = bias.len();
            bias.data_mut().copy_from_slice(&src[*offset..*offset + b]);
            *offset += b;
        }
    }

    fn shape_err(&self, layer_idx: usize, expected: String, got: &[usize]) -> NnError {
        NnError::ShapeMismatch {
            layer: layer_idx,
            kind: self.kind_name().into(),
            expected,
            got: format!("{got:?}"),
        }
    }

    pub(crate) fn forward<R: Rng>(
        &self,
        input: &Tensor,
        training: bool,
        rng: &mut R,
        layer_idx: usize,
    ) -> Result<(Tensor, LayerCache)> {
        match self {
            Layer::Dense { weight, bias } => {
                let out_dim = weight.shape()[0];
                let in_dim = weight.shape()[1];
                if input.len() != in_dim {
                    return Err(self.shape_err(
                        layer_idx,
                        format!("input with {in_dim} elements"),
                        input.shape(),
                    ));
                }
                let w = weight.data();
                let x = input.data();
                let mut y = bias.data().to_vec();
                for (o, yo) in y.iter_mut().enumerate() {
                    let row = &w[o * in_dim..(o + 1) * in_dim];
                    let mut acc = 0.0;
                    for (wi, xi) in row.iter().zip(x) {
                        acc += wi * xi;
                    }
                    *yo += acc;
                }
                Ok((
                    Tensor::from_parts(vec![out_dim], y),
                    LayerCache::Dense {
                        input: input.clone(),
                    },
                ))
            }
            Layer::Conv1d { weight, bias } => {
                let out_ch = weight.shape()[0];
                let in_ch = weight.shape()[1];
                let k = weight.shape()[2];
                if input.rank() != 2 || input.shape()[0] != in_ch || input.shape()[1] < k {
                    return Err(self.shape_err(
                        layer_idx,
                        format!("[{in_ch}, length >= {k}]"),
                        input.shape(),
                    ));
                }
                let len = input.shape()[1];
                let out_len = len - k + 1;
                let x = input.data();
                let w = weight.data();
                let mut y = vec![0.0; out_ch * out_len];
                for oc in 0..out_ch {
                    let b = bias.data()[oc];
                    for i in 0..out_len {
                        let mut acc = b;
                        for ic in 0..in_ch {
                            let wrow = &w[(oc * in_ch + ic) * k..(oc * in_ch + ic + 1) * k];
                            let xrow = &x[ic * len + i..ic * len + i + k];
                            for (wj, xj) in wrow.iter().zip(xrow) {
                                acc += wj * xj;
                            }
                        }
                        y[oc * out_len + i] = acc;
                    }
                }
                Ok((
                    Tensor::from_parts(vec![out_ch, out_len], y),
                    LayerCache::Conv1d {
                        input: input.clone(),
                    },
                ))
            }
            Layer::Relu => {
                let y: Vec<f64> = input.data().iter().map(|&v| v.max(0.0)).collect();
                Ok((
                    Tensor::from_parts(input.shape().to_vec(), y),
                    LayerCache::Relu {
                        input: input.clone(),
                    },
                ))
            }
            Layer::Tanh => {
                let y: Vec<f64> = input.data().iter().map(|&v| v.tanh()).collect();
                let out = Tensor::from_parts(input.shape().to_vec(), y);
                Ok((
                    out.clone(),
                    LayerCache::Tanh { output: out },
                ))
            }
            Layer::Dropout { rate } => {
                if !training {
                    return Ok((input.clone(), LayerCache::Dropout { mask: None }));
                }
                let keep = 1.0 - rate;
                let scale = 1.0 / keep;
                let mask: Vec<f64> = (0..input.len())
                    .map(|_| if rng.random::<f64>() < keep { scale } else { 0.0 })
                    .collect();
                let y: Vec<f64> = input
                    .data()
                    .iter()
                    .zip(&mask)
                    .map(|(v, m)| v * m)
                    .collect();
                Ok((
                    Tensor::from_parts(input.shape().to_vec(), y),
                    LayerCache::Dropout {
                        mask: Some(Tensor::from_parts(input.shape().to_vec(), mask)),
                    },
                ))
            }
        }
    }

    /// Returns `(parameter gradients in weight-then-bias order, input gradient)`.
    pub(crate) fn backward(&self, cache: &LayerCache, out_grad: &Tensor) -> (Vec<f64>, Tensor) {
        match (self, cache) {
            (Layer::Dense { weight, .. }, LayerCache::Dense { input }) => {
                let out_dim = weight.shape()[0];
                let in_dim = weight.shape()[1];
                debug_assert_eq!(out_grad.len(), out_dim);
                let g = out_grad.data();
                let x = input.data();
                let w = weight.data();
                let mut grads = Vec::with_capacity(out_dim * in_dim + out_dim);
                for go in g.iter().take(out_dim) {
                    for xi in x.iter().take(in_dim) {
                        grads.push(go * xi);
                    }
                }
                grads.extend_from_slice(g);
                let mut dx = vec![0.0; in_dim];
                for (o, go) in g.iter().enumerate() {
                    let row = &w[o * in_dim..(o + 1) * in_dim];
                    for (dxi, wi) in dx.iter_mut().zip(row) {
                        *dxi += go * wi;
                    }
                }
                (grads, Tensor::from_parts(input.shape().to_vec(), dx))
            }
            (Layer::Conv1d { weight, .. }, LayerCache::Conv1d { input }) => {
                let out_ch = weight.shape()[0];
                let in_ch = weight.shape()[1];
                let k = weight.shape()[2];
                let len = input.shape()[1];
                let out_len = len - k + 1;
                debug_assert_eq!(out_grad.shape(), &[out_ch, out_len]);
                let g = out_grad.data();
                let x = input.data();
                let w = weight.data();
                let mut dw = vec![0.0; out_ch * in_ch * k];
                let mut db = vec![0.0; out_ch];
                let mut dx = vec![0.0; in_ch * len];
                for oc in 0..out_ch {
                    let grow = &g[oc * out_len..(oc + 1) * out_len];
                    db[oc] = grow.iter().sum();
                    for ic in 0..in_ch {
                        let wbase = (oc * in_ch + ic) * k;
                        for j in 0..k {
                            let mut acc = 0.0;
                            for (i, gi) in grow.iter().enumerate() {
                                acc += gi * x[ic * len + i + j];
                                // dx accumulation folded into the same walk below
                            }
                            dw[wbase + j] = acc;
                        }
                        for (i, gi) in grow.iter().enumerate() {
                            for j in 0..k {
                                dx[ic * len + i + j] += gi * w[wbase + j];
                            }
                        }
                    }
                }
                let mut grads = dw;
                grads.extend_from_slice(&db);
                (grads, Tensor::from_parts(input.shape().to_vec(), dx))
            }
            (Layer::Relu, LayerCache::Relu { input }) => {
                let dx: Vec<f64> = input
                    .data()
                    .iter()
                    .zip(out_grad.data())
                    .map(|(&x, &g)| if x > 0.0 { g } else { 0.0 })
                    .collect();
                (Vec::new(), Tensor::from_parts(input.shape().to_vec(), dx))
            }
            (Layer::Tanh, LayerCache::Tanh { output }) => {
                let dx: Vec<f64> = output
                    .data()
                    .iter()
                    .zip(out_grad.data())
                    .map(|(&y, &g)| g * (1.0 - y * y))
                    .collect();
                (Vec::new(), Tensor::from_parts(output.shape().to_vec(), dx))
            }
            (Layer::Dropout { .. }, LayerCache::Dropout { mask }) => {
                let dx = match mask {
                    Some(m) => out_grad
                        .data()
                        .iter()
                        .zip(m.data())
                        .map(|(&g, &m)| g * m)
                        .collect(),
                    None => out_grad.data().to_vec(),
                };
                (Vec::new(), Tensor::from_parts(out_grad.shape().to_vec(), dx))
            }
            _ => unreachable!("layer/cache kind mismatch"),
        }
    }
}
