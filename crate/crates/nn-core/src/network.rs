use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NnError, Result};
use crate::layer::{Layer, LayerCache, LayerSpec};
use crate::tensor::Tensor;

/// Gradients of a scalar loss with respect to a network.
#[derive(Debug, Clone)]
pub struct Gradients {
    /// Flat parameter gradients, aligned with [`Network::params_flat`].
    pub params: Vec<f64>,
    /// Gradient with respect to the network input.
    pub input: Tensor,
}

struct ForwardCache {
    per_layer: Vec<LayerCache>,
    output_shape: Vec<usize>,
}

/// An ordered stack of layers with a seeded generator for dropout masks.
///
/// `forward` caches activations for exactly one `backward`; calling `backward`
/// without a preceding cached forward is an error. Cloning a network clones
/// the generator state, so clones replay identical dropout masks.
pub struct Network {
    layers: Vec<Layer>,
    rng: ChaCha8Rng,
    cache: Option<ForwardCache>,
}

impl Clone for Network {
    fn clone(&self) -> Self {
        Self {
            layers: self.layers.clone(),
            rng: self.rng.clone(),
            cache: None,
        }
    }
}

impl std::fmt::Debug for Network {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Network")
            .field("layers", &self.layers.iter().map(|l| l.kind_name()).collect::<Vec<_>>())
            .field("param_count", &self.param_count())
            .finish()
    }
}

/// On-disk form: a flat document with the layer list only.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    layers: Vec<Layer>,
}

impl Network {
    /// Builds a network from explicit layers. `seed` drives dropout masks.
    pub fn new(layers: Vec<Layer>, seed: u64) -> Result<Self> {
        for layer in &layers {
            layer.validate()?;
        }
        Ok(Self {
            layers,
            rng: ChaCha8Rng::seed_from_u64(seed),
            cache: None,
        })
    }

    /// Initializes fresh weights from the given specs. The same seed drives
    /// both weight init and subsequent dropout masks.
    pub fn from_specs(specs: &[LayerSpec], seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = specs
            .iter()
            .map(|s| Layer::init(s, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            layers,
            rng,
            cache: None,
        })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(Layer::param_count).sum()
    }

    /// All parameters concatenated in layer order, weight before bias.
    pub fn params_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            layer.append_params(&mut out);
        }
        out
    }

    pub fn set_params_flat(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(NnError::ParamCountMismatch {
                expected: self.param_count(),
                got: params.len(),
            });
        }
        let mut offset = 0;
        for layer in &mut self.layers {
            layer.load_params(params, &mut offset);
        }
        self.cache = None;
        Ok(())
    }

    /// Forward pass. With `training` set, dropout masks are drawn from the
    /// network's generator; otherwise dropout is the identity. Activations are
    /// cached for one subsequent [`Network::backward`].
    pub fn forward(&mut self, input: &Tensor, training: bool) -> Result<Tensor> {
        let mut per_layer = Vec::with_capacity(self.layers.len());
        let mut current = input.clone();
        for (idx, layer) in self.layers.iter().enumerate() {
            let (out, cache) = layer.forward(&current, training, &mut self.rng, idx)?;
            per_layer.push(cache);
            current = out;
        }
        self.cache = Some(ForwardCache {
            per_layer,
            output_shape: current.shape().to_vec(),
        });
        Ok(current)
    }

    /// Inference without caching or generator use; dropout is the identity,
    /// so this is pure and usable on `&self`.
    pub fn predict(&self, input: &Tensor) -> Result<Tensor> {
        let mut throwaway = ChaCha8Rng::seed_from_u64(0);
        let mut current = input.clone();
        for (idx, layer) in self.layers.iter().enumerate() {
            let (out, _) = layer.forward(&current, false, &mut throwaway, idx)?;
            current = out;
        }
        Ok(current)
    }

    /// Backward pass through the activations cached by the last `forward`.
    /// Consumes the cache; returns parameter gradients (aligned with
    /// `params_flat`) and the gradient with respect to the input.
    pub fn backward(&mut self, output_gradient: &Tensor) -> Result<Gradients> {
        let cache = self.cache.take().ok_or(NnError::NoCachedForward)?;
        if output_gradient.shape() != cache.output_shape.as_slice() {
            return Err(NnError::ShapeMismatch {
                layer: self.layers.len().saturating_sub(1),
                kind: "output gradient".into(),
                expected: format!("{:?}", cache.output_shape),
                got: format!("{:?}", output_gradient.shape()),
            });
        }
        let mut param_grads_rev: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len());
        let mut grad = output_gradient.clone();
        for (layer, lcache) in self.layers.iter().zip(cache.per_layer.iter()).rev() {
            let (pg, dx) = layer.backward(lcache, &grad);
            param_grads_rev.push(pg);
            grad = dx;
        }
        let mut params = Vec::with_capacity(self.param_count());
        for pg in param_grads_rev.into_iter().rev() {
            params.extend(pg);
        }
        Ok(Gradients {
            params,
            input: grad,
        })
    }

    /// Whether a cached forward pass is pending a backward.
    pub fn has_cached_forward(&self) -> bool {
        self.cache.is_some()
    }

    /// Reseeds the dropout generator (does not touch weights).
    pub fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    /// Serializes weights to the flat JSON layer-list document.
    pub fn to_json(&self) -> Result<String> {
        let doc = NetworkDoc {
            layers: self.layers.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Restores a network from [`Network::to_json`] output. The dropout
    /// generator starts from seed 0; callers that resume training reseed or
    /// restore generator state separately.
    pub fn from_json(json: &str) -> Result<Self> {
        let doc: NetworkDoc = serde_json::from_str(json)?;
        Self::new(doc.layers, 0)
    }
}

/// Serde passthrough so larger checkpoints can embed a network document.
impl Serialize for Network {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        NetworkDoc {
            layers: self.layers.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Network {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = NetworkDoc::deserialize(deserializer)?;
        Network::new(doc.layers, 0).map_err(serde::de::Error::custom)
    }
}
