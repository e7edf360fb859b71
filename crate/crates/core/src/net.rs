//! A small fully connected autoencoder with hand-written backpropagation.
//!
//! Parameters live in one flat vector so the optimizer, checkpoints and
//! finite-difference checks can treat them uniformly. Layer `l` stores its
//! weights row-major as `out x in`, followed by its biases.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::slicer::{
    composite_cost, sliced_distance_with, CostMode, DirectionSet, DistanceKind, LatentBatch,
    SliceOptions,
};

/// Layer widths. Hidden layers use a rectifier, output layers are linear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpSpec {
    pub input: usize,
    pub encoder_hidden: Vec<usize>,
    pub latent: usize,
    pub decoder_hidden: Vec<usize>,
}

impl MlpSpec {
    /// Encoder and decoder with mirrored hidden widths.
    pub fn symmetric(input: usize, hidden: &[usize], latent: usize) -> Self {
        Self {
            input,
            encoder_hidden: hidden.to_vec(),
            latent,
            decoder_hidden: hidden.iter().rev().copied().collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.input, self.latent]
            .into_iter()
            .chain(self.encoder_hidden.iter().copied())
            .chain(self.decoder_hidden.iter().copied());
        for w in all {
            if w == 0 {
                return Err(Error::invalid("widths", "every layer width must be positive"));
            }
        }
        Ok(())
    }

    fn encoder_widths(&self) -> Vec<usize> {
        let mut w = vec![self.input];
        w.extend(&self.encoder_hidden);
        w.push(self.latent);
        w
    }

    fn decoder_widths(&self) -> Vec<usize> {
        let mut w = vec![self.latent];
        w.extend(&self.decoder_hidden);
        w.push(self.input);
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct LayerShape {
    fan_in: usize,
    fan_out: usize,
    offset: usize,
    relu: bool,
}

impl LayerShape {
    fn weights(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.fan_in * self.fan_out
    }

    fn bias(&self) -> std::ops::Range<usize> {
        let b = self.offset + self.fan_in * self.fan_out;
        b..b + self.fan_out
    }

    fn end(&self) -> usize {
        self.bias().end
    }
}

fn layer_shapes(widths: &[usize], offset: usize) -> Vec<LayerShape> {
    let last = widths.len() - 2;
    let mut off = offset;
    widths
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let s = LayerShape {
                fan_in: w[0],
                fan_out: w[1],
                offset: off,
                relu: i != last,
            };
            off = s.end();
            s
        })
        .collect()
}

/// Activations kept from a forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// Input to each layer.
    inputs: Vec<Matrix>,
    /// Pre-activation output of each layer.
    pre: Vec<Matrix>,
}

/// Encoder and decoder parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Autoencoder {
    spec: MlpSpec,
    params: Vec<f64>,
}

impl Autoencoder {
    /// Uniform fan-in initialization: `sqrt(6 / fan_in)` bounds for layers
    /// followed by a rectifier, `sqrt(3 / fan_in)` for linear outputs.
    /// Biases start at zero.
    pub fn init<R: Rng + ?Sized>(spec: MlpSpec, rng: &mut R) -> Result<Self> {
        let mut net = Self::zeros(spec)?;
        for layer in net.encoder_layers().into_iter().chain(net.decoder_layers()) {
            let gain = if layer.relu { 6.0 } else { 3.0 };
            let bound = (gain / layer.fan_in as f64).sqrt();
            for w in &mut net.params[layer.weights()] {
                *w = rng.random_range(-bound..bound);
            }
        }
        Ok(net)
    }

    pub fn zeros(spec: MlpSpec) -> Result<Self> {
        spec.validate()?;
        let enc = layer_shapes(&spec.encoder_widths(), 0);
        let dec = layer_shapes(&spec.decoder_widths(), enc.last().unwrap().end());
        let len = dec.last().unwrap().end();
        Ok(Self {
            spec,
            params: vec![0.0; len],
        })
    }

    pub fn spec(&self) -> &MlpSpec {
        &self.spec
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    fn encoder_layers(&self) -> Vec<LayerShape> {
        layer_shapes(&self.spec.encoder_widths(), 0)
    }

    fn decoder_layers(&self) -> Vec<LayerShape> {
        let off = self.encoder_layers().last().unwrap().end();
        layer_shapes(&self.spec.decoder_widths(), off)
    }

    /// Mutable weights (`out x in`, row-major) and biases of encoder layer `l`.
    pub fn encoder_layer_mut(&mut self, l: usize) -> (&mut [f64], &mut [f64]) {
        let s = self.encoder_layers()[l];
        self.layer_mut(s)
    }

    /// Mutable weights and biases of decoder layer `l`.
    pub fn decoder_layer_mut(&mut self, l: usize) -> (&mut [f64], &mut [f64]) {
        let s = self.decoder_layers()[l];
        self.layer_mut(s)
    }

    fn layer_mut(&mut self, s: LayerShape) -> (&mut [f64], &mut [f64]) {
        let (w, b) = self.params[s.offset..s.end()].split_at_mut(s.fan_in * s.fan_out);
        (w, b)
    }

    fn forward(&self, layers: &[LayerShape], x: &Matrix) -> Result<(Matrix, ForwardCache)> {
        let expected = layers[0].fan_in;
        if x.cols() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: x.cols(),
            });
        }
        let n = x.rows();
        let mut cache = ForwardCache {
            inputs: Vec::with_capacity(layers.len()),
            pre: Vec::with_capacity(layers.len()),
        };
        let mut a = x.clone();
        for s in layers {
            let w = &self.params[s.weights()];
            let b = &self.params[s.bias()];
            let mut z = Matrix::zeros(n, s.fan_out);
            for (xi, zi) in a.row_iter().zip(z.as_mut_slice().chunks_exact_mut(s.fan_out)) {
                for (o, zo) in zi.iter_mut().enumerate() {
                    let row = &w[o * s.fan_in..(o + 1) * s.fan_in];
                    *zo = b[o] + row.iter().zip(xi).map(|(p, q)| p * q).sum::<f64>();
                }
            }
            let next = if s.relu {
                let mut h = z.clone();
                h.as_mut_slice().iter_mut().for_each(|v| *v = v.max(0.0));
                h
            } else {
                z.clone()
            };
            cache.inputs.push(std::mem::replace(&mut a, next));
            cache.pre.push(z);
        }
        Ok((a, cache))
    }

    // Accumulates parameter gradients into `grad` and returns d loss / d input.
    fn backward(
        &self,
        layers: &[LayerShape],
        cache: &ForwardCache,
        upstream: Matrix,
        grad: &mut [f64],
    ) -> Matrix {
        let mut delta = upstream;
        for (l, s) in layers.iter().enumerate().rev() {
            if s.relu {
                // derivative taken as 0 at exactly 0
                for (d, z) in delta.as_mut_slice().iter_mut().zip(cache.pre[l].as_slice()) {
                    if *z <= 0.0 {
                        *d = 0.0;
                    }
                }
            }
            let input = &cache.inputs[l];
            let w = &self.params[s.weights()];
            let (gw, gb) = grad[s.offset..s.end()].split_at_mut(s.fan_in * s.fan_out);
            let mut next = Matrix::zeros(input.rows(), s.fan_in);
            for ((d, xi), ni) in delta
                .row_iter()
                .zip(input.row_iter())
                .zip(next.as_mut_slice().chunks_exact_mut(s.fan_in))
            {
                for (o, &dz) in d.iter().enumerate() {
                    if dz == 0.0 {
                        continue;
                    }
                    gb[o] += dz;
                    let grow = &mut gw[o * s.fan_in..(o + 1) * s.fan_in];
                    let wrow = &w[o * s.fan_in..(o + 1) * s.fan_in];
                    for j in 0..s.fan_in {
                        grow[j] += dz * xi[j];
                        ni[j] += dz * wrow[j];
                    }
                }
            }
            delta = next;
        }
        delta
    }

    pub fn encode(&self, x: &Matrix) -> Result<LatentBatch> {
        self.encode_cached(x).map(|(z, _)| z)
    }

    /// Forward pass through the encoder, keeping activations for backprop.
    pub fn encode_cached(&self, x: &Matrix) -> Result<(LatentBatch, ForwardCache)> {
        let (z, cache) = self.forward(&self.encoder_layers(), x)?;
        Ok((LatentBatch::new(z)?, cache))
    }

    pub fn decode(&self, z: &LatentBatch) -> Result<Matrix> {
        self.decode_cached(z).map(|(x, _)| x)
    }

    pub fn decode_cached(&self, z: &LatentBatch) -> Result<(Matrix, ForwardCache)> {
        self.forward(&self.decoder_layers(), z.matrix())
    }

    pub fn decode_matrix(&self, z: &Matrix) -> Result<Matrix> {
        self.forward(&self.decoder_layers(), z).map(|(x, _)| x)
    }

    /// Cost and its gradient with respect to every parameter.
    ///
    /// `rng` only feeds the SW comparison draws, so passing a clone of the
    /// same generator reproduces the same cost.
    pub fn loss_and_gradient<R: Rng + ?Sized>(
        &self,
        x: &Matrix,
        objective: &Objective,
        dirs: &DirectionSet,
        rng: &mut R,
    ) -> Result<(CostBreakdown, Vec<f64>)> {
        let (latent, enc_cache) = self.encode_cached(x)?;
        let (xhat, dec_cache) = self.decode_cached(&latent)?;
        let recon = mse(x, &xhat)?;
        let sliced = sliced_distance_with(&latent, dirs, objective.kind, rng, objective.slice)?;
        let cost = composite_cost(recon, sliced.distance, objective.mode)?;

        let n = x.rows() as f64;
        let mut d_xhat = xhat;
        for (d, t) in d_xhat.as_mut_slice().iter_mut().zip(x.as_slice()) {
            *d = 2.0 * (*d - t) / n;
        }
        let mut grad = vec![0.0; self.params.len()];
        let mut d_latent = self.backward(&self.decoder_layers(), &dec_cache, d_xhat, &mut grad);
        if cost.penalty_slope != 0.0 {
            for (d, g) in d_latent
                .as_mut_slice()
                .iter_mut()
                .zip(sliced.gradient.as_slice())
            {
                *d += cost.penalty_slope * g;
            }
        }
        self.backward(&self.encoder_layers(), &enc_cache, d_latent, &mut grad);
        Ok((
            CostBreakdown {
                mse: recon,
                sliced: sliced.distance,
                penalty_term: cost.penalty_term,
                cost: cost.total,
            },
            grad,
        ))
    }
}

/// Mean over points of the squared Euclidean reconstruction error.
pub fn mse(x: &Matrix, xhat: &Matrix) -> Result<f64> {
    if x.rows() != xhat.rows() || x.cols() != xhat.cols() {
        return Err(Error::DimensionMismatch {
            expected: x.rows() * x.cols(),
            actual: xhat.rows() * xhat.cols(),
        });
    }
    if x.rows() == 0 {
        return Err(Error::Empty);
    }
    let sq: f64 = x
        .as_slice()
        .iter()
        .zip(xhat.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sq / x.rows() as f64)
}

/// What the penalty is and how it enters the cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective {
    pub kind: DistanceKind,
    pub mode: CostMode,
    pub slice: SliceOptions,
}

impl Objective {
    pub fn new(kind: DistanceKind, mode: CostMode) -> Self {
        Self {
            kind,
            mode,
            slice: SliceOptions::default(),
        }
    }
}

/// Per-term cost values from one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub mse: f64,
    pub sliced: f64,
    pub penalty_term: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Optimizer {
    Adam {
        lr: f64,
        beta1: f64,
        beta2: f64,
        eps: f64,
    },
    Sgd {
        lr: f64,
    },
}

impl Optimizer {
    pub fn adam(lr: f64) -> Self {
        Optimizer::Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::adam(1e-3)
    }
}

/// Everything that evolves during training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainState {
    pub net: Autoencoder,
    pub optimizer: Optimizer,
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
    step: u64,
    pub rng: ChaCha8Rng,
}

const CHECKPOINT_FORMAT: &str = "sliced-ae-checkpoint";
const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    format: String,
    version: u32,
    state: TrainState,
}

impl TrainState {
    /// Fresh state; the seed drives both initialization and all later sampling.
    pub fn new(spec: MlpSpec, optimizer: Optimizer, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = Autoencoder::init(spec, &mut rng)?;
        Ok(Self::from_net(net, optimizer, rng))
    }

    pub fn from_net(net: Autoencoder, optimizer: Optimizer, rng: ChaCha8Rng) -> Self {
        let n = net.param_count();
        Self {
            net,
            optimizer,
            first_moment: vec![0.0; n],
            second_moment: vec![0.0; n],
            step: 0,
            rng,
        }
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn encode(&self, x: &Matrix) -> Result<LatentBatch> {
        self.net.encode(x)
    }

    pub fn decode(&self, z: &LatentBatch) -> Result<Matrix> {
        self.net.decode(z)
    }

    /// One optimizer step on batch `x`. The state is left untouched when the
    /// gradient is not finite.
    pub fn backward_step(
        &mut self,
        x: &Matrix,
        objective: &Objective,
        dirs: &DirectionSet,
    ) -> Result<CostBreakdown> {
        let (cost, grad) = self.net.loss_and_gradient(x, objective, dirs, &mut self.rng)?;
        if let Some(i) = grad.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFiniteGradient {
                step: self.step,
                what: format!("parameter {i} (cost {:?})", cost),
            });
        }
        self.apply(&grad);
        Ok(cost)
    }

    fn apply(&mut self, grad: &[f64]) {
        self.step += 1;
        match self.optimizer {
            Optimizer::Sgd { lr } => {
                for (p, g) in self.net.params.iter_mut().zip(grad) {
                    *p -= lr * g;
                }
            }
            Optimizer::Adam {
                lr,
                beta1,
                beta2,
                eps,
            } => {
                let t = self.step as i32;
                let c1 = 1.0 - beta1.powi(t);
                let c2 = 1.0 - beta2.powi(t);
                for (((p, g), m), v) in self
                    .net
                    .params
                    .iter_mut()
                    .zip(grad)
                    .zip(&mut self.first_moment)
                    .zip(&mut self.second_moment)
                {
                    *m = beta1 * *m + (1.0 - beta1) * g;
                    *v = beta2 * *v + (1.0 - beta2) * g * g;
                    *p -= lr * (*m / c1) / ((*v / c2).sqrt() + eps);
                }
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let file = CheckpointFile {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            state: self.clone(),
        };
        serde_json::to_string(&file).map_err(|e| Error::Checkpoint(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CheckpointFile =
            serde_json::from_str(text).map_err(|e| Error::Checkpoint(e.to_string()))?;
        if file.format != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!("unexpected format `{}`", file.format)));
        }
        if file.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {}", file.version)));
        }
        let s = file.state;
        let n = Autoencoder::zeros(s.net.spec.clone())?.param_count();
        if s.net.params.len() != n || s.first_moment.len() != n || s.second_moment.len() != n {
            return Err(Error::Checkpoint("parameter count does not match the layer widths".into()));
        }
        Ok(s)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
