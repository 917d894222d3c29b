use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::train::{InitScheme, SequenceModel};

/// Classical Elman network used as the comparison model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BaselineConfig {
    pub hidden: usize,
    pub output_bias: bool,
}

impl Default for BaselineConfig {
    /// Hidden size 6 with an output bias: 49 parameters.
    fn default() -> Self {
        Self {
            hidden: 6,
            output_bias: true,
        }
    }
}

impl BaselineConfig {
    /// Input weights, recurrent weights, output weights, optional bias.
    pub fn param_count(&self) -> usize {
        let h = self.hidden;
        h + h * h + h + usize::from(self.output_bias)
    }

    pub fn validate(&self) -> Result<()> {
        if self.hidden == 0 {
            return Err(Error::InvalidArgument("hidden size must be at least 1".into()));
        }
        Ok(())
    }
}

/// `h_t = tanh(v·x_t + W h_{t−1})`, `y = u·h_T + b`, with `h_0 = 0`.
///
/// Weights are laid out as `v` (hidden), `W` (hidden², row-major), `u`
/// (hidden), then the bias if enabled.
pub fn baseline_rnn_forward(config: &BaselineConfig, window: &[f64], weights: &[f64]) -> Result<f64> {
    config.validate()?;
    if weights.len() != config.param_count() {
        return Err(Error::LengthMismatch {
            left: weights.len(),
            right: config.param_count(),
        });
    }
    if window.is_empty() {
        return Err(Error::Empty("window"));
    }
    let n = config.hidden;
    let (v, rest) = weights.split_at(n);
    let (w, rest) = rest.split_at(n * n);
    let (u, bias) = rest.split_at(n);
    let mut h = vec![0.0; n];
    let mut next = vec![0.0; n];
    for &x in window {
        for (i, out) in next.iter_mut().enumerate() {
            let rec: f64 = w[i * n..(i + 1) * n].iter().zip(&h).map(|(a, b)| a * b).sum();
            *out = (v[i] * x + rec).tanh();
        }
        std::mem::swap(&mut h, &mut next);
    }
    let y: f64 = u.iter().zip(&h).map(|(a, b)| a * b).sum();
    Ok(y + bias.first().copied().unwrap_or(0.0))
}

/// The baseline as a [`SequenceModel`]: encoding angles are mapped back to
/// `[0, 1]` inputs and the output is read on the unit scale, so both models
/// see the same data and loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaselineRnn {
    pub config: BaselineConfig,
}

impl SequenceModel for BaselineRnn {
    type Batch = Vec<Vec<f64>>;

    fn param_count(&self) -> usize {
        self.config.param_count()
    }

    fn prepare(&self, inputs: &[Vec<f64>]) -> Result<Self::Batch> {
        self.config.validate()?;
        Ok(inputs.iter().map(|w| w.iter().map(|a| a / PI).collect()).collect())
    }

    fn outputs(&self, params: &[f64], batch: &Self::Batch, _stream: u64) -> Result<Vec<f64>> {
        batch
            .iter()
            .map(|w| baseline_rnn_forward(&self.config, w, params))
            .collect()
    }

    /// Uniform in `±1/√hidden` (Glorot-like); the small scheme uses `±0.1`.
    fn initial_params(&self, scheme: InitScheme, seed: u64) -> Vec<f64> {
        let bound = match scheme {
            InitScheme::Uniform => 1.0 / (self.config.hidden as f64).sqrt(),
            InitScheme::Small => 0.1,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.param_count()).map(|_| rng.random_range(-bound..=bound)).collect()
    }
}
