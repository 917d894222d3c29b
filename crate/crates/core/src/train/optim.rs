use std::f64::consts::TAU;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{AnsatzSpec, ParameterVector};
use crate::error::{Error, Result};

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    #[default]
    Gd,
    Adam,
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gd" | "sgd" => Ok(Self::Gd),
            "adam" => Ok(Self::Adam),
            other => Err(Error::InvalidArgument(format!("unknown optimizer `{other}`"))),
        }
    }
}

fn check_lengths(params: &[f64], grads: &[f64]) -> Result<()> {
    if params.len() != grads.len() {
        return Err(Error::LengthMismatch {
            left: params.len(),
            right: grads.len(),
        });
    }
    Ok(())
}

/// `θ − lr·g`
pub fn sgd_update(params: &[f64], grads: &[f64], lr: f64) -> Result<Vec<f64>> {
    check_lengths(params, grads)?;
    Ok(params.iter().zip(grads).map(|(p, g)| p - lr * g).collect())
}

/// Adam moments; `step` counts completed updates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            step: 0,
        }
    }
}

/// One bias-corrected Adam step.
pub fn adam_update(state: &AdamState, params: &[f64], grads: &[f64], lr: f64) -> Result<(AdamState, Vec<f64>)> {
    check_lengths(params, grads)?;
    check_lengths(&state.m, params)?;
    check_lengths(&state.v, params)?;
    let step = state.step + 1;
    let m: Vec<f64> = state
        .m
        .iter()
        .zip(grads)
        .map(|(m, g)| ADAM_BETA1 * m + (1.0 - ADAM_BETA1) * g)
        .collect();
    let v: Vec<f64> = state
        .v
        .iter()
        .zip(grads)
        .map(|(v, g)| ADAM_BETA2 * v + (1.0 - ADAM_BETA2) * g * g)
        .collect();
    let c1 = 1.0 - ADAM_BETA1.powi(step as i32);
    let c2 = 1.0 - ADAM_BETA2.powi(step as i32);
    let updated = params
        .iter()
        .zip(m.iter().zip(&v))
        .map(|(p, (m, v))| p - lr * (m / c1) / ((v / c2).sqrt() + ADAM_EPSILON))
        .collect();
    Ok((AdamState { m, v, step }, updated))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OptimizerState {
    Gd,
    Adam(AdamState),
}

impl OptimizerState {
    pub fn new(kind: OptimizerKind, n_params: usize) -> Self {
        match kind {
            OptimizerKind::Gd => OptimizerState::Gd,
            OptimizerKind::Adam => OptimizerState::Adam(AdamState::new(n_params)),
        }
    }

    pub fn update(&mut self, params: &[f64], grads: &[f64], lr: f64) -> Result<Vec<f64>> {
        match self {
            OptimizerState::Gd => sgd_update(params, grads, lr),
            OptimizerState::Adam(state) => {
                let (next, updated) = adam_update(state, params, grads, lr)?;
                *state = next;
                Ok(updated)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitScheme {
    /// Uniform over `[0, 2π)`.
    #[default]
    Uniform,
    /// Uniform over `[−0.1, 0.1]`.
    Small,
}

/// Seeded initial values for `n` parameters.
pub fn init_vector(n: usize, scheme: InitScheme, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| match scheme {
            InitScheme::Uniform => rng.random_range(0.0..TAU),
            InitScheme::Small => rng.random_range(-0.1..=0.1),
        })
        .collect()
}

/// Uniform `[0, 2π)` angles for every slot of `spec`.
pub fn init_params(spec: &AnsatzSpec, seed: u64) -> ParameterVector {
    ParameterVector::new(init_vector(spec.param_count(), InitScheme::Uniform, seed)).expect("finite draws")
}
