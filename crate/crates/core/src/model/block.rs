use serde::{Deserialize, Serialize};

use super::config::{role_schedule, ModelConfig, Roles};
use crate::circuit::{build_ansatz, build_encoder, Circuit, ParameterVector};
use crate::error::{Error, Result};
use crate::sim::DensityMatrix;

/// How the per-step prediction is read off the readout qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Readout {
    /// Exact `p(|1>)` from the reduced state.
    #[default]
    Analytic,
    /// Mean of `shots` simulated measurements; step `t` uses seed `seed + t`.
    Sampled { shots: u64, seed: u64 },
}

/// Per-step readout probabilities of one forward pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardTrace {
    pub step_probs: Vec<f64>,
    pub final_prob: f64,
    pub steps: usize,
}

impl ForwardTrace {
    pub(crate) fn from_steps(step_probs: Vec<f64>) -> Self {
        let final_prob = *step_probs.last().expect("non-empty trace");
        let steps = step_probs.len();
        Self {
            step_probs,
            final_prob,
            steps,
        }
    }
}

/// Quantum recurrent network with bound parameters, simulated on the full
/// density matrix.
#[derive(Debug, Clone)]
pub struct DenseQrnn {
    config: ModelConfig,
    ansatz: Circuit,
}

impl DenseQrnn {
    pub fn new(config: ModelConfig, params: &ParameterVector) -> Result<Self> {
        let ansatz = build_ansatz(&config.ansatz, params)?;
        Ok(Self { config, ansatz })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn ansatz(&self) -> &Circuit {
        &self.ansatz
    }

    /// One recurrent block: encode, entangle, read out, reset.
    pub fn step(
        &self,
        dm: &DensityMatrix,
        x_angle: f64,
        roles: &Roles,
        readout: Readout,
        step: usize,
    ) -> Result<(f64, DensityMatrix)> {
        let n = self.config.n_qubits();
        if dm.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: dm.n_qubits(),
            });
        }
        let mut state = build_encoder(n, x_angle, &roles.data)?.apply(dm)?;
        self.ansatz.apply_mut(&mut state)?;
        let p = match readout {
            Readout::Analytic => state.prob_one(roles.readout)?,
            Readout::Sampled { shots, seed } => {
                state.sample_prob_one(roles.readout, shots, seed.wrapping_add(step as u64))?
            }
        };
        let next = state.reset_qubits(roles.reset_set(self.config.kind))?;
        Ok((p, next))
    }

    pub fn forward(&self, window_angles: &[f64]) -> Result<ForwardTrace> {
        self.forward_with(window_angles, Readout::Analytic)
    }

    pub fn forward_with(&self, window_angles: &[f64], readout: Readout) -> Result<ForwardTrace> {
        if window_angles.is_empty() {
            return Err(Error::Empty("window"));
        }
        let mut dm = DensityMatrix::zero_state(self.config.n_qubits());
        let mut probs = Vec::with_capacity(window_angles.len());
        for (t, &x) in window_angles.iter().enumerate() {
            let roles = role_schedule(&self.config, t);
            let (p, next) = self.step(&dm, x, &roles, readout, t)?;
            probs.push(p);
            dm = next;
        }
        Ok(ForwardTrace::from_steps(probs))
    }
}

/// One recurrent block applied to `dm` with freshly bound parameters.
pub fn qrb_step(
    config: &ModelConfig,
    dm: &DensityMatrix,
    x_angle: f64,
    params: &ParameterVector,
    roles: &Roles,
) -> Result<(f64, DensityMatrix)> {
    DenseQrnn::new(*config, params)?.step(dm, x_angle, roles, Readout::Analytic, 0)
}

/// Run the network over a window of encoded angles, starting from `|0...0>`.
pub fn forward(
    config: &ModelConfig,
    window_angles: &[f64],
    params: &ParameterVector,
) -> Result<ForwardTrace> {
    DenseQrnn::new(*config, params)?.forward(window_angles)
}

/// Map a readout probability back to series units: `p·(max − min) + min`.
pub fn rescale_prediction(p: f64, scaling: &crate::data::ScalingParams) -> f64 {
    p * (scaling.x_max - scaling.x_min) + scaling.x_min
}
