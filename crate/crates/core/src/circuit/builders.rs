use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::gate::{Gate, GateKind};
use super::program::Circuit;
use crate::error::{Error, Result};

/// Map a raw value linearly onto `[0, π]`, clamping it into `[x_min, x_max]`
/// first.
pub fn rescale_to_angle(x: f64, x_min: f64, x_max: f64) -> Result<f64> {
    if !(x_max > x_min) {
        return Err(Error::InvalidArgument(format!(
            "scaling range is empty: min {x_min}, max {x_max}"
        )));
    }
    let clamped = x.clamp(x_min, x_max);
    // divide first so the endpoints land exactly on 0 and π
    Ok(PI * ((clamped - x_min) / (x_max - x_min)))
}

/// Replicated angle encoding: one `Ry(angle)` per data qubit.
pub fn build_encoder(n_qubits: usize, angle: f64, data_qubits: &[usize]) -> Result<Circuit> {
    if data_qubits.is_empty() {
        return Err(Error::Empty("encoder data qubits"));
    }
    let mut circuit = Circuit::new(n_qubits);
    for &q in data_qubits {
        circuit.push(Gate::rotation(GateKind::Ry, angle, &[q])?)?;
    }
    Ok(circuit)
}

/// The CNOT / Rz / CNOT realization of `Rzz(θ)` on qubits `j`, `k`.
pub fn rzz_decomposition(n_qubits: usize, theta: f64, j: usize, k: usize) -> Result<Circuit> {
    if j == k {
        return Err(Error::DuplicateTarget(j));
    }
    let mut circuit = Circuit::new(n_qubits);
    circuit.push(Gate::fixed(GateKind::Cnot, &[j, k])?)?;
    circuit.push(Gate::rotation(GateKind::Rz, -2.0 * theta, &[k])?)?;
    circuit.push(Gate::fixed(GateKind::Cnot, &[j, k])?)?;
    Ok(circuit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntanglerLayout {
    /// Nearest-neighbour chain.
    Nn,
    /// Circuit-block: even pairs, then odd pairs with wraparound.
    Cb,
    /// All-to-all.
    Aa,
}

impl fmt::Display for EntanglerLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntanglerLayout::Nn => "nn",
            EntanglerLayout::Cb => "cb",
            EntanglerLayout::Aa => "aa",
        })
    }
}

impl FromStr for EntanglerLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nn" => Ok(EntanglerLayout::Nn),
            "cb" => Ok(EntanglerLayout::Cb),
            "aa" => Ok(EntanglerLayout::Aa),
            other => Err(Error::InvalidArgument(format!("unknown entangler layout `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntanglerConfig {
    pub layout: EntanglerLayout,
    pub rounds: usize,
}

impl EntanglerConfig {
    pub fn circuit_block(rounds: usize) -> Self {
        Self {
            layout: EntanglerLayout::Cb,
            rounds,
        }
    }
}

/// Qubit pairs receiving an `Rzz`, in application order.
///
/// One CB round is the even sweep `(0,1),(2,3),…` followed by the odd sweep
/// `(1,2),(3,4),…,(n−1,0)`, so every qubit sits in two pairs per round.
pub fn entangler_pairs(config: EntanglerConfig, n: usize) -> Result<Vec<(usize, usize)>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "entanglers need at least 2 qubits, got {n}"
        )));
    }
    if config.rounds == 0 {
        return Err(Error::InvalidArgument("entangler rounds must be at least 1".into()));
    }
    let round: Vec<(usize, usize)> = match config.layout {
        EntanglerLayout::Nn => (0..n - 1).map(|q| (q, q + 1)).collect(),
        EntanglerLayout::Cb => {
            if n % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "circuit-block layout needs an even qubit count, got {n}"
                )));
            }
            let even = (0..n).step_by(2).map(|q| (q, q + 1));
            let odd = (1..n).step_by(2).map(|q| (q, (q + 1) % n));
            even.chain(odd).collect()
        }
        EntanglerLayout::Aa => (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect(),
    };
    Ok(round.repeat(config.rounds))
}

/// Shape of the hardware-efficient ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub n_qubits: usize,
    pub entangler: EntanglerConfig,
    pub single_qubit_layers: usize,
}

impl AnsatzSpec {
    pub fn new(n_qubits: usize, entangler: EntanglerConfig, single_qubit_layers: usize) -> Result<Self> {
        let spec = Self {
            n_qubits,
            entangler,
            single_qubit_layers,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// One XZX layer with two CB rounds.
    pub fn default_for(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, EntanglerConfig::circuit_block(2), 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.single_qubit_layers == 0 {
            return Err(Error::InvalidArgument("ansatz needs at least one layer".into()));
        }
        entangler_pairs(self.entangler, self.n_qubits).map(|_| ())
    }

    pub fn param_count(&self) -> usize {
        param_count(self)
    }
}

/// `3 · n · layers + layers · |pairs|`.
pub fn param_count(spec: &AnsatzSpec) -> usize {
    let pairs = entangler_pairs(spec.entangler, spec.n_qubits)
        .map(|p| p.len())
        .unwrap_or(0);
    spec.single_qubit_layers * (3 * spec.n_qubits + pairs)
}

/// Trainable rotation angles, shared across all time steps of a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("parameter {i} is not finite")));
        }
        Ok(Self(values))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Copy with `values[slot] += delta`.
    pub fn shifted(&self, slot: usize, delta: f64) -> Self {
        let mut v = self.0.clone();
        v[slot] += delta;
        Self(v)
    }
}

impl From<ParameterVector> for Vec<f64> {
    fn from(p: ParameterVector) -> Self {
        p.0
    }
}

/// Build the ansatz circuit over `spec.n_qubits` qubits.
///
/// Each layer applies one `Rzz` per entangler pair, then `Rx(α) Rz(β) Rx(γ)`
/// on every qubit (γ acts first). Slots are numbered in that order: the
/// layer's `Rzz` angles, then `(α, β, γ)` per qubit.
pub fn build_ansatz(spec: &AnsatzSpec, params: &ParameterVector) -> Result<Circuit> {
    spec.validate()?;
    let expected = param_count(spec);
    if params.len() != expected {
        return Err(Error::LengthMismatch {
            left: params.len(),
            right: expected,
        });
    }
    let pairs = entangler_pairs(spec.entangler, spec.n_qubits)?;
    let p = params.as_slice();
    let mut circuit = Circuit::new(spec.n_qubits);
    let mut slot = 0;
    for _ in 0..spec.single_qubit_layers {
        for &(a, b) in &pairs {
            circuit.push(Gate::trainable(GateKind::Rzz, p[slot], &[a, b], slot)?)?;
            slot += 1;
        }
        for q in 0..spec.n_qubits {
            let (alpha, beta, gamma) = (slot, slot + 1, slot + 2);
            circuit.push(Gate::trainable(GateKind::Rx, p[gamma], &[q], gamma)?)?;
            circuit.push(Gate::trainable(GateKind::Rz, p[beta], &[q], beta)?)?;
            circuit.push(Gate::trainable(GateKind::Rx, p[alpha], &[q], alpha)?)?;
            slot += 3;
        }
    }
    Ok(circuit)
}
