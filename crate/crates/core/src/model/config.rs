use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{AnsatzSpec, EntanglerConfig};
use crate::error::{Error, Result};

/// Largest register the dense simulator accepts unless a caller raises it.
pub const DEFAULT_QUBIT_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Architecture {
    /// Fixed data and history registers.
    Plain,
    /// The two registers swap roles every step.
    Staggered,
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Architecture::Plain => "plain",
            Architecture::Staggered => "staggered",
        })
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plain" | "pqrnn" => Ok(Architecture::Plain),
            "staggered" | "sqrnn" => Ok(Architecture::Staggered),
            other => Err(Error::InvalidArgument(format!("unknown architecture `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Data-register width.
    pub d: usize,
    /// History-register width.
    pub h: usize,
    pub kind: Architecture,
    pub ansatz: AnsatzSpec,
}

impl ModelConfig {
    pub fn new(
        d: usize,
        h: usize,
        kind: Architecture,
        entangler: EntanglerConfig,
        single_qubit_layers: usize,
    ) -> Result<Self> {
        Self::with_cap(d, h, kind, entangler, single_qubit_layers, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(
        d: usize,
        h: usize,
        kind: Architecture,
        entangler: EntanglerConfig,
        single_qubit_layers: usize,
        qubit_cap: usize,
    ) -> Result<Self> {
        if d == 0 || h == 0 {
            return Err(Error::InvalidArgument(
                "data and history registers need at least one qubit each".into(),
            ));
        }
        if kind == Architecture::Staggered && d != h {
            return Err(Error::InvalidArgument(format!(
                "staggered architecture needs equal registers, got d={d} h={h}"
            )));
        }
        if d + h > qubit_cap {
            return Err(Error::CapacityExceeded {
                qubits: d + h,
                cap: qubit_cap,
            });
        }
        let ansatz = AnsatzSpec::new(d + h, entangler, single_qubit_layers)?;
        Ok(Self { d, h, kind, ansatz })
    }

    /// Default regression setup: circuit-block ansatz, one layer, two rounds.
    pub fn standard(d: usize, h: usize, kind: Architecture) -> Result<Self> {
        Self::new(d, h, kind, EntanglerConfig::circuit_block(2), 1)
    }

    pub fn n_qubits(&self) -> usize {
        self.d + self.h
    }

    pub fn param_count(&self) -> usize {
        self.ansatz.param_count()
    }
}

/// Register roles for one time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roles {
    pub data: Vec<usize>,
    pub history: Vec<usize>,
    pub readout: usize,
}

impl Roles {
    /// Qubits reinitialized to `|0>` at the end of the step.
    pub fn reset_set(&self, kind: Architecture) -> &[usize] {
        match kind {
            Architecture::Plain => &self.data,
            Architecture::Staggered => &self.history,
        }
    }
}

/// Data/history assignment at `step`. Plain models keep qubits `0..d` as
/// data throughout; staggered models alternate between the two halves.
pub fn role_schedule(config: &ModelConfig, step: usize) -> Roles {
    let low: Vec<usize> = (0..config.d).collect();
    let high: Vec<usize> = (config.d..config.n_qubits()).collect();
    let (data, history) = match config.kind {
        Architecture::Plain => (low, high),
        Architecture::Staggered if step % 2 == 0 => (low, high),
        Architecture::Staggered => (high, low),
    };
    let readout = data[0];
    Roles {
        data,
        history,
        readout,
    }
}
