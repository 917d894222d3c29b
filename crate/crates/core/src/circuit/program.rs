use std::fmt;

use serde::{Deserialize, Serialize};

use super::gate::Gate;
use crate::error::{Error, Result};
use crate::sim::{kernel, DensityMatrix, SquareMatrix, StateVector};

/// Ordered gate list over a fixed register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        kernel::validate_targets(&gate.targets, self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Append every gate of `other`, which must act on the same register size.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn trainable_count(&self) -> usize {
        self.gates.iter().filter(|g| g.param_slot.is_some()).count()
    }

    /// Gate list with runs of single-qubit gates on the same wire multiplied
    /// into one matrix. Equivalent to the original circuit.
    pub fn fused(&self) -> Vec<(SquareMatrix, Vec<usize>)> {
        let mut pending: Vec<Option<SquareMatrix>> = vec![None; self.n_qubits];
        let mut out = Vec::new();
        let flush = |q: usize, pending: &mut Vec<Option<SquareMatrix>>, out: &mut Vec<_>| {
            if let Some(m) = pending[q].take() {
                out.push((m, vec![q]));
            }
        };
        for g in &self.gates {
            let m = g.matrix();
            if g.targets.len() == 1 {
                let q = g.targets[0];
                pending[q] = Some(match pending[q].take() {
                    Some(prev) => m.matmul(&prev),
                    None => m,
                });
            } else {
                for &q in &g.targets {
                    flush(q, &mut pending, &mut out);
                }
                out.push((m, g.targets.clone()));
            }
        }
        for q in 0..self.n_qubits {
            flush(q, &mut pending, &mut out);
        }
        out
    }

    /// Composite `2^n x 2^n` unitary.
    pub fn unitary(&self) -> SquareMatrix {
        let dim = 1usize << self.n_qubits;
        let mut u = SquareMatrix::identity(dim);
        for (m, targets) in self.fused() {
            kernel::apply_to_columns(u.as_mut_slice(), dim, dim, &m, &targets);
        }
        u
    }

    pub fn apply(&self, dm: &DensityMatrix) -> Result<DensityMatrix> {
        let mut out = dm.clone();
        self.apply_mut(&mut out)?;
        Ok(out)
    }

    pub fn apply_mut(&self, dm: &mut DensityMatrix) -> Result<()> {
        if dm.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: dm.n_qubits(),
            });
        }
        for (m, targets) in self.fused() {
            dm.apply_unitary_mut(&m, &targets)?;
        }
        Ok(())
    }

    pub fn apply_state(&self, sv: &StateVector) -> Result<StateVector> {
        if sv.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: sv.n_qubits(),
            });
        }
        let mut out = sv.clone();
        for (m, targets) in self.fused() {
            out = out.apply_unitary(&m, &targets)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "circuit: {} qubits, {} gates, {} trainable",
            self.n_qubits,
            self.gates.len(),
            self.trainable_count()
        )?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
