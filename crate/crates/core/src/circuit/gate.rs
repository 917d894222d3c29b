use std::f64::consts::FRAC_1_SQRT_2;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{Complex64, SquareMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    Hadamard,
    Cnot,
    /// `exp(i θ Z⊗Z)`.
    Rzz,
}

/// Two-point derivative rule `f'(θ) = factor · (f(θ + shift) − f(θ − shift))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftRule {
    pub shift: f64,
    pub factor: f64,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Hadamard => 1,
            GateKind::Cnot | GateKind::Rzz => 2,
        }
    }

    pub fn is_rotation(self) -> bool {
        !matches!(self, GateKind::Hadamard | GateKind::Cnot)
    }

    /// Exact derivative rule for gates of the form `exp(-i r θ P)` with `P` a
    /// Pauli product: shift `π/(4r)`, factor `r`.
    pub fn shift_rule(self) -> Option<ShiftRule> {
        match self {
            // exp(-iθP/2)
            GateKind::Rx | GateKind::Ry | GateKind::Rz => Some(ShiftRule {
                shift: FRAC_PI_2,
                factor: 0.5,
            }),
            // exp(iθ ZZ): generator eigenvalues ±1
            GateKind::Rzz => Some(ShiftRule {
                shift: FRAC_PI_4,
                factor: 1.0,
            }),
            GateKind::Hadamard | GateKind::Cnot => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "Rx",
            GateKind::Ry => "Ry",
            GateKind::Rz => "Rz",
            GateKind::Hadamard => "H",
            GateKind::Cnot => "CNOT",
            GateKind::Rzz => "Rzz",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Unitary matrix of a gate. For two-qubit gates the first target is the
/// low bit of the matrix index; CNOT uses the first target as control.
/// Fixed gates ignore `angle`.
pub fn gate_matrix(kind: GateKind, angle: f64) -> SquareMatrix {
    let (s, co) = (angle / 2.0).sin_cos();
    let rows = match kind {
        GateKind::Rx => vec![c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)],
        GateKind::Ry => vec![c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)],
        GateKind::Rz => vec![c(co, -s), c(0.0, 0.0), c(0.0, 0.0), c(co, s)],
        GateKind::Hadamard => vec![
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(-FRAC_1_SQRT_2, 0.0),
        ],
        GateKind::Cnot => {
            let mut m = vec![c(0.0, 0.0); 16];
            for col in 0..4usize {
                let row = if col & 1 == 1 { col ^ 2 } else { col };
                m[row * 4 + col] = c(1.0, 0.0);
            }
            m
        }
        GateKind::Rzz => {
            let even = Complex64::from_polar(1.0, angle);
            let odd = even.conj();
            return SquareMatrix::diagonal(&[even, odd, odd, even]);
        }
    };
    let dim = 1 << kind.arity();
    SquareMatrix::from_rows(dim, rows).expect("static gate shape")
}

/// One gate in a circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    /// Rotation angle in radians; `None` for fixed gates.
    pub angle: Option<f64>,
    pub targets: Vec<usize>,
    /// Index into the trainable parameter vector, if the angle is trainable.
    pub param_slot: Option<usize>,
}

impl Gate {
    pub fn fixed(kind: GateKind, targets: &[usize]) -> Result<Self> {
        if kind.is_rotation() {
            return Err(Error::InvalidArgument(format!("{kind} requires an angle")));
        }
        Self::checked(kind, None, targets, None)
    }

    pub fn rotation(kind: GateKind, angle: f64, targets: &[usize]) -> Result<Self> {
        Self::checked(kind, Some(angle), targets, None)
    }

    pub fn trainable(kind: GateKind, angle: f64, targets: &[usize], slot: usize) -> Result<Self> {
        Self::checked(kind, Some(angle), targets, Some(slot))
    }

    fn checked(
        kind: GateKind,
        angle: Option<f64>,
        targets: &[usize],
        param_slot: Option<usize>,
    ) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::InvalidArgument(format!(
                "{kind} acts on {} qubit(s), got {}",
                kind.arity(),
                targets.len()
            )));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateTarget(targets[0]));
        }
        if let Some(a) = angle {
            if !kind.is_rotation() {
                return Err(Error::InvalidArgument(format!("{kind} takes no angle")));
            }
            if !a.is_finite() {
                return Err(Error::InvalidArgument(format!("{kind} angle is not finite")));
            }
        }
        Ok(Self {
            kind,
            angle,
            targets: targets.to_vec(),
            param_slot,
        })
    }

    pub fn matrix(&self) -> SquareMatrix {
        gate_matrix(self.kind, self.angle.unwrap_or(0.0))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<5}", self.kind.name())?;
        match (self.param_slot, self.angle) {
            (Some(slot), Some(a)) => write!(f, " slot={slot:<3} angle={a:+.6}")?,
            (None, Some(a)) => write!(f, " {:8} angle={a:+.6}", "")?,
            _ => write!(f, " {:8} {:13}", "", "")?,
        }
        let qs: Vec<String> = self.targets.iter().map(|q| format!("q{q}")).collect();
        write!(f, "  {}", qs.join(","))
    }
}
