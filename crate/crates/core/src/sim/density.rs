use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::kernel;
use super::matrix::SquareMatrix;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Density matrices are re-symmetrized after this many gate applications.
pub const SYMMETRIZE_INTERVAL: u32 = 100;

/// Tolerance used when checking that an input state is normalized.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Tolerance used when checking that a gate matrix is unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Dense `2^n x 2^n` density operator.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    n_qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
    gates_since_symmetrize: u32,
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits && self.data == other.data
    }
}

impl DensityMatrix {
    /// `|0...0><0...0|`.
    pub fn zero_state(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        data[0] = Complex64::new(1.0, 0.0);
        Self {
            n_qubits,
            dim,
            data,
            gates_since_symmetrize: 0,
        }
    }

    /// `|psi><psi|`; rejects states whose norm is off by more than 1e-8.
    pub fn from_state(sv: &StateVector) -> Result<Self> {
        let norm = sv.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        let amps = sv.amplitudes();
        let dim = amps.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in amps {
            data.extend(amps.iter().map(|b| a * b.conj()));
        }
        Ok(Self {
            n_qubits: sv.n_qubits(),
            dim,
            data,
            gates_since_symmetrize: 0,
        })
    }

    /// Wrap a row-major buffer. Checks shape and finiteness only; call
    /// [`DensityMatrix::validate`] for the physical invariants.
    pub fn from_rows(n_qubits: usize, data: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if data.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(Self {
            n_qubits,
            dim,
            data,
            gates_since_symmetrize: 0,
        })
    }

    /// `a ⊗ b`, with `b` occupying the low qubits.
    pub fn tensor(high: &DensityMatrix, low: &DensityMatrix) -> Self {
        let n = high.n_qubits + low.n_qubits;
        let dim = 1usize << n;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for hi in 0..high.dim {
            for hj in 0..high.dim {
                let h = high.get(hi, hj);
                for li in 0..low.dim {
                    let row = (hi * low.dim + li) * dim + hj * low.dim;
                    for lj in 0..low.dim {
                        data[row + lj] = h * low.get(li, lj);
                    }
                }
            }
        }
        Self {
            n_qubits: n,
            dim,
            data,
            gates_since_symmetrize: 0,
        }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // For Hermitian rho, tr(rho^2) = sum |rho_ij|^2.
        self.data.iter().map(|x| x.norm_sqr()).sum()
    }

    /// Largest entrywise `|rho - rho†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.data);
        m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Check the density-operator invariants: Hermitian and unit trace within
    /// `tol`, and no eigenvalue below `-1e-8`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > tol {
            return Err(Error::InvalidArgument(format!(
                "density matrix not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -1e-8 {
            return Err(Error::InvalidArgument(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(())
    }

    /// `U rho U†` with `U` acting on `targets` (one or two qubits).
    pub fn apply_unitary(&self, u: &SquareMatrix, targets: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.apply_unitary_mut(u, targets)?;
        Ok(out)
    }

    pub fn apply_unitary_mut(&mut self, u: &SquareMatrix, targets: &[usize]) -> Result<()> {
        if targets.is_empty() || targets.len() > 2 {
            return Err(Error::InvalidArgument(format!(
                "gates act on 1 or 2 qubits, got {}",
                targets.len()
            )));
        }
        kernel::validate_targets(targets, self.n_qubits)?;
        if u.dim() != 1 << targets.len() {
            return Err(Error::DimensionMismatch {
                expected: 1 << targets.len(),
                found: u.dim(),
            });
        }
        let deviation = u.unitarity_error();
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        kernel::conjugate_density(&mut self.data, self.dim, u, targets);
        self.gates_since_symmetrize += 1;
        if self.gates_since_symmetrize >= SYMMETRIZE_INTERVAL {
            self.symmetrize();
        }
        Ok(())
    }

    /// `rho <- (rho + rho†) / 2`.
    pub fn symmetrize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            self.data[i * n + i].im = 0.0;
            for j in (i + 1)..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
        self.gates_since_symmetrize = 0;
    }

    fn check_subset(&self, qubits: &[usize]) -> Result<()> {
        kernel::validate_targets(qubits, self.n_qubits)?;
        if qubits.is_empty() {
            return Err(Error::InvalidSubset("qubit set is empty".into()));
        }
        if qubits.len() == self.n_qubits {
            return Err(Error::InvalidSubset(
                "qubit set covers the whole register".into(),
            ));
        }
        Ok(())
    }

    fn complement(&self, qubits: &[usize]) -> Vec<usize> {
        (0..self.n_qubits).filter(|q| !qubits.contains(q)).collect()
    }

    /// Trace out `discard`; the remaining qubits keep their relative order.
    pub fn partial_trace(&self, discard: &[usize]) -> Result<Self> {
        self.check_subset(discard)?;
        let keep = self.complement(discard);
        let keep_idx = kernel::deposit_table(&keep);
        let disc_idx = kernel::deposit_table(discard);
        let kd = keep_idx.len();
        let mut data = vec![Complex64::new(0.0, 0.0); kd * kd];
        for (k, &ki) in keep_idx.iter().enumerate() {
            for (l, &li) in keep_idx.iter().enumerate() {
                data[k * kd + l] = disc_idx
                    .iter()
                    .map(|&t| self.data[(ki | t) * self.dim + (li | t)])
                    .sum();
            }
        }
        Ok(Self {
            n_qubits: keep.len(),
            dim: kd,
            data,
            gates_since_symmetrize: 0,
        })
    }

    /// Measure-and-reinitialize `targets` to `|0>`: the remaining qubits keep
    /// their marginal state, the targets are set to `|0...0>`.
    pub fn reset_qubits(&self, targets: &[usize]) -> Result<Self> {
        let reduced = self.partial_trace(targets)?;
        let keep = self.complement(targets);
        let keep_idx = kernel::deposit_table(&keep);
        let kd = keep_idx.len();
        let mut data = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        for (k, &ki) in keep_idx.iter().enumerate() {
            for (l, &li) in keep_idx.iter().enumerate() {
                data[ki * self.dim + li] = reduced.data[k * kd + l];
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            dim: self.dim,
            data,
            gates_since_symmetrize: self.gates_since_symmetrize,
        })
    }

    /// Probability that `qubit` reads 1; does not disturb the state.
    pub fn prob_one(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok((0..self.dim)
            .filter(|i| (i >> qubit) & 1 == 1)
            .map(|i| self.get(i, i).re)
            .sum())
    }

    /// `<Z>` on `qubit`.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        Ok(1.0 - 2.0 * self.prob_one(qubit)?)
    }

    /// Estimate [`DensityMatrix::prob_one`] from `shots` simulated readouts.
    pub fn sample_prob_one(&self, qubit: usize, shots: u64, seed: u64) -> Result<f64> {
        let p = self.prob_one(qubit)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample_bernoulli_mean(p, shots, &mut rng)
    }
}

/// Mean of `shots` Bernoulli(p) draws.
pub fn sample_bernoulli_mean<R: Rng + ?Sized>(p: f64, shots: u64, rng: &mut R) -> Result<f64> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let p = p.clamp(0.0, 1.0);
    let hits = (0..shots).filter(|_| rng.random_bool(p)).count();
    Ok(hits as f64 / shots as f64)
}
