//! Index-sliced gate kernels.
//!
//! Qubit `q` is bit `q` of the basis index (qubit 0 is least significant).
//! Kernels gather the `2^k` amplitudes (or `2^k x 2^k` matrix block) that a
//! `k`-qubit gate couples, transform them, and scatter them back.

use num_complex::Complex64;

use super::matrix::SquareMatrix;
use crate::error::{Error, Result};

/// Place the low bits of `value` at the bit positions listed in `qubits`.
#[inline]
pub fn deposit(value: usize, qubits: &[usize]) -> usize {
    let mut out = 0;
    for (j, &q) in qubits.iter().enumerate() {
        out |= ((value >> j) & 1) << q;
    }
    out
}

/// Inverse of [`deposit`]: collect the bits at `qubits` into a compact index.
#[inline]
pub fn extract(index: usize, qubits: &[usize]) -> usize {
    let mut out = 0;
    for (j, &q) in qubits.iter().enumerate() {
        out |= ((index >> q) & 1) << j;
    }
    out
}

/// Table of `deposit(v, qubits)` for every `v < 2^qubits.len()`.
pub fn deposit_table(qubits: &[usize]) -> Vec<usize> {
    (0..1usize << qubits.len())
        .map(|v| deposit(v, qubits))
        .collect()
}

pub fn mask_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, &q| m | (1 << q))
}

/// Check that `targets` are distinct and below `n_qubits`.
pub fn validate_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &q) in targets.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
        if targets[..i].contains(&q) {
            return Err(Error::DuplicateTarget(q));
        }
    }
    Ok(())
}

/// `rho <- U rho U†` for a gate acting on `targets`, in place.
///
/// `rho` is a row-major `dim x dim` buffer. The gate's first target is the
/// least-significant bit of the gate matrix index.
pub fn conjugate_density(rho: &mut [Complex64], dim: usize, u: &SquareMatrix, targets: &[usize]) {
    if u.is_diagonal() {
        conjugate_density_diagonal(rho, dim, &u.diagonal_entries(), targets);
    } else if targets.len() == 1 {
        conjugate_density_1q(rho, dim, u, targets[0]);
    } else {
        conjugate_density_general(rho, dim, u, targets);
    }
}

fn conjugate_density_diagonal(
    rho: &mut [Complex64],
    dim: usize,
    diag: &[Complex64],
    targets: &[usize],
) {
    let phases: Vec<Complex64> = (0..dim).map(|i| diag[extract(i, targets)]).collect();
    for (i, row) in rho.chunks_exact_mut(dim).enumerate() {
        let pi = phases[i];
        for (x, pj) in row.iter_mut().zip(&phases) {
            *x *= pi * pj.conj();
        }
    }
}

fn conjugate_density_1q(rho: &mut [Complex64], dim: usize, u: &SquareMatrix, q: usize) {
    let (u00, u01, u10, u11) = (u.get(0, 0), u.get(0, 1), u.get(1, 0), u.get(1, 1));
    let bit = 1usize << q;
    // Left multiplication acts on row pairs.
    for r0 in (0..dim).filter(|r| r & bit == 0) {
        let r1 = r0 | bit;
        let (lo, hi) = rho.split_at_mut(r1 * dim);
        let row0 = &mut lo[r0 * dim..(r0 + 1) * dim];
        let row1 = &mut hi[..dim];
        for (a, b) in row0.iter_mut().zip(row1.iter_mut()) {
            let (x0, x1) = (*a, *b);
            *a = u00 * x0 + u01 * x1;
            *b = u10 * x0 + u11 * x1;
        }
    }
    // Right multiplication by U† acts on column pairs.
    let (c00, c01, c10, c11) = (u00.conj(), u01.conj(), u10.conj(), u11.conj());
    for row in rho.chunks_exact_mut(dim) {
        for c0 in (0..dim).filter(|c| c & bit == 0) {
            let c1 = c0 | bit;
            let (x0, x1) = (row[c0], row[c1]);
            row[c0] = x0 * c00 + x1 * c01;
            row[c1] = x0 * c10 + x1 * c11;
        }
    }
}

fn conjugate_density_general(rho: &mut [Complex64], dim: usize, u: &SquareMatrix, targets: &[usize]) {
    let k = u.dim();
    let offsets = deposit_table(targets);
    let mask = mask_of(targets);
    let bases: Vec<usize> = (0..dim).filter(|i| i & mask == 0).collect();
    let mut block = vec![Complex64::new(0.0, 0.0); k * k];
    let mut tmp = vec![Complex64::new(0.0, 0.0); k * k];
    for &r in &bases {
        for &c in &bases {
            for a in 0..k {
                for b in 0..k {
                    block[a * k + b] = rho[(r | offsets[a]) * dim + (c | offsets[b])];
                }
            }
            // tmp = U * block
            for a in 0..k {
                for b in 0..k {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m in 0..k {
                        acc += u.get(a, m) * block[m * k + b];
                    }
                    tmp[a * k + b] = acc;
                }
            }
            // block = tmp * U†
            for a in 0..k {
                for b in 0..k {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m in 0..k {
                        acc += tmp[a * k + m] * u.get(b, m).conj();
                    }
                    rho[(r | offsets[a]) * dim + (c | offsets[b])] = acc;
                }
            }
        }
    }
}

/// `psi <- U psi` for a gate acting on `targets`, in place.
pub fn apply_to_amplitudes(psi: &mut [Complex64], u: &SquareMatrix, targets: &[usize]) {
    let k = u.dim();
    let offsets = deposit_table(targets);
    let mask = mask_of(targets);
    let mut gathered = vec![Complex64::new(0.0, 0.0); k];
    for base in (0..psi.len()).filter(|i| i & mask == 0) {
        for (a, g) in gathered.iter_mut().enumerate() {
            *g = psi[base | offsets[a]];
        }
        for a in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, g) in gathered.iter().enumerate() {
                acc += u.get(a, m) * g;
            }
            psi[base | offsets[a]] = acc;
        }
    }
}

/// Left-multiply a row-major `rows x cols` buffer by a gate acting on the
/// row index: every column is treated as an amplitude vector.
pub fn apply_to_columns(
    buf: &mut [Complex64],
    rows: usize,
    cols: usize,
    u: &SquareMatrix,
    targets: &[usize],
) {
    let k = u.dim();
    let offsets = deposit_table(targets);
    let mask = mask_of(targets);
    let mut gathered = vec![Complex64::new(0.0, 0.0); k * cols];
    for base in (0..rows).filter(|i| i & mask == 0) {
        for a in 0..k {
            let r = base | offsets[a];
            gathered[a * cols..(a + 1) * cols].copy_from_slice(&buf[r * cols..(r + 1) * cols]);
        }
        for a in 0..k {
            let r = base | offsets[a];
            let out = &mut buf[r * cols..(r + 1) * cols];
            out.fill(Complex64::new(0.0, 0.0));
            for m in 0..k {
                let coeff = u.get(a, m);
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, g) in out.iter_mut().zip(&gathered[m * cols..(m + 1) * cols]) {
                    *o += coeff * g;
                }
            }
        }
    }
}
