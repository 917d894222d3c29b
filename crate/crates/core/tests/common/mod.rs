//! Brute-force linear-algebra oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qrnn_core::sim::{DensityMatrix, SquareMatrix};

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cmat(dim: usize, entries: &[(f64, f64)]) -> CMat {
    CMat::from_fn(dim, dim, |i, j| {
        let (re, im) = entries[i * dim + j];
        c(re, im)
    })
}

/// Random density matrix `G G† / tr(G G†)`.
pub fn density(n: usize, entries: &[(f64, f64)]) -> CMat {
    let g = cmat(1 << n, entries);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

/// Unitary `Q` from the QR factorization of a random matrix.
pub fn unitary(k: usize, entries: &[(f64, f64)]) -> CMat {
    cmat(1 << k, entries).qr().q()
}

pub fn to_dm(n: usize, m: &CMat) -> DensityMatrix {
    let rows: Vec<Complex64> = m.transpose().as_slice().to_vec();
    DensityMatrix::from_rows(n, rows).unwrap()
}

pub fn to_square(m: &CMat) -> SquareMatrix {
    SquareMatrix::from_rows(m.nrows(), m.transpose().as_slice().to_vec()).unwrap()
}

pub fn max_diff(dm: &DensityMatrix, m: &CMat) -> f64 {
    let d = m.nrows();
    assert_eq!(dm.dim(), d);
    (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| (dm.get(i, j) - m[(i, j)]).norm())
        .fold(0.0, f64::max)
}

pub fn bit(x: usize, q: usize) -> usize {
    (x >> q) & 1
}

/// `U` on `targets` (target `targets[0]` is the low bit of `U`'s index),
/// identity elsewhere, spelled out entry by entry.
pub fn embed(n: usize, u: &CMat, targets: &[usize]) -> CMat {
    let dim = 1 << n;
    let local = |x: usize| targets.iter().enumerate().map(|(k, &q)| bit(x, q) << k).sum::<usize>();
    let rest = |x: usize| targets.iter().fold(x, |acc, &q| acc & !(1 << q));
    CMat::from_fn(dim, dim, |i, j| if rest(i) == rest(j) { u[(local(i), local(j))] } else { c(0.0, 0.0) })
}

pub fn partial_trace_oracle(n: usize, rho: &CMat, discard: &[usize]) -> CMat {
    let kept: Vec<usize> = (0..n).filter(|q| !discard.contains(q)).collect();
    let kd = 1 << kept.len();
    let mut out = CMat::zeros(kd, kd);
    let compress = |x: usize| kept.iter().enumerate().map(|(k, &q)| bit(x, q) << k).sum::<usize>();
    for i in 0..1usize << n {
        for j in 0..1usize << n {
            let same_discarded = discard.iter().all(|&q| bit(i, q) == bit(j, q));
            if same_discarded {
                out[(compress(i), compress(j))] += rho[(i, j)];
            }
        }
    }
    out
}

/// Reset through the Kraus operators `|0><0|` and `|0><1|` on each target.
pub fn reset_oracle(n: usize, rho: &CMat, targets: &[usize]) -> CMat {
    let mut cur = rho.clone();
    for &q in targets {
        let k0 = cmat(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let k1 = cmat(2, &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let (a, b) = (embed(n, &k0, &[q]), embed(n, &k1, &[q]));
        cur = &a * &cur * a.adjoint() + &b * &cur * b.adjoint();
    }
    cur
}

/// Random complex entries in `[-1, 1)²`.
pub fn random_entries<R: rand::Rng>(rng: &mut R, len: usize) -> Vec<(f64, f64)> {
    (0..len).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}
