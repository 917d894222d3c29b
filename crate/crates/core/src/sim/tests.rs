use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ry(theta: f64) -> SquareMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    SquareMatrix::from_rows(2, vec![c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]).unwrap()
}

fn cnot() -> SquareMatrix {
    // control = first target (low bit of the gate index), target = second.
    let mut m = SquareMatrix::from_rows(4, vec![c(0.0, 0.0); 16]).unwrap();
    for i in 0..4usize {
        let j = if i & 1 == 1 { i ^ 2 } else { i };
        m.set(j, i, c(1.0, 0.0));
    }
    m
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..1 << n)
        .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn random_density(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let dim = 1 << n;
    let g = DMatrix::from_fn(dim, dim, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    let rho = rho / tr;
    let rows: Vec<Complex64> = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| rho[(i, j)]).collect();
    DensityMatrix::from_rows(n, rows).unwrap()
}

#[test]
fn density_from_basis_state() {
    let dm = DensityMatrix::from_state(&StateVector::zero(1)).unwrap();
    assert_eq!(dm.get(0, 0), c(1.0, 0.0));
    assert_eq!(dm.get(0, 1), c(0.0, 0.0));
    assert_eq!(dm.get(1, 1), c(0.0, 0.0));
}

#[test]
fn density_from_uniform_superposition() {
    let sv = StateVector::from_amplitudes(1, vec![c(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
    let dm = DensityMatrix::from_state(&sv).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert!((dm.get(i, j) - c(0.5, 0.0)).norm() < 1e-15);
        }
    }
}

#[test]
fn density_from_state_matches_outer_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sv = random_state(2, &mut rng);
    let dm = DensityMatrix::from_state(&sv).unwrap();
    let a = sv.amplitudes();
    for i in 0..4 {
        for j in 0..4 {
            let mut expected = c(0.0, 0.0);
            expected += a[i] * a[j].conj();
            assert!((dm.get(i, j) - expected).norm() < 1e-15);
        }
    }
    assert!((dm.purity() - 1.0).abs() < 1e-12);
}

#[test]
fn density_from_unnormalized_state_is_rejected() {
    let sv = StateVector::from_amplitudes(1, vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert!(matches!(
        DensityMatrix::from_state(&sv),
        Err(Error::NotNormalized { .. })
    ));
}

#[test]
fn ry_pi_flips_ground_state() {
    let dm = DensityMatrix::zero_state(1).apply_unitary(&ry(PI), &[0]).unwrap();
    assert!((dm.get(1, 1).re - 1.0).abs() < 1e-15);
    assert!(dm.get(0, 0).norm() < 1e-15);
}

#[test]
fn cnot_truth_table() {
    // |01> in the qubit0 = 1 convention is basis index 1.
    let dm = DensityMatrix::from_state(&StateVector::basis(2, 1).unwrap()).unwrap();
    let out = dm.apply_unitary(&cnot(), &[0, 1]).unwrap();
    assert!((out.get(3, 3).re - 1.0).abs() < 1e-15);
    assert!((out.trace().re - 1.0).abs() < 1e-15);
}

#[test]
fn non_unitary_and_duplicate_targets_are_rejected() {
    let dm = DensityMatrix::zero_state(2);
    let bad = SquareMatrix::from_rows(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert!(matches!(dm.apply_unitary(&bad, &[0]), Err(Error::NotUnitary { .. })));
    assert!(matches!(
        dm.apply_unitary(&cnot(), &[1, 1]),
        Err(Error::DuplicateTarget(1))
    ));
    assert!(matches!(
        dm.apply_unitary(&ry(0.3), &[2]),
        Err(Error::QubitOutOfRange { .. })
    ));
}

fn bell() -> DensityMatrix {
    let s = FRAC_1_SQRT_2;
    let sv = StateVector::from_amplitudes(2, vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
    DensityMatrix::from_state(&sv).unwrap()
}

#[test]
fn partial_trace_of_bell_state_is_maximally_mixed() {
    let red = bell().partial_trace(&[1]).unwrap();
    assert_eq!(red.n_qubits(), 1);
    assert!((red.get(0, 0).re - 0.5).abs() < 1e-15);
    assert!((red.get(1, 1).re - 0.5).abs() < 1e-15);
    assert!(red.get(0, 1).norm() < 1e-15);
}

#[test]
fn partial_trace_of_product_recovers_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = random_density(1, &mut rng);
    let b = random_density(2, &mut rng);
    // a on qubit 2, b on qubits 0..1
    let joint = DensityMatrix::tensor(&a, &b);
    let red = joint.partial_trace(&[0, 1]).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert!((red.get(i, j) - a.get(i, j)).norm() < 1e-12);
        }
    }
}

#[test]
fn partial_trace_matches_index_summation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dm = random_density(3, &mut rng);
    let red = dm.partial_trace(&[1]).unwrap();
    // kept qubits (0, 2) -> local bits (0, 1)
    for k in 0..4usize {
        for l in 0..4usize {
            let expand = |v: usize, t: usize| (v & 1) | (t << 1) | (((v >> 1) & 1) << 2);
            let expected: Complex64 = (0..2).map(|t| dm.get(expand(k, t), expand(l, t))).sum();
            assert!((red.get(k, l) - expected).norm() < 1e-12);
        }
    }
}

#[test]
fn partial_trace_rejects_empty_or_full_sets() {
    let dm = DensityMatrix::zero_state(2);
    assert!(matches!(dm.partial_trace(&[]), Err(Error::InvalidSubset(_))));
    assert!(matches!(dm.partial_trace(&[0, 1]), Err(Error::InvalidSubset(_))));
    assert!(matches!(dm.reset_qubits(&[0, 1]), Err(Error::InvalidSubset(_))));
}

#[test]
fn reset_clears_target_bit() {
    let dm = DensityMatrix::from_state(&StateVector::basis(2, 3).unwrap()).unwrap();
    let out = dm.reset_qubits(&[0]).unwrap();
    assert!((out.get(2, 2).re - 1.0).abs() < 1e-15);
    assert!((out.trace().re - 1.0).abs() < 1e-15);
}

#[test]
fn reset_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dm = random_density(3, &mut rng);
    let once = dm.reset_qubits(&[0, 2]).unwrap();
    let twice = once.reset_qubits(&[0, 2]).unwrap();
    assert_eq!(once, twice);
}

#[test]
fn reset_of_bell_state() {
    let out = bell().reset_qubits(&[0]).unwrap();
    assert!((out.get(0, 0).re - 0.5).abs() < 1e-15);
    assert!((out.get(2, 2).re - 0.5).abs() < 1e-15);
    assert!(out.get(1, 1).norm() < 1e-15 && out.get(3, 3).norm() < 1e-15);
    assert!(out.get(0, 2).norm() < 1e-15);
}

#[test]
fn prob_one_and_expectation() {
    let ground = DensityMatrix::zero_state(1);
    assert_eq!(ground.prob_one(0).unwrap(), 0.0);
    assert_eq!(ground.expectation_z(0).unwrap(), 1.0);
    let excited = DensityMatrix::from_state(&StateVector::basis(1, 1).unwrap()).unwrap();
    assert_eq!(excited.expectation_z(0).unwrap(), -1.0);
    let half = ground.apply_unitary(&ry(PI / 2.0), &[0]).unwrap();
    assert!((half.prob_one(0).unwrap() - 0.5).abs() < 1e-15);
    assert!(half.expectation_z(0).unwrap().abs() < 1e-15);
}

#[test]
fn prob_one_matches_reduced_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let dm = random_density(3, &mut rng);
    for q in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&o| o != q).collect();
        let red = dm.partial_trace(&others).unwrap();
        assert!((dm.prob_one(q).unwrap() - red.get(1, 1).re).abs() < 1e-12);
    }
}

#[test]
fn sampling_degenerate_and_deterministic() {
    let ground = DensityMatrix::zero_state(1);
    let excited = DensityMatrix::from_state(&StateVector::basis(1, 1).unwrap()).unwrap();
    assert_eq!(ground.sample_prob_one(0, 500, 1).unwrap(), 0.0);
    assert_eq!(excited.sample_prob_one(0, 500, 1).unwrap(), 1.0);
    let half = ground.apply_unitary(&ry(PI / 2.0), &[0]).unwrap();
    assert_eq!(
        half.sample_prob_one(0, 1000, 42).unwrap(),
        half.sample_prob_one(0, 1000, 42).unwrap()
    );
    assert!(half.sample_prob_one(0, 0, 1).is_err());
}

#[test]
fn sampling_spread_matches_binomial_statistics() {
    let half = DensityMatrix::zero_state(1).apply_unitary(&ry(PI / 2.0), &[0]).unwrap();
    let estimates: Vec<f64> = (0..100).map(|s| half.sample_prob_one(0, 10_000, s).unwrap()).collect();
    let mean = estimates.iter().sum::<f64>() / 100.0;
    let sd = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / 99.0).sqrt();
    assert!((0.003..=0.008).contains(&sd), "sd = {sd}");
}

#[test]
fn symmetrize_keeps_long_chains_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut dm = random_density(3, &mut rng);
    for i in 0..500 {
        let theta = rng.random::<f64>() * 2.0 * PI;
        if i % 3 == 0 {
            dm = dm.apply_unitary(&cnot(), &[i % 3, (i + 1) % 3]).unwrap();
        } else {
            dm = dm.apply_unitary(&ry(theta), &[i % 3]).unwrap();
        }
    }
    assert!(dm.hermiticity_error() <= 1e-10);
    assert!((dm.trace() - c(1.0, 0.0)).norm() <= 1e-10);
    dm.validate(1e-10).unwrap();
}

#[test]
fn pure_state_path_matches_density_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sv0 = random_state(3, &mut rng);
    let mut sv = sv0.clone();
    let mut dm = DensityMatrix::from_state(&sv0).unwrap();
    for i in 0..20 {
        let theta = rng.random::<f64>() * PI;
        let (u, t): (SquareMatrix, Vec<usize>) = if i % 2 == 0 {
            (ry(theta), vec![i % 3])
        } else {
            (cnot(), vec![(i + 1) % 3, i % 3])
        };
        sv = sv.apply_unitary(&u, &t).unwrap();
        dm = dm.apply_unitary(&u, &t).unwrap();
    }
    let expected = DensityMatrix::from_state(&sv).unwrap();
    let diff = expected
        .as_slice()
        .iter()
        .zip(dm.as_slice())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(diff < 1e-10);
}
