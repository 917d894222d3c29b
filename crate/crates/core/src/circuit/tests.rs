use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::sim::{Complex64, DensityMatrix, SquareMatrix, StateVector};

fn cb(rounds: usize) -> EntanglerConfig {
    EntanglerConfig::circuit_block(rounds)
}

#[test]
fn ry_zero_is_identity_and_quarter_turn_matches_formula() {
    assert!(gate_matrix(GateKind::Ry, 0.0).max_abs_diff(&SquareMatrix::identity(2)) < 1e-15);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let expected = SquareMatrix::from_rows(
        2,
        vec![
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
        ],
    )
    .unwrap();
    assert!(gate_matrix(GateKind::Ry, FRAC_PI_2).max_abs_diff(&expected) < 1e-15);
}

#[test]
fn rzz_matches_diagonal_exponential() {
    // exp(iθ Z⊗Z) is diagonal in the computational basis with eigenvalue
    // z_j z_k = +1 on even parity and -1 on odd parity.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let theta = (rng.random::<f64>() - 0.5) * 4.0 * PI;
        let eig = |i: usize| if (i & 1) ^ (i >> 1) == 0 { 1.0 } else { -1.0 };
        let expected = SquareMatrix::diagonal(
            &(0..4).map(|i| Complex64::new(0.0, theta * eig(i)).exp()).collect::<Vec<_>>(),
        );
        let m = gate_matrix(GateKind::Rzz, theta);
        assert!(m.max_abs_diff(&expected) < 1e-12);
        assert!(m.unitarity_error() < 1e-12);
    }
}

#[test]
fn all_gate_matrices_are_unitary() {
    for kind in [GateKind::Rx, GateKind::Ry, GateKind::Rz, GateKind::Hadamard, GateKind::Cnot, GateKind::Rzz] {
        assert!(gate_matrix(kind, 0.77).unitarity_error() < 1e-12, "{kind}");
    }
}

#[test]
fn rzz_decomposition_is_three_gates_and_exact() {
    let zero = rzz_decomposition(2, 0.0, 0, 1).unwrap();
    assert_eq!(zero.len(), 3);
    assert!(zero.unitary().max_abs_diff_up_to_phase(&SquareMatrix::identity(4)) < 1e-12);

    let quarter = rzz_decomposition(2, FRAC_PI_4, 0, 1).unwrap().unitary();
    let p = Complex64::from_polar(1.0, FRAC_PI_4);
    let expected = SquareMatrix::diagonal(&[p, p.conj(), p.conj(), p]);
    assert!(quarter.max_abs_diff_up_to_phase(&expected) < 1e-12);

    assert!(rzz_decomposition(2, 0.1, 1, 1).is_err());
}

#[test]
fn rescale_to_angle_examples() {
    assert!((rescale_to_angle(5.0, 0.0, 10.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
    assert_eq!(rescale_to_angle(0.0, 0.0, 10.0).unwrap(), 0.0);
    assert_eq!(rescale_to_angle(12.0, 0.0, 10.0).unwrap(), PI);
    assert_eq!(rescale_to_angle(-3.0, 0.0, 10.0).unwrap(), 0.0);
    assert!(rescale_to_angle(1.0, 2.0, 2.0).is_err());
}

#[test]
fn encoder_examples() {
    let zero = build_encoder(3, 0.0, &[0, 1, 2]).unwrap();
    let out = zero.apply_state(&StateVector::zero(3)).unwrap();
    assert!((out.amplitudes()[0].re - 1.0).abs() < 1e-15);

    let flip = build_encoder(3, PI, &[0, 1, 2]).unwrap();
    let out = flip.apply_state(&StateVector::zero(3)).unwrap();
    assert!((out.amplitudes()[7].norm() - 1.0).abs() < 1e-12);

    let half = build_encoder(1, FRAC_PI_2, &[0]).unwrap();
    let dm = half.apply(&DensityMatrix::zero_state(1)).unwrap();
    assert!((dm.prob_one(0).unwrap() - 0.5).abs() < 1e-15);

    assert_eq!(half.trainable_count(), 0);
    assert!(build_encoder(3, 0.1, &[]).is_err());
}

#[test]
fn entangler_pair_layouts() {
    assert_eq!(
        entangler_pairs(cb(1), 6).unwrap(),
        vec![(0, 1), (2, 3), (4, 5), (1, 2), (3, 4), (5, 0)]
    );
    assert_eq!(entangler_pairs(cb(2), 6).unwrap().len(), 12);
    let nn = EntanglerConfig { layout: EntanglerLayout::Nn, rounds: 1 };
    assert_eq!(entangler_pairs(nn, 4).unwrap(), vec![(0, 1), (1, 2), (2, 3)]);
    let aa = EntanglerConfig { layout: EntanglerLayout::Aa, rounds: 1 };
    assert_eq!(
        entangler_pairs(aa, 4).unwrap(),
        vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    );
    assert!(entangler_pairs(cb(1), 5).is_err());
    assert!(entangler_pairs(cb(0), 4).is_err());
}

#[test]
fn circuit_block_uses_each_qubit_twice_per_round() {
    for n in [2usize, 4, 6, 8] {
        for rounds in 1..4 {
            let pairs = entangler_pairs(cb(rounds), n).unwrap();
            for q in 0..n {
                let uses = pairs.iter().filter(|(a, b)| *a == q || *b == q).count();
                assert_eq!(uses, 2 * rounds, "n={n} rounds={rounds} q={q}");
            }
        }
    }
}

#[test]
fn param_count_examples() {
    assert_eq!(AnsatzSpec::default_for(6).unwrap().param_count(), 30);
    assert_eq!(AnsatzSpec::default_for(4).unwrap().param_count(), 20);
    assert_eq!(AnsatzSpec::default_for(8).unwrap().param_count(), 40);
}

#[test]
fn default_six_qubit_ansatz_has_thirty_trainable_gates() {
    let spec = AnsatzSpec::default_for(6).unwrap();
    let circuit = build_ansatz(&spec, &ParameterVector::zeros(30)).unwrap();
    assert_eq!(circuit.trainable_count(), 30);
    let rzz = circuit.gates().iter().filter(|g| g.kind == GateKind::Rzz).count();
    assert_eq!(rzz, 12);
    let mut slots: Vec<usize> = circuit.gates().iter().filter_map(|g| g.param_slot).collect();
    slots.sort();
    assert_eq!(slots, (0..30).collect::<Vec<_>>());
}

#[test]
fn zero_parameter_ansatz_is_identity() {
    let spec = AnsatzSpec::default_for(4).unwrap();
    let u = build_ansatz(&spec, &ParameterVector::zeros(20)).unwrap().unitary();
    assert!(u.max_abs_diff(&SquareMatrix::identity(16)) < 1e-12);
}

#[test]
fn ansatz_rejects_wrong_parameter_length() {
    let spec = AnsatzSpec::default_for(4).unwrap();
    assert!(build_ansatz(&spec, &ParameterVector::zeros(19)).is_err());
}

#[test]
fn random_ansatz_is_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let spec = AnsatzSpec::default_for(4).unwrap();
    let params = ParameterVector::new((0..20).map(|_| rng.random::<f64>() * 2.0 * PI).collect()).unwrap();
    let u = build_ansatz(&spec, &params).unwrap().unitary();
    assert!(u.unitarity_error() < 1e-10);
}

#[test]
fn xzx_order_applies_gamma_first() {
    // Only γ on qubit 0 nonzero: the triple collapses to Rx(γ).
    let spec = AnsatzSpec::default_for(2).unwrap();
    let n = spec.param_count();
    let mut p = vec![0.0; n];
    let pairs = 4; // CB, n=2, 2 rounds
    p[pairs + 2] = 0.9;
    let circuit = build_ansatz(&spec, &ParameterVector::new(p).unwrap()).unwrap();
    let first_rx = circuit
        .gates()
        .iter()
        .find(|g| g.kind == GateKind::Rx && g.targets == [0])
        .unwrap();
    assert_eq!(first_rx.param_slot, Some(pairs + 2));
    assert_eq!(first_rx.angle, Some(0.9));
}

#[test]
fn pretty_printer_lists_one_gate_per_line() {
    let spec = AnsatzSpec::default_for(6).unwrap();
    let circuit = build_ansatz(&spec, &ParameterVector::zeros(30)).unwrap();
    let text = circuit.to_string();
    assert_eq!(text.lines().count(), 1 + 30);
    assert_eq!(text.lines().filter(|l| l.contains("slot=")).count(), 30);
    assert!(text.lines().nth(1).unwrap().starts_with("Rzz"));
}

#[test]
fn fused_circuit_matches_gate_by_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let spec = AnsatzSpec::default_for(4).unwrap();
    let params = ParameterVector::new((0..20).map(|_| rng.random::<f64>() * 2.0 * PI).collect()).unwrap();
    let circuit = build_ansatz(&spec, &params).unwrap();
    let mut sv = StateVector::zero(4);
    sv = sv.apply_unitary(&gate_matrix(GateKind::Hadamard, 0.0), &[1]).unwrap();
    let mut by_gate = sv.clone();
    for g in circuit.gates() {
        by_gate = by_gate.apply_unitary(&g.matrix(), &g.targets).unwrap();
    }
    let fused = circuit.apply_state(&sv).unwrap();
    for (a, b) in by_gate.amplitudes().iter().zip(fused.amplitudes()) {
        assert!((a - b).norm() < 1e-12);
    }
}
