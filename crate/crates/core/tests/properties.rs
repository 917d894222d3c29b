//! Property tests: simulator primitives against brute-force linear algebra,
//! plus invariants of the data pipeline and metrics.

mod common;

use common::*;
use proptest::prelude::*;
use qrnn_core::circuit::rescale_to_angle;
use qrnn_core::data::{fit_scaling, make_windows, RawSeries, ScalingParams, Vocabulary};
use qrnn_core::eval::classification_accuracy;

fn entries(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
}

/// `n` qubits, a random state, a distinct target subset of size `k`, and
/// entries for a `k`-qubit unitary. `proper` keeps `k < n`.
fn instance(proper: bool) -> impl Strategy<Value = (usize, Vec<(f64, f64)>, Vec<usize>, Vec<(f64, f64)>)> {
    let min_n = if proper { 2usize } else { 1 };
    (min_n..=4).prop_flat_map(move |n| {
        let max_k = if proper { n - 1 } else { n.min(2) };
        (1..=max_k).prop_flat_map(move |k| {
            (
                Just(n),
                entries(1 << (2 * n)),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(move |v| v[..k].to_vec()),
                entries(1 << (2 * k)),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn apply_unitary_matches_dense_conjugation((n, rho_e, targets, u_e) in instance(false)) {
        let rho = density(n, &rho_e);
        let u = unitary(targets.len(), &u_e);
        let got = to_dm(n, &rho).apply_unitary(&to_square(&u), &targets).unwrap();
        let full = embed(n, &u, &targets);
        let want = &full * &rho * full.adjoint();
        prop_assert!(max_diff(&got, &want) < 1e-10);
    }

    #[test]
    fn partial_trace_matches_index_sum((n, rho_e, targets, _u) in instance(true)) {
        let rho = density(n, &rho_e);
        let got = to_dm(n, &rho).partial_trace(&targets).unwrap();
        prop_assert!(max_diff(&got, &partial_trace_oracle(n, &rho, &targets)) < 1e-10);
    }

    #[test]
    fn reset_matches_kraus_channel((n, rho_e, targets, _u) in instance(true)) {
        let rho = density(n, &rho_e);
        let got = to_dm(n, &rho).reset_qubits(&targets).unwrap();
        prop_assert!(max_diff(&got, &reset_oracle(n, &rho, &targets)) < 1e-10);
        for &q in &targets {
            prop_assert!(got.prob_one(q).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn prob_one_matches_diagonal_sum((n, rho_e, _t, _u) in instance(false), q in 0usize..4) {
        prop_assume!(q < n);
        let rho = density(n, &rho_e);
        let want: f64 = (0..1usize << n).filter(|i| bit(*i, q) == 1).map(|i| rho[(i, i)].re).sum();
        let got = to_dm(n, &rho).prob_one(q).unwrap();
        prop_assert!((got - want).abs() < 1e-10);
    }

    #[test]
    fn unitary_chains_preserve_trace_and_hermiticity(
        rho_e in entries(1 << 6),
        gates in prop::collection::vec((entries(16), 0usize..3, 0usize..3), 500),
    ) {
        let n = 3;
        let mut dm = to_dm(n, &density(n, &rho_e));
        for (u_e, a, b) in &gates {
            let targets = if a == b { vec![*a] } else { vec![*a, *b] };
            let u = unitary(targets.len(), &u_e[..1 << (2 * targets.len())]);
            dm.apply_unitary_mut(&to_square(&u), &targets).unwrap();
        }
        prop_assert!((dm.trace() - c(1.0, 0.0)).norm() < 1e-10);
        prop_assert!(dm.hermiticity_error() < 1e-10);
        prop_assert!(dm.min_eigenvalue() > -1e-9);
    }
}

proptest! {
    #[test]
    fn windows_slide_one_step(values in prop::collection::vec(1.0..100.0f64, 9..60), window in 1usize..8) {
        let series = RawSeries::new("p", values.clone()).unwrap();
        let scaling = fit_scaling(&values).unwrap();
        let ds = make_windows(&series, window, &scaling).unwrap();
        prop_assert_eq!(ds.len(), values.len() - window);
        for (i, s) in ds.samples.iter().enumerate() {
            prop_assert_eq!(s.target, values[i + window]);
            prop_assert_eq!(s.inputs.len(), window);
            prop_assert!(s.inputs.iter().all(|a| (0.0..=std::f64::consts::PI).contains(a)));
            if i > 0 {
                // the window moved by one element
                prop_assert_eq!(&ds.samples[i - 1].inputs[1..], &s.inputs[..window - 1]);
            }
        }
    }

    #[test]
    fn angle_normalization_round_trips(lo in -50.0..50.0f64, span in 0.1..100.0f64, t in 0.0..1.0f64) {
        let hi = lo + span;
        let scaling = ScalingParams::new(lo, hi).unwrap();
        let x = lo + t * span;
        let angle = scaling.to_angle(x);
        prop_assert!((angle - rescale_to_angle(x, lo, hi).unwrap()).abs() < 1e-15);
        let back = lo + angle / std::f64::consts::PI * span;
        prop_assert!((back - x).abs() < 1e-9 * span.max(1.0));
    }

    #[test]
    fn out_of_range_values_clamp(lo in -5.0..5.0f64, span in 0.5..5.0f64, over in 0.01..10.0f64) {
        let scaling = ScalingParams::new(lo, lo + span).unwrap();
        prop_assert_eq!(scaling.to_angle(lo - over), 0.0);
        prop_assert_eq!(scaling.to_angle(lo + span + over), std::f64::consts::PI);
    }

    #[test]
    fn word_encoding_is_injective(size in 2usize..40) {
        let words: Vec<String> = (0..size).map(|i| format!("w{i}")).collect();
        let vocab = Vocabulary::new(words.clone()).unwrap();
        let mut angles: Vec<f64> = words.iter().map(|w| vocab.angle_of(w).unwrap()).collect();
        prop_assert!(angles.iter().all(|&a| a > 0.0 && a < std::f64::consts::PI));
        angles.sort_by(f64::total_cmp);
        prop_assert!(angles.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn classification_accuracy_ignores_threshold_preserving_maps(
        probs in prop::collection::vec(0.0..1.0f64, 1..40),
        labels_seed in any::<u64>(),
        power in 0.2..5.0f64,
    ) {
        let labels: Vec<u8> = (0..probs.len()).map(|i| ((labels_seed >> (i % 64)) & 1) as u8).collect();
        // strictly monotone on [0, 1] and fixes 0.5
        let remap = |p: f64| if p <= 0.5 { 0.5 * (2.0 * p).powf(power) } else { 1.0 - 0.5 * (2.0 * (1.0 - p)).powf(power) };
        let mapped: Vec<f64> = probs.iter().map(|&p| remap(p)).collect();
        prop_assert_eq!(
            classification_accuracy(&probs, &labels).unwrap(),
            classification_accuracy(&mapped, &labels).unwrap()
        );
    }
}
