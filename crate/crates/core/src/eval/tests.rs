use super::*;
use crate::data::{ScalingParams, SequenceSet};
use crate::train::{fit, InitScheme, SequenceModel, TrainConfig};
use crate::Error;

#[test]
fn prediction_accuracy_examples() {
    assert_eq!(prediction_accuracy(&[3.0, 4.0], &[3.0, 4.0]).unwrap(), 100.0);
    assert!((prediction_accuracy(&[10.0], &[9.0]).unwrap() - 90.0).abs() < 1e-12);
    // E = 0.3, 0.4
    let acc = prediction_accuracy(&[10.0, 10.0], &[7.0, 6.0]).unwrap();
    assert!((acc - (1.0 - 0.125f64.sqrt()) * 100.0).abs() < 1e-9);
    assert!((acc - 64.645).abs() < 1e-3);
}

#[test]
fn prediction_accuracy_rejects_zero_actuals() {
    assert!(matches!(prediction_accuracy(&[1.0, 0.0], &[1.0, 1.0]), Err(Error::ZeroActual(1))));
    assert!(prediction_accuracy(&[1.0], &[1.0, 2.0]).is_err());
}

#[test]
fn prediction_accuracy_is_scale_invariant() {
    let a = [3.0, 5.0, -2.0];
    let p = [2.5, 5.5, -2.2];
    let base = prediction_accuracy(&a, &p).unwrap();
    for c in [-3.0, 0.01, 7.0] {
        let sa: Vec<f64> = a.iter().map(|x| x * c).collect();
        let sp: Vec<f64> = p.iter().map(|x| x * c).collect();
        assert!((prediction_accuracy(&sa, &sp).unwrap() - base).abs() < 1e-9);
    }
}

#[test]
fn classification_accuracy_examples() {
    assert_eq!(classification_accuracy(&[0.9, 0.1], &[1, 0]).unwrap(), 100.0);
    assert_eq!(classification_accuracy(&[0.5], &[1]).unwrap(), 0.0);
    assert_eq!(classification_accuracy(&[0.6, 0.6], &[1, 0]).unwrap(), 50.0);
    assert!(classification_accuracy(&[0.6], &[1, 0]).is_err());
}

#[test]
fn baseline_parameter_count() {
    assert_eq!(BaselineConfig::default().param_count(), 49);
    for hidden in 1..=8 {
        let cfg = BaselineConfig { hidden, output_bias: true };
        // enumerate entries: v, W, u, bias
        let mut entries = 0;
        entries += (0..hidden).count();
        entries += (0..hidden).flat_map(|i| (0..hidden).map(move |j| (i, j))).count();
        entries += (0..hidden).count();
        entries += 1;
        assert_eq!(cfg.param_count(), entries);
        let weights = vec![0.0; entries];
        assert!(baseline_rnn_forward(&cfg, &[0.3], &weights).is_ok());
        assert!(baseline_rnn_forward(&cfg, &[0.3], &weights[1..]).is_err());
    }
}

#[test]
fn baseline_forward_examples() {
    let cfg = BaselineConfig::default();
    assert_eq!(baseline_rnn_forward(&cfg, &[0.2; 7], &[0.0; 49]).unwrap(), 0.0);
    let mut w = vec![0.0; 49];
    w[48] = 0.25;
    assert_eq!(baseline_rnn_forward(&cfg, &[0.2; 7], &w).unwrap(), 0.25);
    let tiny = BaselineConfig {
        hidden: 1,
        output_bias: false,
    };
    let y = baseline_rnn_forward(&tiny, &[0.5], &[1.0, 0.0, 1.0]).unwrap();
    assert!((y - 0.5f64.tanh()).abs() < 1e-15);
    assert!((y - 0.4621).abs() < 1e-4);
    // two steps: h2 = tanh(v x2 + w h1)
    let y2 = baseline_rnn_forward(&tiny, &[0.5, 0.1], &[1.0, 0.5, 2.0]).unwrap();
    assert!((y2 - 2.0 * (0.1 + 0.5 * 0.5f64.tanh()).tanh()).abs() < 1e-15);
    assert!(baseline_rnn_forward(&tiny, &[], &[1.0, 0.0, 1.0]).is_err());
}

#[test]
fn baseline_trains_with_the_shared_loop() {
    let rnn = BaselineRnn {
        config: BaselineConfig::default(),
    };
    let init = rnn.initial_params(InitScheme::Uniform, 1);
    assert!(init.iter().all(|w| w.abs() <= 1.0 / 6f64.sqrt()));
    let inputs: Vec<Vec<f64>> = (0..20).map(|i| vec![0.1 * (i % 10) as f64; 3]).collect();
    let targets: Vec<f64> = (0..20).map(|i| 1.0 + 0.1 * (i % 10) as f64).collect();
    let data = SequenceSet::new(inputs, targets, ScalingParams::new(1.0, 2.0).unwrap()).unwrap();
    let tc = TrainConfig {
        epochs: 40,
        learning_rate: 0.1,
        ..TrainConfig::default()
    };
    let h = fit(&rnn, &data, &tc, |_| Ok(())).unwrap();
    assert!(h.final_loss() < h.initial_loss);
    let shift = TrainConfig {
        grad_method: Some(crate::train::GradMethod::ParameterShift),
        ..tc
    };
    assert!(matches!(fit(&rnn, &data, &shift, |_| Ok(())), Err(Error::NoShiftRule(_))));
}

#[test]
fn export_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let actual = vec![1.0, 2.5, 0.1 + 0.2];
    let predicted = vec![1.1, 2.4, std::f64::consts::PI];
    let (csv, svg) = export_predictions(&actual, &predicted, dir.path().join("pred")).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().next().unwrap(), "index,actual,predicted");
    let (a, p) = read_predictions_csv(&csv).unwrap();
    assert_eq!(a, actual);
    assert_eq!(p, predicted);
    let chart = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(chart.matches("<polyline").count(), 2);
    assert!(chart.contains("legend") && chart.contains("actual") && chart.contains("predicted"));
}

#[test]
fn export_errors() {
    assert!(export_predictions(&[1.0], &[], "x").is_err());
    let missing = std::env::temp_dir().join("qrnn-no-such-dir").join("pred");
    assert!(matches!(export_predictions(&[1.0], &[1.0], missing), Err(Error::Io { .. })));
}

#[test]
fn metrics_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("metrics.json");
    let mut m = MetricsReport::new("qrnn", "sine", 97.5, 10, 0.01);
    m.relative_errors = vec![0.01, -0.02];
    m.save(&path).unwrap();
    let back = MetricsReport::load(&path).unwrap();
    assert_eq!(back, m);
    assert_eq!(back.without_timestamp().generated_at, 0);
}
