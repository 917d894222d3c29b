use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{DataSource, ExperimentConfig, ModelSpec};
use crate::circuit::{build_ansatz, ParameterVector};
use crate::data::{
    load_series_csv, prepare_regression, synth_mc_corpus, synth_series, Corpus, ScalingParams, SequenceSet,
};
use crate::error::{Error, Result};
use crate::eval::{
    classification_accuracy, export_predictions, prediction_accuracy, relative_errors, BaselineRnn, MetricsReport,
};
use crate::model::{rescale_prediction, ModelConfig};
use crate::train::{
    fit, grad_finite_difference, grad_parameter_shift, init_params, rescale_all, Checkpoint, EpochReport,
    QrnnModel, SequenceModel, TrainConfig, TrainingHistory,
};

pub const CHECKPOINT_FILE: &str = "checkpoint.json";
pub const HISTORY_FILE: &str = "history.json";
pub const METRICS_FILE: &str = "metrics.json";
pub const PREDICTIONS_BASE: &str = "predictions";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Regression,
    Classification,
}

/// Train/test sequences for one experiment.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub task: Task,
    pub dataset: String,
    pub train: SequenceSet,
    pub test: SequenceSet,
    /// Present for classification tasks.
    pub corpus: Option<Corpus>,
}

pub fn prepare_data(cfg: &ExperimentConfig) -> Result<PreparedData> {
    let n_train = cfg.data.n_train();
    let series = match &cfg.data.source {
        DataSource::Synth(spec) => synth_series(spec)?,
        DataSource::Csv(src) => load_series_csv(&src.path, &src.column)?,
        DataSource::Corpus(src) => {
            let corpus = match &src.path {
                Some(p) => Corpus::load(p)?,
                None => synth_mc_corpus(src.seed),
            };
            let all = corpus.to_sequences()?;
            if n_train >= all.len() {
                return Err(Error::config(
                    "data.n_train",
                    format!("n_train {n_train} leaves no test sentences out of {}", all.len()),
                ));
            }
            let idx: Vec<usize> = (0..all.len()).collect();
            return Ok(PreparedData {
                task: Task::Classification,
                dataset: match &src.path {
                    Some(p) => p.display().to_string(),
                    None => format!("mc_corpus(seed={})", src.seed),
                },
                train: all.select(&idx[..n_train]),
                test: all.select(&idx[n_train..]),
                corpus: Some(corpus),
            });
        }
    };
    let (train, test) = prepare_regression(&series, cfg.data.window, n_train)?;
    Ok(PreparedData {
        task: Task::Regression,
        dataset: series.name.clone(),
        train: train.to_sequences(),
        test: test.to_sequences(),
        corpus: None,
    })
}

/// A model of either family behind one interface.
#[derive(Debug, Clone, Copy)]
pub enum AnyModel {
    Qrnn(QrnnModel),
    Rnn(BaselineRnn),
}

impl AnyModel {
    pub fn new(spec: &ModelSpec, train: &TrainConfig) -> Self {
        match *spec {
            ModelSpec::Qrnn { config } => AnyModel::Qrnn(QrnnModel {
                config,
                shots: train.shots,
                seed: train.seed,
            }),
            ModelSpec::Rnn { config } => AnyModel::Rnn(BaselineRnn { config }),
        }
    }

    pub fn fit<F>(&self, data: &SequenceSet, cfg: &TrainConfig, on_epoch: F) -> Result<TrainingHistory>
    where
        F: FnMut(&EpochReport) -> Result<()> + Send,
    {
        match self {
            AnyModel::Qrnn(m) => fit(m, data, cfg, on_epoch),
            AnyModel::Rnn(m) => fit(m, data, cfg, on_epoch),
        }
    }

    /// Unit-scale outputs for each input sequence.
    pub fn outputs(&self, params: &[f64], inputs: &[Vec<f64>]) -> Result<Vec<f64>> {
        fn run<M: SequenceModel>(m: &M, params: &[f64], inputs: &[Vec<f64>]) -> Result<Vec<f64>> {
            if params.len() != m.param_count() {
                return Err(Error::LengthMismatch {
                    left: params.len(),
                    right: m.param_count(),
                });
            }
            m.outputs(params, &m.prepare(inputs)?, 0)
        }
        match self {
            AnyModel::Qrnn(m) => run(m, params, inputs),
            AnyModel::Rnn(m) => run(m, params, inputs),
        }
    }
}

/// Score `params` on `data`.
fn score(model: &AnyModel, task: Task, params: &[f64], data: &SequenceSet) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let outputs = model.outputs(params, &data.inputs)?;
    match task {
        Task::Regression => {
            let predicted = rescale_all(&outputs, &data.scaling);
            let errors = relative_errors(&data.targets, &predicted)?;
            Ok((prediction_accuracy(&data.targets, &predicted)?, predicted, errors))
        }
        Task::Classification => {
            let labels: Vec<u8> = data.targets.iter().map(|&t| t as u8).collect();
            Ok((classification_accuracy(&outputs, &labels)?, outputs, Vec::new()))
        }
    }
}

fn train_loss(model: &AnyModel, params: &[f64], data: &SequenceSet) -> Result<f64> {
    let outputs = model.outputs(params, &data.inputs)?;
    crate::train::l2_loss(&rescale_all(&outputs, &data.scaling), &data.targets)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Result of a `train` job.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub history: TrainingHistory,
    pub metrics: MetricsReport,
    pub output_dir: PathBuf,
}

/// Train, checkpoint every epoch, then score the test split.
pub fn run_train(cfg: &ExperimentConfig) -> Result<TrainOutcome> {
    run_train_with(cfg, |_| {})
}

/// [`run_train`] with a per-epoch progress callback.
pub fn run_train_with<P>(cfg: &ExperimentConfig, mut progress: P) -> Result<TrainOutcome>
where
    P: FnMut(&EpochReport) + Send,
{
    cfg.validate()?;
    let spec = cfg.model.spec()?;
    let data = prepare_data(cfg)?;
    let model = AnyModel::new(&spec, &cfg.train);
    let dir = &cfg.output.dir;
    ensure_dir(dir)?;
    let ck_path = dir.join(CHECKPOINT_FILE);
    let checkpoint = |r: &EpochReport| -> Result<()> {
        progress(r);
        if cfg.output.checkpoint {
            Checkpoint {
                spec,
                params: r.params.to_vec(),
                optimizer: r.optimizer.clone(),
                epoch: r.epoch,
                seed: cfg.train.seed,
                scaling: data.train.scaling,
            }
            .save(&ck_path)?;
        }
        Ok(())
    };
    let history = model.fit(&data.train, &cfg.train, checkpoint)?;
    // always leave the final state behind, even with per-epoch saving off
    Checkpoint {
        spec,
        params: history.params.clone(),
        optimizer: history.optimizer.clone(),
        epoch: history.epochs(),
        seed: cfg.train.seed,
        scaling: data.train.scaling,
    }
    .save(&ck_path)?;
    write_json(&dir.join(HISTORY_FILE), &history)?;
    let metrics = evaluate(&model, &spec, &data, &history.params, dir)?;
    Ok(TrainOutcome {
        history,
        metrics,
        output_dir: dir.clone(),
    })
}

fn evaluate(model: &AnyModel, spec: &ModelSpec, data: &PreparedData, params: &[f64], dir: &Path) -> Result<MetricsReport> {
    let (accuracy, predicted, errors) = score(model, data.task, params, &data.test)?;
    let mut metrics = MetricsReport::new(
        spec.label(),
        data.dataset.clone(),
        accuracy,
        data.test.len(),
        train_loss(model, params, &data.train)?,
    );
    metrics.relative_errors = errors;
    metrics.save(dir.join(METRICS_FILE))?;
    export_predictions(&data.test.targets, &predicted, dir.join(PREDICTIONS_BASE))?;
    Ok(metrics)
}

fn load_checkpoint(cfg: &ExperimentConfig) -> Result<Checkpoint<ModelSpec>> {
    let path = cfg.output.dir.join(CHECKPOINT_FILE);
    if !path.exists() {
        return Err(Error::InvalidArgument(format!(
            "no checkpoint at {}; run `train` first",
            path.display()
        )));
    }
    Checkpoint::load(path)
}

/// Re-score the saved checkpoint on the test split; writes metrics and the
/// prediction CSV/SVG.
pub fn run_eval(cfg: &ExperimentConfig) -> Result<MetricsReport> {
    cfg.validate()?;
    let ck = load_checkpoint(cfg)?;
    let data = prepare_data(cfg)?;
    if ck.scaling != data.train.scaling {
        return Err(Error::InvalidArgument(
            "checkpoint was trained on different data than the config describes".into(),
        ));
    }
    let model = AnyModel::new(&ck.spec, &cfg.train);
    evaluate(&model, &ck.spec, &data, &ck.params, &cfg.output.dir)
}

/// Input to `predict`: raw series values or words.
#[derive(Debug, Clone, PartialEq)]
pub enum PredictInput {
    Values(Vec<f64>),
    Words(Vec<String>),
}

/// Forecast (regression) or class probability (classification) for one
/// input with the saved checkpoint.
pub fn run_predict(cfg: &ExperimentConfig, input: &PredictInput) -> Result<f64> {
    cfg.validate()?;
    let ck = load_checkpoint(cfg)?;
    let model = AnyModel::new(&ck.spec, &cfg.train);
    let angles = match input {
        PredictInput::Values(v) => {
            if v.is_empty() {
                return Err(Error::Empty("window"));
            }
            v.iter().map(|&x| ck.scaling.to_angle(x)).collect()
        }
        PredictInput::Words(words) => {
            let vocab = match &cfg.data.source {
                DataSource::Corpus(src) => match &src.path {
                    Some(p) => Corpus::load(p)?.vocab,
                    None => synth_mc_corpus(src.seed).vocab,
                },
                _ => {
                    return Err(Error::InvalidArgument(
                        "word input needs a corpus data source".into(),
                    ))
                }
            };
            crate::data::encode_sentence(words, &vocab)?
        }
    };
    let out = model.outputs(&ck.params, &[angles])?[0];
    Ok(rescale_prediction(out, &ck.scaling))
}

/// Write the configured synthetic data set (`series.csv` or `corpus.json`)
/// to `path`.
pub fn run_synth(cfg: &ExperimentConfig, path: &Path) -> Result<PathBuf> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    match &cfg.data.source {
        DataSource::Synth(spec) => {
            let series = synth_series(spec)?;
            let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::io(path, io),
                other => Error::InvalidArgument(format!("{other:?}")),
            })?;
            w.write_record(["t", "value"])?;
            for (t, v) in series.values.iter().enumerate() {
                w.write_record([t.to_string(), v.to_string()])?;
            }
            w.flush().map_err(|e| Error::io(path, e))?;
        }
        DataSource::Corpus(src) => synth_mc_corpus(src.seed).save(path)?,
        DataSource::Csv(_) => {
            return Err(Error::config(
                "data.source",
                "synth needs a synthetic source (synth or corpus), not csv",
            ))
        }
    }
    Ok(path.to_path_buf())
}

/// Human-readable description of the configured model.
pub fn inspect(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    match cfg.model.spec()? {
        ModelSpec::Qrnn { config } => {
            let params = ParameterVector::zeros(config.param_count());
            let circuit = build_ansatz(&config.ansatz, &params)?;
            Ok(format!(
                "model: {}\nqubits: {} (data {}, history {})\nentangler: {} x{} rounds, {} layer(s)\ntrainable parameters: {}\nansatz per step:\n{}",
                ModelSpec::Qrnn { config }.label(),
                config.n_qubits(),
                config.d,
                config.h,
                config.ansatz.entangler.layout,
                config.ansatz.entangler.rounds,
                config.ansatz.single_qubit_layers,
                circuit.trainable_count(),
                circuit
            ))
        }
        ModelSpec::Rnn { config } => Ok(format!(
            "model: {}\nactivation: tanh, identity output{}\ntrainable parameters: {}\n",
            ModelSpec::Rnn { config }.label(),
            if config.output_bias { " with bias" } else { "" },
            config.param_count()
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradCheckReport {
    pub n_params: usize,
    pub n_samples: usize,
    pub window: usize,
    pub max_abs_deviation: f64,
    pub fd_seconds: f64,
    pub shift_seconds: f64,
}

/// Compare finite-difference and parameter-shift gradients of `config` at
/// seeded random parameters on seeded random windows.
pub fn grad_check(config: &ModelConfig, seed: u64, n_samples: usize, window: usize, fd_delta: f64) -> Result<GradCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<Vec<f64>> = (0..n_samples)
        .map(|_| (0..window).map(|_| rng.random_range(0.0..std::f64::consts::PI)).collect())
        .collect();
    let targets = (0..n_samples).map(|_| rng.random_range(1.0..2.0)).collect();
    let data = SequenceSet::new(inputs, targets, ScalingParams::new(1.0, 2.0)?)?;
    let params = init_params(&config.ansatz, seed);
    let t0 = std::time::Instant::now();
    let fd = grad_finite_difference(config, &params, &data, fd_delta)?;
    let fd_seconds = t0.elapsed().as_secs_f64();
    let t1 = std::time::Instant::now();
    let ps = grad_parameter_shift(config, &params, &data)?;
    let shift_seconds = t1.elapsed().as_secs_f64();
    Ok(GradCheckReport {
        n_params: params.len(),
        n_samples,
        window,
        max_abs_deviation: fd.max_abs_diff(&ps),
        fd_seconds,
        shift_seconds,
    })
}
