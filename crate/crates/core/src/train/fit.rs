use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::grad::{check_data, model_gradient, GradMethod};
use super::loss::loss_of_outputs;
use super::model::{derive_seed, QrnnModel, SequenceModel};
use super::optim::{InitScheme, OptimizerKind, OptimizerState};
use crate::data::{ScalingParams, SequenceSet};
use crate::error::{Error, Result};
use crate::model::ModelConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub optimizer: OptimizerKind,
    /// `None` picks finite differences for exact readout and the shift rule
    /// when `shots` is set.
    pub grad_method: Option<GradMethod>,
    pub fd_delta: f64,
    pub seed: u64,
    /// Measurement shots per readout; `None` reads exact probabilities.
    pub shots: Option<u64>,
    pub init: InitScheme,
    /// Stop once the training loss falls below this value.
    pub early_stop: Option<f64>,
    /// Threads for gradient evaluation; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.03,
            epochs: 100,
            optimizer: OptimizerKind::Gd,
            grad_method: None,
            fd_delta: 1e-4,
            seed: 0,
            shots: None,
            init: InitScheme::Uniform,
            early_stop: None,
            workers: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate must be positive, got {}", self.learning_rate));
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1".into());
        }
        if !(self.fd_delta > 0.0 && self.fd_delta.is_finite()) {
            return bad(format!("fd_delta must be positive, got {}", self.fd_delta));
        }
        if self.shots == Some(0) {
            return bad("shots must be at least 1".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn method(&self) -> GradMethod {
        self.grad_method.unwrap_or(match self.shots {
            Some(_) => GradMethod::ParameterShift,
            None => GradMethod::FiniteDifference,
        })
    }
}

/// State handed to the per-epoch callback.
#[derive(Debug)]
pub struct EpochReport<'a> {
    /// 1-based.
    pub epoch: usize,
    pub loss: f64,
    pub params: &'a [f64],
    pub optimizer: &'a OptimizerState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingHistory {
    /// Loss before the first update.
    pub initial_loss: f64,
    /// Loss after each epoch's update.
    pub losses: Vec<f64>,
    pub params: Vec<f64>,
    pub optimizer: OptimizerState,
    pub epoch_seconds: Vec<f64>,
    /// Gradient cost summed over all epochs.
    pub gradient_evaluations: usize,
    pub stopped_early: bool,
}

impl TrainingHistory {
    pub fn final_loss(&self) -> f64 {
        *self.losses.last().unwrap_or(&self.initial_loss)
    }

    pub fn epochs(&self) -> usize {
        self.losses.len()
    }
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Full-batch training loop: gradient, optimizer update, loss, callback.
pub fn fit<M, F>(model: &M, data: &SequenceSet, cfg: &TrainConfig, mut on_epoch: F) -> Result<TrainingHistory>
where
    M: SequenceModel,
    F: FnMut(&EpochReport) -> Result<()> + Send,
{
    cfg.validate()?;
    let method = cfg.method();
    with_workers(cfg.workers, || {
        let batch = model.prepare(&data.inputs)?;
        let mut params = model.initial_params(cfg.init, cfg.seed);
        check_data(model, &params, data)?;
        let mut optimizer = OptimizerState::new(cfg.optimizer, params.len());
        let loss_at = |params: &[f64], epoch: usize| -> Result<f64> {
            let stream = derive_seed(cfg.seed, &[epoch as u64, u64::MAX - 1]);
            loss_of_outputs(&model.outputs(params, &batch, stream)?, data)
        };
        let initial_loss = loss_at(&params, 0)?;
        let mut losses = Vec::with_capacity(cfg.epochs);
        let mut epoch_seconds = Vec::with_capacity(cfg.epochs);
        let mut gradient_evaluations = 0;
        let mut stopped_early = false;
        for epoch in 1..=cfg.epochs {
            let started = Instant::now();
            let stream = derive_seed(cfg.seed, &[epoch as u64]);
            let grad = model_gradient(model, &params, &batch, data, method, cfg.fd_delta, stream)?;
            gradient_evaluations += grad.evaluations;
            params = optimizer.update(&params, &grad.values, cfg.learning_rate)?;
            let loss = loss_at(&params, epoch)?;
            if !loss.is_finite() {
                return Err(Error::InvalidArgument(format!("training diverged at epoch {epoch}")));
            }
            losses.push(loss);
            epoch_seconds.push(started.elapsed().as_secs_f64());
            on_epoch(&EpochReport {
                epoch,
                loss,
                params: &params,
                optimizer: &optimizer,
            })?;
            if cfg.early_stop.is_some_and(|t| loss < t) {
                stopped_early = true;
                break;
            }
        }
        Ok(TrainingHistory {
            initial_loss,
            losses,
            params,
            optimizer,
            epoch_seconds,
            gradient_evaluations,
            stopped_early,
        })
    })?
}

/// Train the quantum network on `data`.
pub fn fit_qrnn(config: ModelConfig, data: &SequenceSet, cfg: &TrainConfig) -> Result<TrainingHistory> {
    let model = QrnnModel {
        config,
        shots: cfg.shots,
        seed: cfg.seed,
    };
    fit(&model, data, cfg, |_| Ok(()))
}

/// Everything needed to resume or evaluate a training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint<S> {
    pub spec: S,
    pub params: Vec<f64>,
    pub optimizer: OptimizerState,
    pub epoch: usize,
    pub seed: u64,
    pub scaling: ScalingParams,
}

impl<S: Serialize + serde::de::DeserializeOwned> Checkpoint<S> {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
