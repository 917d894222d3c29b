use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::loss::loss_of_outputs;
use super::model::{derive_seed, QrnnModel, SequenceModel};
use crate::circuit::ParameterVector;
use crate::data::SequenceSet;
use crate::error::{Error, Result};
use crate::model::{rescale_prediction, ModelConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradMethod {
    FiniteDifference,
    ParameterShift,
}

impl FromStr for GradMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "finite_difference" | "fd" => Ok(Self::FiniteDifference),
            "parameter_shift" | "ps" | "shift" => Ok(Self::ParameterShift),
            other => Err(Error::InvalidArgument(format!("unknown gradient method `{other}`"))),
        }
    }
}

/// A loss gradient and what it cost: batch-loss evaluations for finite
/// differences, shifted readout evaluations for the shift rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub values: Vec<f64>,
    pub evaluations: usize,
}

impl Gradient {
    pub fn max_abs_diff(&self, other: &Gradient) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Central differences `[f(x + Δe_j) − f(x − Δe_j)] / 2Δ`, one component per
/// parallel task.
pub fn finite_difference<F>(f: F, x: &[f64], delta: f64) -> Result<Vec<f64>>
where
    F: Fn(usize, i8, &[f64]) -> Result<f64> + Sync,
{
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {delta}")));
    }
    (0..x.len())
        .into_par_iter()
        .map(|j| {
            let mut probe = x.to_vec();
            probe[j] = x[j] + delta;
            let up = f(j, 1, &probe)?;
            probe[j] = x[j] - delta;
            let down = f(j, -1, &probe)?;
            Ok((up - down) / (2.0 * delta))
        })
        .collect()
}

pub(crate) fn check_data<M: SequenceModel>(model: &M, params: &[f64], data: &SequenceSet) -> Result<()> {
    if params.len() != model.param_count() {
        return Err(Error::LengthMismatch {
            left: params.len(),
            right: model.param_count(),
        });
    }
    if data.is_empty() {
        return Err(Error::Empty("training set"));
    }
    Ok(())
}

/// Loss gradient of any [`SequenceModel`]. `stream` keys the random draws of
/// stochastic models.
pub fn model_gradient<M: SequenceModel>(
    model: &M,
    params: &[f64],
    batch: &M::Batch,
    data: &SequenceSet,
    method: GradMethod,
    fd_delta: f64,
    stream: u64,
) -> Result<Gradient> {
    check_data(model, params, data)?;
    match method {
        GradMethod::FiniteDifference => {
            let values = finite_difference(
                |j, sign, probe| {
                    let s = derive_seed(stream, &[j as u64, sign as u64]);
                    loss_of_outputs(&model.outputs(probe, batch, s)?, data)
                },
                params,
                fd_delta,
            )?;
            Ok(Gradient {
                values,
                evaluations: 2 * params.len(),
            })
        }
        GradMethod::ParameterShift => {
            let outputs = model.outputs(params, batch, derive_seed(stream, &[u64::MAX]))?;
            let (jac, evaluations) = model.shift_jacobian(params, batch, stream)?;
            let n = data.len() as f64;
            let range = data.scaling.range();
            let residuals: Vec<f64> = outputs
                .iter()
                .zip(&data.targets)
                .map(|(&p, &y)| rescale_prediction(p, &data.scaling) - y)
                .collect();
            let values = jac
                .iter()
                .map(|col| 2.0 / n * range * col.iter().zip(&residuals).map(|(d, r)| d * r).sum::<f64>())
                .collect();
            Ok(Gradient { values, evaluations })
        }
    }
}

/// Training loss of the network with `params` (exact readout).
pub fn batch_loss(config: &ModelConfig, params: &ParameterVector, data: &SequenceSet) -> Result<f64> {
    let model = QrnnModel::analytic(*config);
    check_data(&model, params.as_slice(), data)?;
    let batch = model.prepare(&data.inputs)?;
    loss_of_outputs(&model.outputs(params.as_slice(), &batch, 0)?, data)
}

/// Central-difference loss gradient (exact readout); `2·P` batch evaluations.
pub fn grad_finite_difference(
    config: &ModelConfig,
    params: &ParameterVector,
    data: &SequenceSet,
    delta: f64,
) -> Result<Gradient> {
    let model = QrnnModel::analytic(*config);
    let batch = model.prepare(&data.inputs)?;
    model_gradient(&model, params.as_slice(), &batch, data, GradMethod::FiniteDifference, delta, 0)
}

/// Parameter-shift loss gradient (exact readout), summing the shift rule over
/// every time step a shared parameter acts in.
pub fn grad_parameter_shift(config: &ModelConfig, params: &ParameterVector, data: &SequenceSet) -> Result<Gradient> {
    let model = QrnnModel::analytic(*config);
    let batch = model.prepare(&data.inputs)?;
    model_gradient(&model, params.as_slice(), &batch, data, GradMethod::ParameterShift, 0.0, 0)
}
