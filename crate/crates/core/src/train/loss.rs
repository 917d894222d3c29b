use crate::data::{ScalingParams, SequenceSet};
use crate::error::{Error, Result};
use crate::model::rescale_prediction;

/// Mean squared error.
pub fn l2_loss(predictions: &[f64], targets: &[f64]) -> Result<f64> {
    if predictions.len() != targets.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: targets.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::Empty("predictions"));
    }
    let sum: f64 = predictions.iter().zip(targets).map(|(p, t)| (p - t).powi(2)).sum();
    Ok(sum / predictions.len() as f64)
}

/// Unit-scale model outputs mapped back to series units.
pub fn rescale_all(outputs: &[f64], scaling: &ScalingParams) -> Vec<f64> {
    outputs.iter().map(|&p| rescale_prediction(p, scaling)).collect()
}

/// Loss of unit-scale outputs against the raw targets of `data`.
pub(crate) fn loss_of_outputs(outputs: &[f64], data: &SequenceSet) -> Result<f64> {
    l2_loss(&rescale_all(outputs, &data.scaling), &data.targets)
}
