use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Actuals closer to zero than this make relative errors meaningless.
pub const MIN_ABS_ACTUAL: f64 = 1e-9;

fn same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { left: a, right: b });
    }
    if a == 0 {
        return Err(Error::Empty("predictions"));
    }
    Ok(())
}

/// `(actual − predicted) / actual` per sample.
pub fn relative_errors(actuals: &[f64], predicted: &[f64]) -> Result<Vec<f64>> {
    same_len(actuals.len(), predicted.len())?;
    actuals
        .iter()
        .zip(predicted)
        .enumerate()
        .map(|(i, (&a, &p))| {
            if a.abs() < MIN_ABS_ACTUAL {
                Err(Error::ZeroActual(i))
            } else {
                Ok((a - p) / a)
            }
        })
        .collect()
}

/// `(1 − sqrt(mean(E_i²))) · 100` with relative errors `E_i`.
pub fn prediction_accuracy(actuals: &[f64], predicted: &[f64]) -> Result<f64> {
    let errs = relative_errors(actuals, predicted)?;
    let ms = errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64;
    Ok((1.0 - ms.sqrt()) * 100.0)
}

/// Percentage of samples whose thresholded probability matches the label;
/// `p > 0.5` means class 1, so a tie counts as class 0.
pub fn classification_accuracy(probs: &[f64], labels: &[u8]) -> Result<f64> {
    same_len(probs.len(), labels.len())?;
    let correct = probs
        .iter()
        .zip(labels)
        .filter(|(&p, &l)| u8::from(p > 0.5) == l)
        .count();
    Ok(100.0 * correct as f64 / probs.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub model: String,
    pub dataset: String,
    pub accuracy_percent: f64,
    pub n_samples: usize,
    pub loss_final: f64,
    /// Empty for classification.
    pub relative_errors: Vec<f64>,
    /// Seconds since the Unix epoch; the only field that varies between
    /// otherwise identical runs.
    pub generated_at: u64,
}

impl MetricsReport {
    pub fn new(model: impl Into<String>, dataset: impl Into<String>, accuracy_percent: f64, n_samples: usize, loss_final: f64) -> Self {
        let generated_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            model: model.into(),
            dataset: dataset.into(),
            accuracy_percent,
            n_samples,
            loss_final,
            relative_errors: Vec::new(),
            generated_at,
        }
    }

    /// Copy with the timestamp zeroed, for comparing runs.
    pub fn without_timestamp(&self) -> Self {
        Self {
            generated_at: 0,
            ..self.clone()
        }
    }

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
