use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::rescale_to_angle;
use crate::error::{Error, Result};

/// Named, ordered sequence of raw observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawSeries {
    pub name: String,
    pub values: Vec<f64>,
}

impl RawSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("series value {i} is not finite")));
        }
        Ok(Self {
            name: name.into(),
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Read one numeric column from a headed CSV file.
pub fn load_series_csv(path: impl AsRef<Path>, column: &str) -> Result<RawSeries> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let headers = reader.headers()?.clone();
    let col = headers
        .iter()
        .position(|h| h.trim() == column)
        .ok_or_else(|| Error::ColumnNotFound(column.to_string()))?;
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        // row numbers count the header as row 1
        let row = i + 2;
        let cell = record.get(col).unwrap_or("").trim();
        let v: f64 = cell.parse().map_err(|_| Error::Parse {
            row,
            value: cell.to_string(),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                row,
                value: cell.to_string(),
            });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    RawSeries::new(column, values)
}

/// Min/max used to map raw values to angles and predictions back.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub x_min: f64,
    pub x_max: f64,
}

impl ScalingParams {
    pub fn new(x_min: f64, x_max: f64) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "invalid scaling range [{x_min}, {x_max}]"
            )));
        }
        Ok(Self { x_min, x_max })
    }

    /// Identity scaling for probabilities and class labels.
    pub fn unit() -> Self {
        Self {
            x_min: 0.0,
            x_max: 1.0,
        }
    }

    pub fn range(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn to_angle(&self, x: f64) -> f64 {
        rescale_to_angle(x, self.x_min, self.x_max).expect("validated range")
    }
}

/// Min and max of `values`; constant input is rejected.
pub fn fit_scaling(values: &[f64]) -> Result<ScalingParams> {
    if values.is_empty() {
        return Err(Error::Empty("series"));
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return Err(Error::InvalidArgument("series is constant".into()));
    }
    ScalingParams::new(lo, hi)
}

/// One input window (as encoding angles) and its raw next value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSample {
    pub inputs: Vec<f64>,
    pub target: f64,
    /// Index of the first input element in the source series.
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowedDataset {
    pub samples: Vec<WindowSample>,
    pub scaling: ScalingParams,
    pub window: usize,
}

impl WindowedDataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn targets(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.target).collect()
    }

    pub fn to_sequences(&self) -> SequenceSet {
        SequenceSet {
            inputs: self.samples.iter().map(|s| s.inputs.clone()).collect(),
            targets: self.targets(),
            scaling: self.scaling,
        }
    }
}

/// Slide a `window`-long view over the series: inputs `x[i..i+window]`
/// mapped to angles with `scaling`, target `x[i+window]` kept raw.
pub fn make_windows(series: &RawSeries, window: usize, scaling: &ScalingParams) -> Result<WindowedDataset> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    if series.len() < window + 1 {
        return Err(Error::InvalidArgument(format!(
            "series of length {} is too short for window {window}",
            series.len()
        )));
    }
    let samples = series
        .values
        .windows(window + 1)
        .enumerate()
        .map(|(start, w)| WindowSample {
            inputs: w[..window].iter().map(|&x| scaling.to_angle(x)).collect(),
            target: w[window],
            start,
        })
        .collect();
    Ok(WindowedDataset {
        samples,
        scaling: *scaling,
        window,
    })
}

/// First `n_train` samples train, the rest test. No shuffling.
pub fn chronological_split(ds: &WindowedDataset, n_train: usize) -> Result<(WindowedDataset, WindowedDataset)> {
    if n_train == 0 || n_train >= ds.len() {
        return Err(Error::InvalidArgument(format!(
            "n_train must be in 1..{}, got {n_train}",
            ds.len()
        )));
    }
    let part = |s: &[WindowSample]| WindowedDataset {
        samples: s.to_vec(),
        scaling: ds.scaling,
        window: ds.window,
    };
    Ok((part(&ds.samples[..n_train]), part(&ds.samples[n_train..])))
}

/// Fit scaling on the elements the first `n_train` windows touch, window the
/// whole series with it, and split chronologically.
pub fn prepare_regression(
    series: &RawSeries,
    window: usize,
    n_train: usize,
) -> Result<(WindowedDataset, WindowedDataset)> {
    let train_span = (n_train + window).min(series.len());
    let scaling = fit_scaling(&series.values[..train_span])?;
    let ds = make_windows(series, window, &scaling)?;
    chronological_split(&ds, n_train)
}

/// Model-ready sequences: encoding angles per step and a target per sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSet {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub scaling: ScalingParams,
}

impl SequenceSet {
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<f64>, scaling: ScalingParams) -> Result<Self> {
        if inputs.len() != targets.len() {
            return Err(Error::LengthMismatch {
                left: inputs.len(),
                right: targets.len(),
            });
        }
        if inputs.is_empty() {
            return Err(Error::Empty("sequence set"));
        }
        if inputs.iter().any(|w| w.is_empty()) {
            return Err(Error::Empty("sequence"));
        }
        Ok(Self {
            inputs,
            targets,
            scaling,
        })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Subset holding the samples at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            inputs: indices.iter().map(|&i| self.inputs[i].clone()).collect(),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            scaling: self.scaling,
        }
    }
}
