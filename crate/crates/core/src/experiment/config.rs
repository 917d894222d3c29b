use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuit::{EntanglerConfig, EntanglerLayout};
use crate::data::SynthSpec;
use crate::error::{Error, Result};
use crate::eval::BaselineConfig;
use crate::model::{Architecture, ModelConfig, DEFAULT_QUBIT_CAP};
use crate::train::TrainConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Plain,
    Staggered,
    /// Classical baseline.
    Rnn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    pub kind: ModelKind,
    pub d: usize,
    pub h: usize,
    pub entangler: EntanglerLayout,
    pub rounds: usize,
    pub layers: usize,
    pub qubit_cap: usize,
    /// Baseline only.
    pub hidden: usize,
    /// Baseline only.
    pub output_bias: bool,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            kind: ModelKind::Plain,
            d: 3,
            h: 3,
            entangler: EntanglerLayout::Cb,
            rounds: 2,
            layers: 1,
            qubit_cap: DEFAULT_QUBIT_CAP,
            hidden: 6,
            output_bias: true,
        }
    }
}

/// Which concrete model a [`ModelSection`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ModelSpec {
    Qrnn { config: ModelConfig },
    Rnn { config: BaselineConfig },
}

impl ModelSpec {
    pub fn label(&self) -> String {
        match self {
            ModelSpec::Qrnn { config } => format!("{}-qrnn(d={},h={})", config.kind, config.d, config.h),
            ModelSpec::Rnn { config } => format!("rnn(hidden={})", config.hidden),
        }
    }
}

impl ModelSection {
    pub fn spec(&self) -> Result<ModelSpec> {
        let arch = match self.kind {
            ModelKind::Rnn => {
                let config = BaselineConfig {
                    hidden: self.hidden,
                    output_bias: self.output_bias,
                };
                config.validate().map_err(|e| Error::config("model.hidden", e.to_string()))?;
                return Ok(ModelSpec::Rnn { config });
            }
            ModelKind::Plain => Architecture::Plain,
            ModelKind::Staggered => Architecture::Staggered,
        };
        let entangler = EntanglerConfig {
            layout: self.entangler,
            rounds: self.rounds,
        };
        let config = ModelConfig::with_cap(self.d, self.h, arch, entangler, self.layers, self.qubit_cap).map_err(|e| {
            let field = match &e {
                Error::CapacityExceeded { .. } => "model.qubit_cap",
                Error::InvalidArgument(m) if m.contains("rounds") => "model.rounds",
                Error::InvalidArgument(m) if m.contains("layer") => "model.layers",
                Error::InvalidArgument(m) if m.contains("circuit-block") => "model.entangler",
                _ => "model.d",
            };
            Error::config(field, e.to_string())
        })?;
        Ok(ModelSpec::Qrnn { config })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvSource {
    pub path: PathBuf,
    pub column: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusSource {
    /// Corpus JSON file; `None` generates the synthetic corpus.
    pub path: Option<PathBuf>,
    pub seed: u64,
}

impl Default for CorpusSource {
    fn default() -> Self {
        Self { path: None, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataSource {
    Synth(SynthSpec),
    Csv(CsvSource),
    Corpus(CorpusSource),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DataSection {
    pub source: DataSource,
    /// Series tasks only.
    pub window: usize,
    /// Training samples (windows or sentences); the rest are test samples.
    /// Defaults to 300 windows or 100 sentences.
    pub n_train: Option<usize>,
}

impl Default for DataSection {
    fn default() -> Self {
        Self {
            source: DataSource::Synth(SynthSpec::default()),
            window: 7,
            n_train: None,
        }
    }
}

impl DataSection {
    pub fn n_train(&self) -> usize {
        self.n_train.unwrap_or(match self.source {
            DataSource::Corpus(_) => 100,
            _ => 300,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Write `checkpoint.json` after every epoch.
    pub checkpoint: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("runs/default"),
            checkpoint: true,
        }
    }
}

/// A complete job description, read from JSON.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub data: DataSection,
    pub train: TrainConfig,
    pub output: OutputSection,
}

impl ExperimentConfig {
    /// Parse and validate; errors carry the offending field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(if path == "." { String::new() } else { path }, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.model.spec()?;
        self.train.validate().map_err(|e| {
            let msg = e.to_string();
            let field = ["learning_rate", "epochs", "fd_delta", "shots", "workers"]
                .into_iter()
                .find(|f| msg.contains(f))
                .unwrap_or("");
            Error::config(format!("train.{field}"), msg)
        })?;
        if self.data.window == 0 {
            return Err(Error::config("data.window", "window must be at least 1"));
        }
        if self.data.n_train() == 0 {
            return Err(Error::config("data.n_train", "n_train must be at least 1"));
        }
        match &self.data.source {
            DataSource::Synth(s) => {
                if s.length < self.data.window + self.data.n_train() + 1 {
                    return Err(Error::config(
                        "data.source.synth.length",
                        format!(
                            "length {} leaves no test windows for window {} and n_train {}",
                            s.length,
                            self.data.window,
                            self.data.n_train()
                        ),
                    ));
                }
                if !(s.noise >= 0.0 && s.noise.is_finite()) {
                    return Err(Error::config("data.source.synth.noise", "noise must be non-negative"));
                }
                if !(s.period > 0.0) {
                    return Err(Error::config("data.source.synth.period", "period must be positive"));
                }
            }
            DataSource::Csv(c) if c.column.is_empty() => {
                return Err(Error::config("data.source.csv.column", "column name is empty"));
            }
            _ => {}
        }
        if matches!(spec, ModelSpec::Rnn { .. }) && self.train.shots.is_some() {
            return Err(Error::config("train.shots", "the classical baseline has no measurement shots"));
        }
        Ok(())
    }
}
