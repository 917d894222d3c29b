use std::f64::consts::PI;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::series::RawSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthKind {
    /// `offset + amplitude·sin(2πt/period) + ε`
    SineNoise,
    /// Sine plus a linear trend `slope·t`.
    TrendSeason,
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sine_noise" | "sine" => Ok(Self::SineNoise),
            "trend_season" | "trend" => Ok(Self::TrendSeason),
            other => Err(Error::InvalidArgument(format!(
                "unknown series kind `{other}` (expected sine_noise or trend_season)"
            ))),
        }
    }
}

/// Synthetic series generator settings. `noise` is the standard deviation of
/// the additive Gaussian term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthSpec {
    pub kind: SynthKind,
    pub length: usize,
    pub seed: u64,
    pub noise: f64,
    pub period: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub slope: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            kind: SynthKind::SineNoise,
            length: 500,
            seed: 0,
            noise: 0.05,
            period: 20.0,
            amplitude: 1.0,
            offset: 4.0,
            slope: 0.01,
        }
    }
}

impl SynthSpec {
    /// The noiseless value at time `t`.
    pub fn clean_value(&self, t: usize) -> f64 {
        let t = t as f64;
        let season = self.offset + self.amplitude * (2.0 * PI * t / self.period).sin();
        match self.kind {
            SynthKind::SineNoise => season,
            SynthKind::TrendSeason => season + self.slope * t,
        }
    }
}

pub fn synth_series(spec: &SynthSpec) -> Result<RawSeries> {
    if spec.length == 0 {
        return Err(Error::InvalidArgument("length must be at least 1".into()));
    }
    if !(spec.period > 0.0) {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    if !(spec.noise >= 0.0 && spec.noise.is_finite()) {
        return Err(Error::InvalidArgument(format!("invalid noise level {}", spec.noise)));
    }
    let normal = Normal::new(0.0, spec.noise).expect("validated noise level");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values = (0..spec.length)
        .map(|t| spec.clean_value(t) + normal.sample(&mut rng))
        .collect();
    let name = match spec.kind {
        SynthKind::SineNoise => "sine_noise",
        SynthKind::TrendSeason => "trend_season",
    };
    RawSeries::new(name, values)
}
