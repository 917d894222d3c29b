use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::optim::{init_vector, InitScheme};
use crate::circuit::{build_ansatz, ParameterVector};
use crate::error::{Error, Result};
use crate::model::{CompiledQrnn, ModelConfig, PreparedBatch};
use crate::sim::sample_bernoulli_mean;

/// Something that maps each input sequence to one output on the unit scale
/// and can be trained by the generic loop in [`super::fit`].
pub trait SequenceModel: Sync {
    /// Inputs preprocessed once per dataset.
    type Batch: Sync;

    fn param_count(&self) -> usize;

    fn prepare(&self, inputs: &[Vec<f64>]) -> Result<Self::Batch>;

    /// Final output per sequence. `stream` identifies the evaluation so that
    /// stochastic models can derive independent, schedule-free seeds.
    fn outputs(&self, params: &[f64], batch: &Self::Batch, stream: u64) -> Result<Vec<f64>>;

    /// `∂output_i/∂θ_j` by an exact shift rule, as `jac[j][i]`, plus the
    /// total number of shifted readout evaluations.
    fn shift_jacobian(&self, _params: &[f64], _batch: &Self::Batch, _stream: u64) -> Result<(Vec<Vec<f64>>, usize)> {
        Err(Error::NoShiftRule("model has no parameter-shift rule".into()))
    }

    /// Seeded starting point for training.
    fn initial_params(&self, scheme: InitScheme, seed: u64) -> Vec<f64> {
        init_vector(self.param_count(), scheme, seed)
    }

    /// Whether outputs are noisy estimates.
    fn is_stochastic(&self) -> bool {
        false
    }
}

/// Mix several words into one seed (splitmix64 finalizer per word).
pub fn derive_seed(master: u64, words: &[u64]) -> u64 {
    let mix = |mut z: u64| {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    words.iter().fold(mix(master), |acc, &w| mix(acc ^ mix(w)))
}

/// The quantum recurrent network as a trainable model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrnnModel {
    pub config: ModelConfig,
    /// `None` reads out exact probabilities.
    pub shots: Option<u64>,
    pub seed: u64,
}

impl QrnnModel {
    pub fn analytic(config: ModelConfig) -> Self {
        Self {
            config,
            shots: None,
            seed: 0,
        }
    }

    pub fn sampled(config: ModelConfig, shots: u64, seed: u64) -> Self {
        Self {
            config,
            shots: Some(shots),
            seed,
        }
    }

    fn compile(&self, params: &[f64]) -> Result<CompiledQrnn> {
        CompiledQrnn::new(self.config, &ParameterVector::new(params.to_vec())?)
    }

    fn readout(&self, p: f64, words: &[u64]) -> Result<f64> {
        match self.shots {
            None => Ok(p),
            Some(shots) => {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, words));
                sample_bernoulli_mean(p, shots, &mut rng)
            }
        }
    }
}

impl SequenceModel for QrnnModel {
    type Batch = PreparedBatch;

    fn param_count(&self) -> usize {
        self.config.param_count()
    }

    fn prepare(&self, inputs: &[Vec<f64>]) -> Result<PreparedBatch> {
        PreparedBatch::new(inputs)
    }

    fn outputs(&self, params: &[f64], batch: &PreparedBatch, stream: u64) -> Result<Vec<f64>> {
        let probs = self.compile(params)?.final_probs(batch);
        probs
            .into_iter()
            .enumerate()
            .map(|(i, p)| self.readout(p, &[stream, i as u64]))
            .collect()
    }

    fn shift_jacobian(&self, params: &[f64], batch: &PreparedBatch, stream: u64) -> Result<(Vec<Vec<f64>>, usize)> {
        let pv = ParameterVector::new(params.to_vec())?;
        let circuit = build_ansatz(&self.config.ansatz, &pv)?;
        let mut rules = vec![None; params.len()];
        for gate in circuit.gates() {
            let Some(slot) = gate.param_slot else { continue };
            let rule = gate
                .kind
                .shift_rule()
                .ok_or_else(|| Error::NoShiftRule(gate.kind.name().to_string()))?;
            if rules[slot].replace(rule).is_some() {
                return Err(Error::NoShiftRule(format!(
                    "parameter {slot} drives more than one gate per step"
                )));
            }
        }
        let base = CompiledQrnn::new(self.config, &pv)?;
        let run = base.base_run(batch);
        let jac = rules
            .par_iter()
            .enumerate()
            .map(|(j, rule)| {
                let rule = rule.ok_or_else(|| Error::NoShiftRule(format!("parameter {j} is unused")))?;
                let plus = CompiledQrnn::new(self.config, &pv.shifted(j, rule.shift))?;
                let minus = CompiledQrnn::new(self.config, &pv.shifted(j, -rule.shift))?;
                let pp = base.occurrence_shifted_probs(&plus, batch, &run);
                let pm = base.occurrence_shifted_probs(&minus, batch, &run);
                pp.iter()
                    .zip(&pm)
                    .enumerate()
                    .map(|(i, (a, b))| {
                        let mut total = 0.0;
                        for (t, (&x, &y)) in a.iter().zip(b).enumerate() {
                            let key = |sign| [stream, j as u64, i as u64, t as u64, sign];
                            total += self.readout(x, &key(0))? - self.readout(y, &key(1))?;
                        }
                        Ok(rule.factor * total)
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let readouts = (0..batch.len()).map(|i| 2 * params.len() * batch.window_len(i)).sum();
        Ok((jac, readouts))
    }

    fn is_stochastic(&self) -> bool {
        self.shots.is_some()
    }
}
