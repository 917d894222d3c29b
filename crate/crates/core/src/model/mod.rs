//! The quantum recurrent block and the plain / staggered networks built
//! from it.

mod block;
mod compiled;
mod config;

pub use block::{forward, qrb_step, rescale_prediction, DenseQrnn, ForwardTrace, Readout};
pub use compiled::{BaseRun, CompiledQrnn, PreparedBatch, StepMaps};
pub use config::{role_schedule, Architecture, ModelConfig, Roles, DEFAULT_QUBIT_CAP};
