//! Loss, gradients, optimizers and the training loop.

mod fit;
mod grad;
mod loss;
mod model;
mod optim;

pub use fit::{fit, fit_qrnn, Checkpoint, EpochReport, TrainConfig, TrainingHistory};
pub use grad::{
    batch_loss, finite_difference, grad_finite_difference, grad_parameter_shift, model_gradient, GradMethod,
    Gradient,
};
pub use loss::{l2_loss, rescale_all};
pub use model::{derive_seed, QrnnModel, SequenceModel};
pub use optim::{
    adam_update, init_params, init_vector, sgd_update, AdamState, InitScheme, OptimizerKind, OptimizerState,
    ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON,
};
