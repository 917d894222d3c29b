//! Gate definitions, the angle encoder, and the hardware-efficient ansatz.

mod builders;
mod gate;
mod program;

pub use builders::{
    build_ansatz, build_encoder, entangler_pairs, param_count, rescale_to_angle,
    rzz_decomposition, AnsatzSpec, EntanglerConfig, EntanglerLayout, ParameterVector,
};
pub use gate::{gate_matrix, Gate, GateKind, ShiftRule};
pub use program::Circuit;

#[cfg(test)]
mod tests;
