//! Dense simulation primitives: pure states, density matrices, and the gate
//! kernels that act on them.

mod density;
pub mod kernel;
mod matrix;
mod state;

pub use density::{
    sample_bernoulli_mean, DensityMatrix, NORM_TOLERANCE, SYMMETRIZE_INTERVAL, UNITARY_TOLERANCE,
};
pub use matrix::SquareMatrix;
pub use num_complex::Complex64;
pub use state::StateVector;

#[cfg(test)]
mod tests;
