//! Quantum recurrent neural networks on a dense density-matrix simulator.

pub mod circuit;
pub mod data;
pub mod eval;
pub mod experiment;
mod error;
pub mod model;
pub mod sim;
pub mod train;

pub use error::{Error, Result};
