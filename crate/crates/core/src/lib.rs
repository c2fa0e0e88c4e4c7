//! Optimized Rayleigh–Ritz ground states of two coupled quartic oscillators
//! at arbitrary precision.

pub mod basis;
pub mod bench;
pub mod collocation;
mod error;
pub mod hamiltonian;
pub mod numerics;
pub mod optimizer;

pub use error::{Error, Result};
