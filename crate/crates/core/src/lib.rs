//! Quantum-kernel regression of non-Markovianity.
//!
//! The crate simulates non-Markovian amplitude-damping (AD) and phase-damping (PD)
//! channels with small ancilla circuits, labels each channel configuration with the
//! entanglement-revival measure of non-Markovianity, builds quantum-kernel Gram
//! matrices from four state-overlap circuits, and fits ε-SVR and kernel ridge
//! regressors on them.
//!
//! Module map:
//!
//! - [`qsim`]: dense statevector simulator, partial trace, seeded shot sampling.
//! - [`channels`]: decay laws p(t), Λ(t), control angles, channel circuits, Kraus oracle.
//! - [`nonmarkov`]: concurrence, Bell-pair entanglement trajectories, the 𝒩 label.
//! - [`kernels`]: overlap estimators, kernel functions, Gram-matrix assembly.
//! - [`ml`]: SMO-based ε-SVR, kernel ridge, RBF baseline, splits, grid-search CV, metrics.
//! - [`pipeline`]: configuration, dataset generation, end-to-end experiments, CSV outputs.
//!
//! Qubit ordering: qubit 0 is the leftmost character of a basis-state label and
//! the most significant bit of the amplitude index.

pub mod channels;
pub mod error;
pub mod kernels;
pub mod ml;
pub mod nonmarkov;
mod numfmt;
pub mod pipeline;
pub mod qsim;

pub use error::{Error, Result};
