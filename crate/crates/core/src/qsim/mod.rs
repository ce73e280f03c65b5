//! Dense statevector simulator for the small circuits used by the channel and
//! overlap constructions (at most a handful of qubits).
//!
//! Basis-state labels are written with qubit 0 as the leftmost character, which is
//! also the most significant bit of the amplitude index: in a 3-qubit register the
//! label `"100"` is index 4.

mod circuit;
mod measure;
mod state;

pub use circuit::{apply_gate, run_circuit, Circuit, Gate};
pub use measure::{
    born_probabilities, estimate_distribution, pauli_expectation, sample_counts,
    sample_multinomial, stream_rng, MeasurementRecord, PauliAxis, Shots,
};
pub use state::{reduced_density, DensityMatrix, StateVector};

/// Hermiticity and trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-12;
/// Eigenvalues above this negative threshold are treated as floating-point dust.
pub const EIGEN_FLOOR: f64 = -1e-10;

/// Bit mask of `qubit` inside an `n_qubits` register (qubit 0 is the most significant bit).
#[inline]
pub(crate) fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1usize << (n_qubits - 1 - qubit)
}
