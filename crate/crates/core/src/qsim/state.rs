use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{qubit_mask, DENSITY_TOL, EIGEN_FLOOR};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Pure state of `n_qubits` qubits as 2ⁿ complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Wraps explicit amplitudes. The length must be a power of two and the norm 1 within 1e-12.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::contract(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > DENSITY_TOL {
            return Err(Error::contract(format!(
                "state is not normalized: squared norm {norm_sq}"
            )));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Computational basis state from a label such as `"01"`.
    pub fn basis(label: &str) -> Result<Self> {
        let n_qubits = label.len();
        let index = usize::from_str_radix(label, 2)
            .map_err(|_| Error::contract(format!("invalid basis label {label:?}")))?;
        let mut state = Self::zero(n_qubits);
        state.amplitudes[0] = ZERO;
        state.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::contract("inner product of states with different qubit counts"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        }
    }
}

/// Mixed state: Hermitian, unit-trace, positive semidefinite 2ⁿ×2ⁿ matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace (1e-12) and eigenvalues ≥ −1e-10.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(entries)?;
        rho.check_hermitian_unit_trace()?;
        let min_eig = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < EIGEN_FLOOR {
            return Err(Error::contract(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(entries: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows == 0 || !rows.is_power_of_two() {
            return Err(Error::contract(format!(
                "density matrix must be square with power-of-two dimension, got {rows}x{cols}"
            )));
        }
        Ok(Self {
            n_qubits: rows.trailing_zeros() as usize,
            entries,
        })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let entries = DMatrix::from_fn(dim, dim, |i, j| amps[i] * amps[j].conj());
        Self {
            n_qubits: state.n_qubits(),
            entries,
        }
    }

    /// I / 2ⁿ.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let entries =
            DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0));
        Self { n_qubits, entries }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Tr[ρ²].
    pub fn purity(&self) -> f64 {
        // Tr[ρρ] = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ.
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Maximum entrywise deviation |ρ_ij − σ_ij|.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_hermitian_unit_trace(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                let dev = (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm();
                if dev > DENSITY_TOL {
                    return Err(Error::contract(format!(
                        "density matrix not Hermitian at ({i},{j}): deviation {dev:e}"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::contract(format!("density matrix trace is {tr}")));
        }
        Ok(())
    }
}

/// Partial trace of `|ψ⟩⟨ψ|` over every qubit not listed in `keep`.
///
/// The kept qubits appear in the order given: `keep[0]` becomes qubit 0 of the result.
pub fn reduced_density(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.n_qubits();
    if keep.is_empty() {
        return Err(Error::contract("reduced_density: keep set is empty"));
    }
    let mut seen = vec![false; n];
    for &q in keep {
        if q >= n {
            return Err(Error::contract(format!(
                "reduced_density: qubit {q} out of range for {n} qubits"
            )));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::contract(format!("reduced_density: qubit {q} listed twice")));
        }
    }
    let traced: Vec<usize> = (0..n).filter(|q| !seen[*q]).collect();

    let dk = 1usize << keep.len();
    let de = 1usize << traced.len();
    let keep_masks: Vec<usize> = keep.iter().map(|&q| qubit_mask(n, q)).collect();
    let traced_masks: Vec<usize> = traced.iter().map(|&q| qubit_mask(n, q)).collect();

    // Reshape ψ into a dk × de matrix Ψ, so that ρ_keep = Ψ Ψ†.
    let mut psi = DMatrix::<Complex64>::zeros(dk, de);
    for (index, amp) in state.amplitudes().iter().enumerate() {
        let k = pack_bits(index, &keep_masks);
        let e = pack_bits(index, &traced_masks);
        psi[(k, e)] = *amp;
    }
    let entries = &psi * psi.adjoint();
    DensityMatrix::from_matrix_unchecked(entries)
}

/// Gathers the bits selected by `masks` (most significant first) into a compact index.
fn pack_bits(index: usize, masks: &[usize]) -> usize {
    masks
        .iter()
        .fold(0, |acc, &m| (acc << 1) | usize::from(index & m != 0))
}
