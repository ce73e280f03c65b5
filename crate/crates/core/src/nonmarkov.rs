//! Degree of non-Markovianity from entanglement revivals.
//!
//! One half of the Bell pair (|00⟩+|11⟩)/√2 is sent through the channel while the
//! other half stays isolated; 𝒩 accumulates every increase of the pair's
//! concurrence along the trajectory. Bell-state input is the optimal initial state,
//! so no maximization is performed here.

use std::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_kraus_on, kraus_set, ChannelParams};
use crate::error::{Error, Result};
use crate::qsim::{DensityMatrix, StateVector, EIGEN_FLOOR};

/// Wootters concurrence of a two-qubit state.
///
/// With ρ = WW† (W = V·diag(√pᵢ) from the spectral decomposition), the square roots of
/// the eigenvalues of ρρ̃ are the singular values of the symmetric matrix Wᵀ(σ_y⊗σ_y)W.
/// Unlike the eigenvalues of ρρ̃, these carry only first-order rounding error on
/// rank-deficient states.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::contract(format!(
            "concurrence needs a two-qubit state, got {} qubits",
            rho.n_qubits()
        )));
    }
    let eig = SymmetricEigen::new(rho.entries().clone());
    let w = DMatrix::from_fn(4, 4, |i, k| {
        eig.eigenvectors[(i, k)] * clamp_dust(eig.eigenvalues[k]).sqrt()
    });
    let tau = w.transpose() * spin_flip_operator() * &w;
    let mut roots: Vec<f64> = tau.singular_values().iter().copied().collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    let c = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(c.clamp(0.0, 1.0))
}

fn clamp_dust(ev: f64) -> f64 {
    if (EIGEN_FLOOR..0.0).contains(&ev) {
        0.0
    } else {
        ev.max(0.0)
    }
}

/// σ_y⊗σ_y: −1 on |00⟩↔|11⟩, +1 on |01⟩↔|10⟩.
fn spin_flip_operator() -> DMatrix<Complex64> {
    DMatrix::from_fn(4, 4, |i, j| {
        let v = match (i, j) {
            (0, 3) | (3, 0) => -1.0,
            (1, 2) | (2, 1) => 1.0,
            _ => 0.0,
        };
        Complex64::new(v, 0.0)
    })
}

/// Concurrence sampled along a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementTrajectory {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl EntanglementTrajectory {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::contract("trajectory times and values differ in length"));
        }
        if times.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater)) {
            return Err(Error::contract("trajectory times must be strictly increasing"));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::contract("concurrence values must lie in [0, 1]"));
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Degree of non-Markovianity 𝒩 ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NMLabel(f64);

impl NMLabel {
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Uniform grid on [0, horizon · time scale] where the time scale is 1/γ₀ (AD) or τ (PD).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub points: usize,
    pub horizon: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            points: 2000,
            horizon: 20.0,
        }
    }
}

impl TimeGrid {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::config("time grid needs at least 2 points"));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::config("time grid horizon must be positive"));
        }
        Ok(())
    }

    pub fn times_for(&self, params: &ChannelParams) -> Result<Vec<f64>> {
        self.validate()?;
        let end = self.horizon * params.time_scale();
        let step = end / (self.points - 1) as f64;
        Ok((0..self.points).map(|k| k as f64 * step).collect())
    }
}

fn bell_state() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let psi = StateVector::from_amplitudes(vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)])
        .expect("Bell state is normalized");
    DensityMatrix::from_pure(&psi)
}

/// Concurrence of (I ⊗ Φ_t)(|Φ⁺⟩⟨Φ⁺|) at each time in `times`. The parameters'
/// own `t` is ignored.
pub fn entanglement_trajectory(
    params: &ChannelParams,
    times: &[f64],
) -> Result<EntanglementTrajectory> {
    if times.is_empty() {
        return Err(Error::contract("trajectory grid is empty"));
    }
    if times.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater)) || times[0] < 0.0 {
        return Err(Error::contract(
            "trajectory grid must be non-negative and strictly increasing",
        ));
    }
    let bell = bell_state();
    let kind = params.kind();
    let values = times
        .par_iter()
        .map(|&t| {
            let decay = params.at(t)?.decay()?;
            let rho = apply_kraus_on(&bell, &kraus_set(kind, decay)?, 1)?;
            concurrence(&rho)
        })
        .collect::<Result<Vec<f64>>>()?;
    EntanglementTrajectory::new(times.to_vec(), values)
}

/// 𝒩 = Σₖ max(0, E(t_{k+1}) − E(t_k)): the discrete integral of dE/dt over the
/// region where it is positive.
pub fn nm_degree(trajectory: &EntanglementTrajectory) -> NMLabel {
    NMLabel(
        trajectory
            .values
            .windows(2)
            .map(|w| (w[1] - w[0]).max(0.0))
            .sum(),
    )
}

/// Computes the label for one channel configuration on `grid`.
pub fn nm_label(params: &ChannelParams, grid: &TimeGrid) -> Result<NMLabel> {
    let times = grid.times_for(params)?;
    Ok(nm_degree(&entanglement_trajectory(params, &times)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{ADParams, PDParams};
    use approx::assert_abs_diff_eq;

    fn werner(p: f64) -> DensityMatrix {
        let bell = bell_state().into_entries();
        let mixed = DensityMatrix::maximally_mixed(2).into_entries();
        let m = bell * Complex64::new(p, 0.0) + mixed * Complex64::new(1.0 - p, 0.0);
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn bell_and_product_extremes() {
        assert_abs_diff_eq!(concurrence(&bell_state()).unwrap(), 1.0, epsilon = 1e-12);
        let prod = DensityMatrix::from_pure(&StateVector::zero(2));
        assert_abs_diff_eq!(concurrence(&prod).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn werner_states() {
        // Closed form max(0, (3p−1)/2), checked against the general eigenvalue route.
        for p in [0.0, 0.4, 0.8, 1.0] {
            let expected = ((3.0 * p - 1.0) / 2.0f64).max(0.0);
            assert_abs_diff_eq!(concurrence(&werner(p)).unwrap(), expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn wrong_dimension_rejected() {
        assert!(concurrence(&DensityMatrix::maximally_mixed(1)).is_err());
    }

    #[test]
    fn trajectory_starts_maximally_entangled() {
        let ad = ChannelParams::Ad(ADParams::new(1.0, 1.0, 0.0).unwrap());
        let pd = ChannelParams::Pd(PDParams::new(1.0, 1.0, 0.0).unwrap());
        for params in [ad, pd] {
            let traj = entanglement_trajectory(&params, &[0.0, 0.5]).unwrap();
            assert_abs_diff_eq!(traj.values()[0], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn invalid_grids_rejected() {
        let ad = ChannelParams::Ad(ADParams::new(1.0, 1.0, 0.0).unwrap());
        assert!(entanglement_trajectory(&ad, &[]).is_err());
        assert!(entanglement_trajectory(&ad, &[0.0, 0.0]).is_err());
        assert!(entanglement_trajectory(&ad, &[1.0, 0.5]).is_err());
        assert!(TimeGrid { points: 1, horizon: 1.0 }.times_for(&ad).is_err());
    }

    #[test]
    fn nm_degree_sums_increments() {
        let traj = EntanglementTrajectory::new(vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 0.5, 0.7, 0.2]).unwrap();
        assert_abs_diff_eq!(nm_degree(&traj).value(), 0.2, epsilon = 1e-15);
        let mono = EntanglementTrajectory::new(vec![0.0, 1.0, 2.0], vec![1.0, 0.6, 0.1]).unwrap();
        assert_eq!(nm_degree(&mono).value(), 0.0);
    }

    #[test]
    fn ad_markovian_trajectory_is_monotone() {
        let params = ChannelParams::Ad(ADParams::new(10.0, 1.0, 0.0).unwrap());
        let times = TimeGrid::default().times_for(&params).unwrap();
        let traj = entanglement_trajectory(&params, &times).unwrap();
        assert!(traj.values().windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn pd_non_markovian_trajectory_revives() {
        let params = ChannelParams::Pd(PDParams::new(1.0, 1.0, 0.0).unwrap());
        let times = TimeGrid::default().times_for(&params).unwrap();
        let traj = entanglement_trajectory(&params, &times).unwrap();
        assert!(traj.values().windows(2).any(|w| w[1] > w[0] + 1e-6));
    }
}
