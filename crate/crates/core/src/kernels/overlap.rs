//! State-overlap estimators.
//!
//! Every estimator takes two preparation circuits on a (system, environment) qubit
//! pair, with the system on qubit 0 as in [`build_channel_circuit`]. The θ-based
//! wrappers build those circuits from the channel angle.

use rand_chacha::ChaCha8Rng;

use crate::channels::{build_channel_circuit, ChannelKind, SYSTEM_QUBIT};
use crate::error::{Error, Result};
use crate::qsim::{
    estimate_distribution, reduced_density, run_circuit, stream_rng, Circuit, DensityMatrix,
    Gate, Shots,
};

use super::OverlapMethod;

/// Tr[ab].
pub fn overlap_oracle(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::contract(format!(
            "overlap of states with dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    // Tr[ab] = Σ_ij a_ij b_ji
    let (ea, eb) = (a.entries(), b.entries());
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            acc += ea[(i, j)] * eb[(j, i)];
        }
    }
    Ok(acc.re)
}

fn check_prep(prep: &Circuit) -> Result<()> {
    if prep.n_qubits() != 2 {
        return Err(Error::contract(format!(
            "preparation circuits act on (system, environment); got {} qubits",
            prep.n_qubits()
        )));
    }
    Ok(())
}

/// Swap test. Register: ancilla 0, (sys₁, env₁) = (1, 2), (sys₂, env₂) = (3, 4).
/// H(anc), CSWAP(anc; sys₁, sys₂), H(anc), measure anc: Tr[ρᵢρⱼ] = 2P₀ − 1.
pub fn swap_test_circuit(prep_i: &Circuit, prep_j: &Circuit) -> Result<Circuit> {
    check_prep(prep_i)?;
    check_prep(prep_j)?;
    let mut c = Circuit::new(5);
    c.append_mapped(prep_i, &[1, 2])?;
    c.append_mapped(prep_j, &[3, 4])?;
    c.push(Gate::H(0))?;
    c.push(Gate::CSwap { control: 0, a: 1, b: 3 })?;
    c.push(Gate::H(0))?;
    Ok(c)
}

pub fn swap_test_prepared(
    prep_i: &Circuit,
    prep_j: &Circuit,
    shots: Shots,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let psi = run_circuit(&swap_test_circuit(prep_i, prep_j)?);
    let dist = estimate_distribution(&psi, &[0], shots, rng)?;
    Ok(2.0 * dist[0] - 1.0)
}

/// Inversion test on the joint register: U(θⱼ) then U†(θᵢ), measured in the
/// computational basis; the estimate is P(00) = |⟨Ψᵢ|Ψⱼ⟩|².
pub fn inversion_test_circuit(prep_i: &Circuit, prep_j: &Circuit) -> Result<Circuit> {
    check_prep(prep_i)?;
    check_prep(prep_j)?;
    let mut c = Circuit::new(2);
    c.append_mapped(prep_j, &[0, 1])?;
    c.append_mapped(&prep_i.inverse(), &[0, 1])?;
    Ok(c)
}

pub fn inversion_test_prepared(
    prep_i: &Circuit,
    prep_j: &Circuit,
    shots: Shots,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let psi = run_circuit(&inversion_test_circuit(prep_i, prep_j)?);
    let dist = estimate_distribution(&psi, &[0, 1], shots, rng)?;
    Ok(dist[0])
}

/// Ancilla-based overlap circuit. Register: (sys₁, env₁) = (0, 1), (sys₂, env₂) = (2, 3),
/// ancilla 4.
///
/// CNOT(sys₁→anc) and CNOT(sys₂→anc) copy the Z⊗Z parity of the two systems into the
/// ancilla; U = T†H on each system then maps the X⊗X parity onto the Z readout of the
/// system pair (T† is diagonal, so it leaves Z-basis statistics of H|·⟩ unchanged).
/// With x = ⟨X⊗X⟩ and z = ⟨Z⊗Z⟩ outcomes, Y⊗Y = −(X⊗X)(Z⊗Z), so the SWAP eigenvalue
/// (1 + x + z − xz)/2 is −1 exactly when both parities are odd.
pub fn aba_circuit(prep_i: &Circuit, prep_j: &Circuit) -> Result<Circuit> {
    check_prep(prep_i)?;
    check_prep(prep_j)?;
    let mut c = Circuit::new(5);
    c.append_mapped(prep_i, &[0, 1])?;
    c.append_mapped(prep_j, &[2, 3])?;
    c.push(Gate::Cnot { control: 0, target: 4 })?;
    c.push(Gate::Cnot { control: 2, target: 4 })?;
    for q in [0, 2] {
        c.push(Gate::H(q))?;
        c.push(Gate::Tdg(q))?;
    }
    Ok(c)
}

pub fn aba_prepared(
    prep_i: &Circuit,
    prep_j: &Circuit,
    shots: Shots,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let psi = run_circuit(&aba_circuit(prep_i, prep_j)?);
    // Outcome bits: (sys₁, sys₂, anc).
    let dist = estimate_distribution(&psi, &[0, 2, 4], shots, rng)?;
    Ok(dist
        .iter()
        .enumerate()
        .map(|(outcome, p)| {
            let xx_odd = ((outcome >> 2) ^ (outcome >> 1)) & 1 == 1;
            let zz_odd = outcome & 1 == 1;
            if xx_odd && zz_odd {
                -p
            } else {
                *p
            }
        })
        .sum())
}

/// Bell-basis overlap circuit. Register: (sys₁, env₁) = (0, 1), (sys₂, env₂) = (2, 3).
/// CNOT(sys₁→sys₂), H(sys₁), measure both systems; outcome "11" is the singlet.
pub fn bba_circuit(prep_i: &Circuit, prep_j: &Circuit) -> Result<Circuit> {
    check_prep(prep_i)?;
    check_prep(prep_j)?;
    let mut c = Circuit::new(4);
    c.append_mapped(prep_i, &[0, 1])?;
    c.append_mapped(prep_j, &[2, 3])?;
    c.push(Gate::Cnot { control: 0, target: 2 })?;
    c.push(Gate::H(0))?;
    Ok(c)
}

pub fn bba_prepared(
    prep_i: &Circuit,
    prep_j: &Circuit,
    shots: Shots,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let psi = run_circuit(&bba_circuit(prep_i, prep_j)?);
    let dist = estimate_distribution(&psi, &[0, 2], shots, rng)?;
    // ⟨SWAP⟩ = P(00) + P(01) + P(10) − P(11).
    Ok(dist[0] + dist[1] + dist[2] - dist[3])
}

/// Exact reference for `method`: |⟨Ψᵢ|Ψⱼ⟩|² for the inversion test, Tr[ρᵢρⱼ] of the
/// system marginals otherwise.
pub fn reference_overlap(method: OverlapMethod, prep_i: &Circuit, prep_j: &Circuit) -> Result<f64> {
    check_prep(prep_i)?;
    check_prep(prep_j)?;
    let psi_i = run_circuit(prep_i);
    let psi_j = run_circuit(prep_j);
    match method {
        OverlapMethod::InversionTest => Ok(psi_i.inner(&psi_j)?.norm_sqr()),
        _ => overlap_oracle(
            &reduced_density(&psi_i, &[SYSTEM_QUBIT])?,
            &reduced_density(&psi_j, &[SYSTEM_QUBIT])?,
        ),
    }
}

/// Dispatches to the estimator for `method`. `ExactOracle` ignores `shots`.
pub fn estimate_prepared(
    method: OverlapMethod,
    prep_i: &Circuit,
    prep_j: &Circuit,
    shots: Shots,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    match method {
        OverlapMethod::SwapTest => swap_test_prepared(prep_i, prep_j, shots, rng),
        OverlapMethod::InversionTest => inversion_test_prepared(prep_i, prep_j, shots, rng),
        OverlapMethod::AncillaBased => aba_prepared(prep_i, prep_j, shots, rng),
        OverlapMethod::BellBasis => bba_prepared(prep_i, prep_j, shots, rng),
        OverlapMethod::ExactOracle => reference_overlap(method, prep_i, prep_j),
    }
}

fn with_channels<F>(theta_i: f64, theta_j: f64, kind: ChannelKind, f: F) -> Result<f64>
where
    F: FnOnce(&Circuit, &Circuit) -> Result<f64>,
{
    let prep_i = build_channel_circuit(kind, theta_i)?;
    let prep_j = build_channel_circuit(kind, theta_j)?;
    f(&prep_i, &prep_j)
}

pub fn swap_test(theta_i: f64, theta_j: f64, kind: ChannelKind, shots: Shots, seed: u64) -> Result<f64> {
    with_channels(theta_i, theta_j, kind, |a, b| {
        swap_test_prepared(a, b, shots, &mut stream_rng(seed, 0))
    })
}

pub fn inversion_test(
    theta_i: f64,
    theta_j: f64,
    kind: ChannelKind,
    shots: Shots,
    seed: u64,
) -> Result<f64> {
    with_channels(theta_i, theta_j, kind, |a, b| {
        inversion_test_prepared(a, b, shots, &mut stream_rng(seed, 0))
    })
}

pub fn aba_overlap(theta_i: f64, theta_j: f64, kind: ChannelKind, shots: Shots, seed: u64) -> Result<f64> {
    with_channels(theta_i, theta_j, kind, |a, b| {
        aba_prepared(a, b, shots, &mut stream_rng(seed, 0))
    })
}

pub fn bba_overlap(theta_i: f64, theta_j: f64, kind: ChannelKind, shots: Shots, seed: u64) -> Result<f64> {
    with_channels(theta_i, theta_j, kind, |a, b| {
        bba_prepared(a, b, shots, &mut stream_rng(seed, 0))
    })
}
