//! Non-Markovian amplitude-damping (AD) and phase-damping (PD) channels.
//!
//! Each channel is described three ways: the closed-form decay law (p(t) for AD,
//! Λ(t) for PD), a two-qubit system+environment circuit driven by the control
//! angle derived from that decay, and the Kraus operators of the reduced dynamics.
//! The Kraus form is the reference; the circuit is what the kernels consume.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{Circuit, DensityMatrix, Gate};

/// Qubit carrying the system state in every channel circuit.
pub const SYSTEM_QUBIT: usize = 0;
/// Environment ancilla qubit in every channel circuit.
pub const ENV_QUBIT: usize = 1;

/// Overshoot outside [0,1] (AD) or [−1,1] (PD) that is treated as rounding and clamped.
const RANGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    #[serde(rename = "ad")]
    AmplitudeDamping,
    #[serde(rename = "pd")]
    PhaseDamping,
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelKind::AmplitudeDamping => "ad",
            ChannelKind::PhaseDamping => "pd",
        })
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ad" | "amplitude-damping" => Ok(ChannelKind::AmplitudeDamping),
            "pd" | "phase-damping" => Ok(ChannelKind::PhaseDamping),
            other => Err(Error::config(format!("unknown channel kind {other:?}"))),
        }
    }
}

/// Amplitude damping with a Lorentzian bath: spectral width `lambda`, coupling `gamma0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ADParams {
    pub lambda: f64,
    pub gamma0: f64,
    pub t: f64,
}

impl ADParams {
    pub fn new(lambda: f64, gamma0: f64, t: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::config(format!("AD: lambda must be positive, got {lambda}")));
        }
        if !(gamma0 > 0.0 && gamma0.is_finite()) {
            return Err(Error::config(format!("AD: gamma0 must be positive, got {gamma0}")));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::config(format!("AD: time must be non-negative, got {t}")));
        }
        Ok(Self { lambda, gamma0, t })
    }

    pub fn at(self, t: f64) -> Result<Self> {
        Self::new(self.lambda, self.gamma0, t)
    }

    /// Markovian iff λ ≥ 2γ₀.
    pub fn is_markovian(&self) -> bool {
        self.lambda >= 2.0 * self.gamma0
    }
}

/// Phase damping driven by random telegraph noise: coupling `alpha`, flip time `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PDParams {
    pub alpha: f64,
    pub tau: f64,
    pub t: f64,
}

impl PDParams {
    pub fn new(alpha: f64, tau: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::config(format!("PD: alpha must be positive, got {alpha}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::config(format!("PD: tau must be positive, got {tau}")));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::config(format!("PD: time must be non-negative, got {t}")));
        }
        Ok(Self { alpha, tau, t })
    }

    pub fn at(self, t: f64) -> Result<Self> {
        Self::new(self.alpha, self.tau, t)
    }

    /// Markovian iff ατ ≤ 1/4.
    pub fn is_markovian(&self) -> bool {
        self.alpha * self.tau <= 0.25
    }
}

/// Parameters of either channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelParams {
    Ad(ADParams),
    Pd(PDParams),
}

impl ChannelParams {
    pub fn kind(&self) -> ChannelKind {
        match self {
            ChannelParams::Ad(_) => ChannelKind::AmplitudeDamping,
            ChannelParams::Pd(_) => ChannelKind::PhaseDamping,
        }
    }

    pub fn t(&self) -> f64 {
        match self {
            ChannelParams::Ad(p) => p.t,
            ChannelParams::Pd(p) => p.t,
        }
    }

    pub fn at(self, t: f64) -> Result<Self> {
        Ok(match self {
            ChannelParams::Ad(p) => ChannelParams::Ad(p.at(t)?),
            ChannelParams::Pd(p) => ChannelParams::Pd(p.at(t)?),
        })
    }

    /// p(t) for AD, Λ(t) for PD.
    pub fn decay(&self) -> Result<f64> {
        match self {
            ChannelParams::Ad(p) => ad_decay(p),
            ChannelParams::Pd(p) => pd_decay(p),
        }
    }

    /// Control angle of the channel circuit at the parameters' time.
    pub fn theta(&self) -> Result<f64> {
        theta_for(self.kind(), self.decay()?)
    }

    /// Characteristic time: 1/γ₀ for AD, τ for PD.
    pub fn time_scale(&self) -> f64 {
        match self {
            ChannelParams::Ad(p) => 1.0 / p.gamma0,
            ChannelParams::Pd(p) => p.tau,
        }
    }

    pub fn is_markovian(&self) -> bool {
        match self {
            ChannelParams::Ad(p) => p.is_markovian(),
            ChannelParams::Pd(p) => p.is_markovian(),
        }
    }
}

/// sinh(x)/x, with a series near zero.
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

/// sin(x)/x, with a series near zero.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Sign of a discriminant, kept as an explicit branch rather than complex arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Hyperbolic,
    Degenerate,
    Oscillatory,
}

impl Branch {
    fn of(discriminant: f64) -> Self {
        if discriminant > 0.0 {
            Branch::Hyperbolic
        } else if discriminant < 0.0 {
            Branch::Oscillatory
        } else {
            Branch::Degenerate
        }
    }
}

/// e^{−s}[c(x) + s·sc(x)], where (c, sc) = (cosh, sinhc) or (cos, sinc) by branch
/// and x = |root|·s. Both decay laws reduce to this form.
fn relaxation(s: f64, x: f64, branch: Branch) -> f64 {
    match branch {
        Branch::Degenerate => (-s).exp() * (1.0 + s),
        Branch::Oscillatory => (-s).exp() * (x.cos() + s * sinc(x)),
        Branch::Hyperbolic if x < 20.0 => (-s).exp() * (x.cosh() + s * sinhc(x)),
        Branch::Hyperbolic => {
            // x ≤ s always; expanded to avoid cosh overflow at long times.
            let r = s / x;
            0.5 * ((1.0 + r) * (x - s).exp() + (1.0 - r) * (-x - s).exp())
        }
    }
}

fn clamp_range(value: f64, lo: f64, hi: f64, what: &str) -> Result<f64> {
    if value < lo - RANGE_SLACK || value > hi + RANGE_SLACK || value.is_nan() {
        return Err(Error::contract(format!(
            "{what} = {value} lies outside [{lo}, {hi}]"
        )));
    }
    Ok(value.clamp(lo, hi))
}

/// Excited-state survival p(t) = e^{−λt}[(λ/d) sinh(dt/2) + cosh(dt/2)]², d = √(λ² − 2γ₀λ).
///
/// For λ < 2γ₀ the root d is imaginary and the hyperbolic functions become
/// trigonometric; at λ = 2γ₀ the limit e^{−λt}(1 + λt/2)² is used.
pub fn ad_decay(params: &ADParams) -> Result<f64> {
    let ADParams { lambda, gamma0, t } = *params;
    let discriminant = lambda * (lambda - 2.0 * gamma0);
    let s = lambda * t / 2.0;
    let x = discriminant.abs().sqrt() * t / 2.0;
    let amplitude = relaxation(s, x, Branch::of(discriminant));
    clamp_range(amplitude * amplitude, 0.0, 1.0, "p(t)")
}

/// Coherence factor Λ(t) = e^{−t/2τ}[cos(μt/2τ) + (1/μ) sin(μt/2τ)], μ = √((4ατ)² − 1).
///
/// For ατ < 1/4 μ is imaginary (hyperbolic branch); at ατ = 1/4 the limit
/// e^{−t/2τ}(1 + t/2τ) is used.
pub fn pd_decay(params: &PDParams) -> Result<f64> {
    let PDParams { alpha, tau, t } = *params;
    let four_at = 4.0 * alpha * tau;
    // Branches are swapped relative to AD: a positive μ² oscillates.
    let mu_sq = four_at * four_at - 1.0;
    let s = t / (2.0 * tau);
    let x = mu_sq.abs().sqrt() * s;
    let branch = match Branch::of(mu_sq) {
        Branch::Hyperbolic => Branch::Oscillatory,
        Branch::Oscillatory => Branch::Hyperbolic,
        Branch::Degenerate => Branch::Degenerate,
    };
    clamp_range(relaxation(s, x, branch), -1.0, 1.0, "Lambda(t)")
}

/// θ_a = 2 arccos(√p).
pub fn theta_ad(p: f64) -> Result<f64> {
    let p = clamp_range(p, 0.0, 1.0, "p")?;
    Ok(2.0 * p.sqrt().acos())
}

/// θ_p = 2 arccos(Λ).
pub fn theta_pd(lambda: f64) -> Result<f64> {
    let lambda = clamp_range(lambda, -1.0, 1.0, "Lambda")?;
    Ok(2.0 * lambda.acos())
}

pub fn theta_for(kind: ChannelKind, decay: f64) -> Result<f64> {
    match kind {
        ChannelKind::AmplitudeDamping => theta_ad(decay),
        ChannelKind::PhaseDamping => theta_pd(decay),
    }
}

/// Inverse of [`theta_for`]: p = cos²(θ/2) for AD, Λ = cos(θ/2) for PD.
pub fn decay_from_theta(kind: ChannelKind, theta: f64) -> f64 {
    let c = (theta / 2.0).cos();
    match kind {
        ChannelKind::AmplitudeDamping => c * c,
        ChannelKind::PhaseDamping => c,
    }
}

/// Two-qubit channel circuit (system = qubit 0, environment = qubit 1).
///
/// AD: H(sys), CRy(θ) sys→env, CNOT env→sys. PD: H(sys), CRy(θ) sys→env.
pub fn build_channel_circuit(kind: ChannelKind, theta: f64) -> Result<Circuit> {
    let mut circuit = Circuit::new(2);
    circuit.push(Gate::H(SYSTEM_QUBIT))?;
    circuit.push(Gate::CRy {
        control: SYSTEM_QUBIT,
        target: ENV_QUBIT,
        theta,
    })?;
    if kind == ChannelKind::AmplitudeDamping {
        circuit.push(Gate::Cnot {
            control: ENV_QUBIT,
            target: SYSTEM_QUBIT,
        })?;
    }
    Ok(circuit)
}

/// Single-qubit Kraus operators {M₀, M₁}.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<Matrix2<Complex64>>,
}

impl KrausSet {
    /// Checks Σ Mᵢ†Mᵢ = I within 1e-12.
    pub fn new(operators: Vec<Matrix2<Complex64>>) -> Result<Self> {
        let set = Self { operators };
        let dev = set.completeness_error();
        if dev > 1e-12 {
            return Err(Error::contract(format!(
                "Kraus operators are not complete: deviation {dev:e}"
            )));
        }
        Ok(set)
    }

    pub fn identity() -> Self {
        Self {
            operators: vec![Matrix2::identity()],
        }
    }

    pub fn operators(&self) -> &[Matrix2<Complex64>] {
        &self.operators
    }

    /// max |(Σ Mᵢ†Mᵢ − I)_jk|.
    pub fn completeness_error(&self) -> f64 {
        let sum: Matrix2<Complex64> = self
            .operators
            .iter()
            .map(|m| m.adjoint() * m)
            .fold(Matrix2::zeros(), |acc, x| acc + x);
        (sum - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// AD: M₀ = |0⟩⟨0| + √p|1⟩⟨1|, M₁ = √(1−p)|0⟩⟨1|.
/// PD: M₀ = √((1+Λ)/2) I, M₁ = √((1−Λ)/2) σ_z.
pub fn kraus_set(kind: ChannelKind, decay: f64) -> Result<KrausSet> {
    let operators = match kind {
        ChannelKind::AmplitudeDamping => {
            let p = clamp_range(decay, 0.0, 1.0, "p")?;
            vec![
                Matrix2::new(c(1.0), c(0.0), c(0.0), c(p.sqrt())),
                Matrix2::new(c(0.0), c((1.0 - p).sqrt()), c(0.0), c(0.0)),
            ]
        }
        ChannelKind::PhaseDamping => {
            let l = clamp_range(decay, -1.0, 1.0, "Lambda")?;
            let a = ((1.0 + l) / 2.0).sqrt();
            let b = ((1.0 - l) / 2.0).sqrt();
            vec![
                Matrix2::new(c(a), c(0.0), c(0.0), c(a)),
                Matrix2::new(c(b), c(0.0), c(0.0), c(-b)),
            ]
        }
    };
    KrausSet::new(operators)
}

/// ρ ↦ Σ Mᵢ ρ Mᵢ† on a single-qubit state.
pub fn apply_kraus(rho: &DensityMatrix, kraus: &KrausSet) -> Result<DensityMatrix> {
    if rho.n_qubits() != 1 {
        return Err(Error::contract(format!(
            "apply_kraus: expected a single-qubit state, got {} qubits",
            rho.n_qubits()
        )));
    }
    apply_kraus_on(rho, kraus, 0)
}

/// Applies the channel to `qubit` of a multi-qubit state (identity elsewhere).
pub fn apply_kraus_on(rho: &DensityMatrix, kraus: &KrausSet, qubit: usize) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if qubit >= n {
        return Err(Error::contract(format!(
            "apply_kraus: qubit {qubit} out of range for {n} qubits"
        )));
    }
    let left = DMatrix::<Complex64>::identity(1 << qubit, 1 << qubit);
    let right = DMatrix::<Complex64>::identity(1 << (n - 1 - qubit), 1 << (n - 1 - qubit));
    let dim = rho.dim();
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for m in kraus.operators() {
        let local = DMatrix::from_iterator(2, 2, m.iter().copied());
        let full = left.kronecker(&local).kronecker(&right);
        out += &full * rho.entries() * full.adjoint();
    }
    DensityMatrix::from_matrix_unchecked(out)
}

/// Maximum allowed θ for a channel kind: π for AD, 2π for PD.
pub fn theta_upper(kind: ChannelKind) -> f64 {
    match kind {
        ChannelKind::AmplitudeDamping => PI,
        ChannelKind::PhaseDamping => 2.0 * PI,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{reduced_density, run_circuit, StateVector};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn plus() -> DensityMatrix {
        let mut c = Circuit::new(1);
        c.push(Gate::H(0)).unwrap();
        DensityMatrix::from_pure(&run_circuit(&c))
    }

    fn system_state(kind: ChannelKind, theta: f64) -> DensityMatrix {
        let psi = run_circuit(&build_channel_circuit(kind, theta).unwrap());
        reduced_density(&psi, &[SYSTEM_QUBIT]).unwrap()
    }

    #[test]
    fn decay_is_one_at_time_zero() {
        assert_eq!(ad_decay(&ADParams::new(3.0, 1.0, 0.0).unwrap()).unwrap(), 1.0);
        assert_eq!(ad_decay(&ADParams::new(0.5, 1.0, 0.0).unwrap()).unwrap(), 1.0);
        assert_eq!(pd_decay(&PDParams::new(1.0, 1.0, 0.0).unwrap()).unwrap(), 1.0);
        assert_eq!(pd_decay(&PDParams::new(0.1, 1.0, 0.0).unwrap()).unwrap(), 1.0);
    }

    // Reference values below come from 40-digit mpmath evaluations of the closed forms.
    #[test]
    fn ad_real_branch_value() {
        let p = ad_decay(&ADParams::new(3.0, 1.0, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(p, 0.476_507_778_091_944_18, epsilon = 1e-14);
    }

    #[test]
    fn ad_oscillatory_branch_value_and_zero() {
        let p = ad_decay(&ADParams::new(1.0, 1.0, 2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(p, 0.258_395_308_042_389_4, epsilon = 1e-14);
        // First zero of (λ/|d|) sin(|d|t/2) + cos(|d|t/2) for λ = γ₀ = 1 is t = 3π/2.
        let t0 = 4.712_388_980_384_69;
        let p0 = ad_decay(&ADParams::new(1.0, 1.0, t0).unwrap()).unwrap();
        assert!(p0 < 1e-20);
        let before = ad_decay(&ADParams::new(1.0, 1.0, t0 - 0.3).unwrap()).unwrap();
        let after = ad_decay(&ADParams::new(1.0, 1.0, t0 + 0.3).unwrap()).unwrap();
        assert!(before > 1e-4 && after > 1e-4);
    }

    #[test]
    fn ad_degenerate_point() {
        let p = ad_decay(&ADParams::new(2.0, 1.0, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(p, 0.541_341_132_946_450_8, epsilon = 1e-14);
    }

    #[test]
    fn pd_values() {
        let l = pd_decay(&PDParams::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(l, -0.070_644_550_919_464_03, epsilon = 1e-14);
        let l = pd_decay(&PDParams::new(0.1, 1.0, 2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(l, 0.955_101_350_911_172_3, epsilon = 1e-14);
        // ατ = 1/4: e^{−t/2τ}(1 + t/2τ).
        let l = pd_decay(&PDParams::new(0.125, 2.0, 3.0).unwrap()).unwrap();
        let s: f64 = 3.0 / 4.0;
        assert_abs_diff_eq!(l, (-s).exp() * (1.0 + s), epsilon = 1e-15);
    }

    #[test]
    fn long_times_do_not_overflow() {
        let p = ad_decay(&ADParams::new(50.0, 1.0, 1e4).unwrap()).unwrap();
        assert!((0.0..1e-100).contains(&p));
        let l = pd_decay(&PDParams::new(0.01, 1.0, 1e5).unwrap()).unwrap();
        assert!(l.is_finite() && l >= 0.0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(ADParams::new(0.0, 1.0, 1.0).is_err());
        assert!(ADParams::new(1.0, -1.0, 1.0).is_err());
        assert!(ADParams::new(1.0, 1.0, -0.1).is_err());
        assert!(PDParams::new(1.0, 0.0, 1.0).is_err());
        assert!(PDParams::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn theta_maps() {
        assert_eq!(theta_ad(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(theta_ad(0.0).unwrap(), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(theta_ad(0.5).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(theta_pd(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(theta_pd(0.0).unwrap(), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(theta_pd(-1.0).unwrap(), 2.0 * PI, epsilon = 1e-15);
        assert!(theta_ad(1.0 + 1e-13).is_ok());
        assert!(theta_ad(1.0 + 1e-9).is_err());
        assert!(theta_ad(-1e-9).is_err());
        assert!(theta_pd(-1.0 - 1e-9).is_err());
    }

    #[test]
    fn ad_circuit_without_decay_keeps_plus_state() {
        let circuit = build_channel_circuit(ChannelKind::AmplitudeDamping, 0.0).unwrap();
        assert_eq!(circuit.len(), 3);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = StateVector::from_amplitudes(vec![c(h), c(0.0), c(h), c(0.0)]).unwrap();
        let psi = run_circuit(&circuit);
        for (a, b) in psi.amplitudes().iter().zip(expected.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(system_state(ChannelKind::AmplitudeDamping, 0.0).max_abs_diff(&plus()) < 1e-15);
    }

    #[test]
    fn pd_circuit_full_dephasing() {
        let rho = system_state(ChannelKind::PhaseDamping, PI);
        assert!(rho.max_abs_diff(&DensityMatrix::maximally_mixed(1)) < 1e-15);
    }

    #[test]
    fn ad_circuit_full_decay_matches_kraus() {
        let rho = system_state(ChannelKind::AmplitudeDamping, PI);
        let oracle = apply_kraus(&plus(), &kraus_set(ChannelKind::AmplitudeDamping, 0.0).unwrap())
            .unwrap();
        assert!(rho.max_abs_diff(&oracle) < 1e-15);
        assert_abs_diff_eq!(rho.get(0, 0).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn identity_kraus_sets() {
        let ad = kraus_set(ChannelKind::AmplitudeDamping, 1.0).unwrap();
        assert_eq!(ad.operators()[0], Matrix2::identity());
        assert_eq!(ad.operators()[1], Matrix2::zeros());
        let pd = kraus_set(ChannelKind::PhaseDamping, 1.0).unwrap();
        assert_eq!(pd.operators()[0], Matrix2::identity());
        assert_eq!(pd.operators()[1], Matrix2::zeros());
        let rho = plus();
        assert!(apply_kraus(&rho, &KrausSet::identity()).unwrap().max_abs_diff(&rho) < 1e-16);
    }

    #[test]
    fn pd_zero_dephases_plus() {
        let out = apply_kraus(&plus(), &kraus_set(ChannelKind::PhaseDamping, 0.0).unwrap()).unwrap();
        assert!(out.max_abs_diff(&DensityMatrix::maximally_mixed(1)) < 1e-15);
    }

    #[test]
    fn ad_zero_sends_everything_to_ground() {
        let k = kraus_set(ChannelKind::AmplitudeDamping, 0.0).unwrap();
        let one = DensityMatrix::from_pure(&StateVector::basis("1").unwrap());
        for rho in [plus(), one, DensityMatrix::maximally_mixed(1)] {
            let out = apply_kraus(&rho, &k).unwrap();
            assert_abs_diff_eq!(out.get(0, 0).re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(out.get(1, 1).re, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn ad_partial_decay_coherence() {
        // Direct 2×2 arithmetic: M₀|+⟩⟨+|M₀† has off-diagonal √p/2, M₁ contributes none.
        let out =
            apply_kraus(&plus(), &kraus_set(ChannelKind::AmplitudeDamping, 0.3).unwrap()).unwrap();
        assert_abs_diff_eq!(out.get(0, 1).re, 0.3f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.get(0, 0).re, 1.0 - 0.3 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.trace().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn out_of_range_decay_rejected() {
        assert!(kraus_set(ChannelKind::AmplitudeDamping, -0.1).is_err());
        assert!(kraus_set(ChannelKind::AmplitudeDamping, 1.1).is_err());
        assert!(kraus_set(ChannelKind::PhaseDamping, -1.5).is_err());
        assert!(kraus_set(ChannelKind::PhaseDamping, -0.5).is_ok());
    }

    #[test]
    fn apply_kraus_dimension_mismatch() {
        let k = kraus_set(ChannelKind::PhaseDamping, 0.5).unwrap();
        assert!(apply_kraus(&DensityMatrix::maximally_mixed(2), &k).is_err());
        assert!(apply_kraus_on(&DensityMatrix::maximally_mixed(2), &k, 2).is_err());
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let half = Matrix2::identity() * c(0.5);
        assert!(KrausSet::new(vec![half]).is_err());
    }
}
