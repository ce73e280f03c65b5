use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{qubit_mask, DensityMatrix, StateVector};
use crate::error::{Error, Result};

/// Number of measurement repetitions, or the infinite-shot limit in which
/// estimators read Born probabilities directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shots {
    Finite(u64),
    Infinite,
}

impl Shots {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Shots::Infinite)
    }
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shots::Finite(n) => write!(f, "{n}"),
            Shots::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Shots {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinite") {
            return Ok(Shots::Infinite);
        }
        match s.parse::<u64>() {
            Ok(0) => Err(Error::config("shots must be at least 1")),
            Ok(n) => Ok(Shots::Finite(n)),
            Err(_) => Err(Error::config(format!(
                "invalid shot count {s:?}: expected a positive integer or \"inf\""
            ))),
        }
    }
}

impl Serialize for Shots {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Shots::Finite(n) => serializer.serialize_u64(*n),
            Shots::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Shots {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Count(n) => Shots::from_str(&n.to_string()),
            Raw::Text(s) => Shots::from_str(&s),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Counts from repeated measurement of a subset of qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub shots: u64,
    pub seed: u64,
    /// Observed bitstrings (measured qubits in the order requested) and their counts.
    /// Outcomes that never occurred are absent.
    pub counts: BTreeMap<String, u64>,
}

/// Deterministic generator for one random stream.
///
/// ChaCha with 8 rounds, keyed by expanding `seed` with `SeedableRng::seed_from_u64`
/// and positioned on the 64-bit stream `stream`. Streams with distinct ids are
/// independent, so work split across threads draws the same numbers regardless of
/// scheduling.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Born probabilities of measuring `qubits` (in that order; `qubits[0]` is the leftmost
/// outcome bit). The remaining qubits are marginalized.
pub fn born_probabilities(state: &StateVector, qubits: &[usize]) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    if qubits.is_empty() {
        return Err(Error::contract("no qubits to measure"));
    }
    let mut masks = Vec::with_capacity(qubits.len());
    for &q in qubits {
        if q >= n {
            return Err(Error::contract(format!("qubit {q} out of range for {n} qubits")));
        }
        let m = qubit_mask(n, q);
        if masks.contains(&m) {
            return Err(Error::contract(format!("qubit {q} measured twice")));
        }
        masks.push(m);
    }
    let mut probs = vec![0.0; 1 << qubits.len()];
    for (index, amp) in state.amplitudes().iter().enumerate() {
        let outcome = masks
            .iter()
            .fold(0, |acc, &m| (acc << 1) | usize::from(index & m != 0));
        probs[outcome] += amp.norm_sqr();
    }
    Ok(probs)
}

/// Draws `shots` i.i.d. outcomes from `probs` and returns per-outcome counts.
///
/// The multinomial draw is decomposed into successive conditional binomials, which
/// has the same joint distribution as sampling each shot separately at a cost
/// independent of the shot count.
pub fn sample_multinomial(probs: &[f64], shots: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining_shots = shots;
    let mut remaining_mass: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    let last = probs.len() - 1;
    for (k, &p) in probs.iter().enumerate() {
        if remaining_shots == 0 {
            break;
        }
        let p = p.max(0.0);
        if k == last {
            counts[k] = remaining_shots;
            break;
        }
        let q = if remaining_mass > 0.0 {
            (p / remaining_mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = if q == 0.0 {
            0
        } else if q == 1.0 {
            remaining_shots
        } else {
            Binomial::new(remaining_shots, q)
                .expect("binomial parameters are in range")
                .sample(rng)
        };
        counts[k] = draw;
        remaining_shots -= draw;
        remaining_mass -= p;
    }
    counts
}

/// Outcome distribution over `qubits`: exact in the infinite-shot limit, otherwise
/// empirical frequencies from `rng`.
pub fn estimate_distribution(
    state: &StateVector,
    qubits: &[usize],
    shots: Shots,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let probs = born_probabilities(state, qubits)?;
    match shots {
        Shots::Infinite => Ok(probs),
        Shots::Finite(0) => Err(Error::contract("shots must be at least 1")),
        Shots::Finite(n) => Ok(sample_multinomial(&probs, n, rng)
            .into_iter()
            .map(|c| c as f64 / n as f64)
            .collect()),
    }
}

/// Measures `qubits` of `state` `shots` times using stream 0 of `seed`.
pub fn sample_counts(
    state: &StateVector,
    qubits: &[usize],
    shots: u64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::contract("sample_counts: shots must be at least 1"));
    }
    let probs = born_probabilities(state, qubits)?;
    let mut rng = stream_rng(seed, 0);
    let width = qubits.len();
    let counts = sample_multinomial(&probs, shots, &mut rng)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(outcome, c)| (format!("{outcome:0width$b}"), c))
        .collect();
    Ok(MeasurementRecord {
        shots,
        seed,
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
}

/// Tr[ρ σ] for the Pauli `axis` acting on `qubit`.
pub fn pauli_expectation(rho: &DensityMatrix, axis: PauliAxis, qubit: usize) -> Result<f64> {
    let n = rho.n_qubits();
    if qubit >= n {
        return Err(Error::contract(format!("qubit {qubit} out of range for {n} qubits")));
    }
    let m = qubit_mask(n, qubit);
    let entries = rho.entries();
    let i_unit = Complex64::new(0.0, 1.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..rho.dim() {
        let bit_clear = i & m == 0;
        acc += match axis {
            PauliAxis::Z => entries[(i, i)] * if bit_clear { 1.0 } else { -1.0 },
            PauliAxis::X => entries[(i, i ^ m)],
            // (σ_y)_{j,i} with j = i ^ m: +i when i has the bit clear, −i otherwise.
            PauliAxis::Y => entries[(i, i ^ m)] * if bit_clear { i_unit } else { -i_unit },
        };
    }
    Ok(acc.re.clamp(-1.0, 1.0))
}
