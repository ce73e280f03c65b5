//! Labelled channel states.

use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::config::{ExperimentConfig, FeatureSource};
use crate::channels::{build_channel_circuit, ChannelKind, SYSTEM_QUBIT};
use crate::error::{Error, Result};
use crate::nonmarkov::nm_label;
use crate::numfmt::fmt_f64;
use crate::qsim::{
    apply_gate, estimate_distribution, pauli_expectation, reduced_density, run_circuit, stream_rng,
    DensityMatrix, Gate, PauliAxis, Shots, StateVector,
};

/// Feature streams sit at bit 62 so they never meet Gram pair streams or split streams.
const FEATURE_STREAM_BASE: u64 = 1 << 62;

fn feature_stream(index: usize, axis: usize) -> u64 {
    FEATURE_STREAM_BASE | ((index as u64) << 2) | axis as u64
}

/// One channel configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Control ratio λ/γ₀ (AD) or ατ (PD).
    pub ratio: f64,
    pub theta: f64,
    /// System ⊗ environment state after the channel circuit.
    pub state: StateVector,
    /// Reduced state of the system qubit.
    pub reduced: DensityMatrix,
    /// (⟨σx⟩, ⟨σy⟩, ⟨σz⟩) of the reduced state.
    pub bloch_exact: [f64; 3],
    /// The same expectations estimated from shots.
    pub bloch_shot: [f64; 3],
    pub label: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub channel: ChannelKind,
    pub shots: Shots,
    pub seed: u64,
    pub samples: Vec<Sample>,
}

/// Basis change that maps the eigenbasis of `axis` on `qubit` to the computational basis.
fn basis_change(axis: PauliAxis, qubit: usize) -> Vec<Gate> {
    match axis {
        PauliAxis::X => vec![Gate::H(qubit)],
        PauliAxis::Y => vec![Gate::Tdg(qubit), Gate::Tdg(qubit), Gate::H(qubit)],
        PauliAxis::Z => vec![],
    }
}

/// ⟨σ_axis⟩ on the system qubit from a basis-rotated measurement.
fn sampled_expectation(state: &StateVector, axis: PauliAxis, shots: Shots, seed: u64, stream: u64) -> Result<f64> {
    let mut rotated = state.clone();
    for gate in basis_change(axis, SYSTEM_QUBIT) {
        rotated = apply_gate(&rotated, &gate)?;
    }
    let probs = estimate_distribution(&rotated, &[SYSTEM_QUBIT], shots, &mut stream_rng(seed, stream))?;
    Ok(probs[0] - probs[1])
}

fn make_sample(cfg: &ExperimentConfig, index: usize, ratio: f64) -> Result<Sample> {
    let params = cfg.channel_params(ratio)?;
    let theta = params.theta()?;
    let state = run_circuit(&build_channel_circuit(cfg.channel, theta)?);
    let reduced = reduced_density(&state, &[SYSTEM_QUBIT])?;
    let mut bloch_exact = [0.0; 3];
    let mut bloch_shot = [0.0; 3];
    for (a, axis) in PauliAxis::ALL.into_iter().enumerate() {
        bloch_exact[a] = pauli_expectation(&reduced, axis, 0)?;
        bloch_shot[a] = sampled_expectation(&state, axis, cfg.shots, cfg.seed, feature_stream(index, a))?;
    }
    let label = nm_label(&params, &cfg.time_grid())?.value();
    Ok(Sample {
        ratio,
        theta,
        state,
        reduced,
        bloch_exact,
        bloch_shot,
        label,
    })
}

/// Builds one sample per sweep value: control angle at the snapshot time, the
/// channel-circuit state, Bloch features and the 𝒩 label of the full trajectory.
pub fn generate_dataset(cfg: &ExperimentConfig) -> Result<Dataset> {
    cfg.validate()?;
    let samples = cfg
        .sweep()
        .par_iter()
        .enumerate()
        .map(|(i, &g)| make_sample(cfg, i, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        channel: cfg.channel,
        shots: cfg.shots,
        seed: cfg.seed,
        samples,
    })
}

const HEADER: &str = "index,ratio,theta,label,sx_exact,sy_exact,sz_exact,sx_shot,sy_shot,sz_shot";

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.theta).collect()
    }

    pub fn labels(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.label).collect()
    }

    pub fn features(&self, source: FeatureSource) -> Vec<Vec<f64>> {
        self.samples
            .iter()
            .map(|s| match source {
                FeatureSource::Exact => s.bloch_exact.to_vec(),
                FeatureSource::Sampled => s.bloch_shot.to_vec(),
            })
            .collect()
    }

    /// Columns: index, ratio, theta, label, then exact and shot-sampled ⟨σx⟩, ⟨σy⟩, ⟨σz⟩.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        writeln!(out, "# channel={} shots={} seed={}", self.channel, self.shots, self.seed)?;
        writeln!(out, "{HEADER}")?;
        for (i, s) in self.samples.iter().enumerate() {
            let mut fields = vec![i.to_string(), fmt_f64(s.ratio), fmt_f64(s.theta), fmt_f64(s.label)];
            fields.extend(s.bloch_exact.iter().chain(&s.bloch_shot).map(|v| fmt_f64(*v)));
            writeln!(out, "{}", fields.join(","))?;
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    /// Reads a file written by [`Dataset::write_csv`]; states are rebuilt from θ.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            message,
        };
        let text = std::fs::read_to_string(path)?;
        let meta = text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| parse_err("missing '# channel=... shots=... seed=...' line".into()))?;
        let mut channel = None;
        let mut shots = None;
        let mut seed = None;
        for kv in meta.split_whitespace() {
            match kv.split_once('=') {
                Some(("channel", v)) => channel = Some(v.parse::<ChannelKind>()?),
                Some(("shots", v)) => shots = Some(v.parse::<Shots>()?),
                Some(("seed", v)) => seed = Some(v.parse::<u64>().map_err(|e| parse_err(e.to_string()))?),
                _ => {}
            }
        }
        let (Some(channel), Some(shots), Some(seed)) = (channel, shots, seed) else {
            return Err(parse_err("metadata line lacks channel, shots or seed".into()));
        };

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        if reader.headers()?.iter().collect::<Vec<_>>().join(",") != HEADER {
            return Err(parse_err(format!("expected header {HEADER}")));
        }
        let mut samples = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            let v = record
                .iter()
                .skip(1)
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| parse_err(format!("row {row}: {e}")))?;
            if v.len() != 9 {
                return Err(parse_err(format!("row {row} has {} columns", v.len() + 1)));
            }
            let theta = v[1];
            let state = run_circuit(&build_channel_circuit(channel, theta).map_err(|e| parse_err(format!("row {row}: {e}")))?);
            let reduced = reduced_density(&state, &[SYSTEM_QUBIT])?;
            samples.push(Sample {
                ratio: v[0],
                theta,
                state,
                reduced,
                label: v[2],
                bloch_exact: [v[3], v[4], v[5]],
                bloch_shot: [v[6], v[7], v[8]],
            });
        }
        Ok(Dataset {
            channel,
            shots,
            seed,
            samples,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(channel: ChannelKind, values: Vec<f64>) -> ExperimentConfig {
        ExperimentConfig {
            channel,
            sweep_values: Some(values),
            grid_points: 400,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn markovian_ad_has_zero_label() {
        let d = generate_dataset(&small(ChannelKind::AmplitudeDamping, vec![4.0])).unwrap();
        assert!(d.samples[0].label.abs() < 1e-6);
    }

    #[test]
    fn non_markovian_ad_has_positive_label() {
        let d = generate_dataset(&small(ChannelKind::AmplitudeDamping, vec![1.0])).unwrap();
        assert!(d.samples[0].label > 0.0);
    }

    #[test]
    fn shot_features_track_exact_ones() {
        let d = generate_dataset(&small(ChannelKind::PhaseDamping, vec![0.1, 0.8, 1.6])).unwrap();
        for s in &d.samples {
            for a in 0..3 {
                assert!((s.bloch_exact[a] - s.bloch_shot[a]).abs() < 5.0 / 8192f64.sqrt());
            }
            assert!((0.0..=2.0 * std::f64::consts::PI).contains(&s.theta));
        }
    }

    #[test]
    fn csv_round_trip() {
        let d = generate_dataset(&small(ChannelKind::AmplitudeDamping, vec![0.3, 2.5])).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("dataset.csv");
        d.write_csv(&p).unwrap();
        assert_eq!(Dataset::read_csv(&p).unwrap(), d);
    }

    #[test]
    fn invalid_sweep_value_names_it() {
        let err = generate_dataset(&small(ChannelKind::AmplitudeDamping, vec![1.0, f64::NAN]));
        assert!(err.is_err());
    }
}
