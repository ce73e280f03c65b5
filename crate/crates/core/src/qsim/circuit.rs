use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{qubit_mask, StateVector};
use crate::error::{Error, Result};

/// Gates supported by the simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    T(usize),
    Tdg(usize),
    Ry { target: usize, theta: f64 },
    Cnot { control: usize, target: usize },
    CRy { control: usize, target: usize, theta: f64 },
    Swap(usize, usize),
    CSwap { control: usize, a: usize, b: usize },
}

impl Gate {
    /// The inverse gate.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            Gate::Ry { target, theta } => Gate::Ry {
                target,
                theta: -theta,
            },
            Gate::CRy {
                control,
                target,
                theta,
            } => Gate::CRy {
                control,
                target,
                theta: -theta,
            },
            g => g,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::T(q) | Gate::Tdg(q) => vec![q],
            Gate::Ry { target, .. } => vec![target],
            Gate::Cnot { control, target } | Gate::CRy { control, target, .. } => {
                vec![control, target]
            }
            Gate::Swap(a, b) => vec![a, b],
            Gate::CSwap { control, a, b } => vec![control, a, b],
        }
    }

    /// Relabels every qubit index `q` as `map[q]`.
    pub fn remap(&self, map: &[usize]) -> Gate {
        let m = |q: usize| map[q];
        match *self {
            Gate::H(q) => Gate::H(m(q)),
            Gate::X(q) => Gate::X(m(q)),
            Gate::T(q) => Gate::T(m(q)),
            Gate::Tdg(q) => Gate::Tdg(m(q)),
            Gate::Ry { target, theta } => Gate::Ry {
                target: m(target),
                theta,
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: m(control),
                target: m(target),
            },
            Gate::CRy {
                control,
                target,
                theta,
            } => Gate::CRy {
                control: m(control),
                target: m(target),
                theta,
            },
            Gate::Swap(a, b) => Gate::Swap(m(a), m(b)),
            Gate::CSwap { control, a, b } => Gate::CSwap {
                control: m(control),
                a: m(a),
                b: m(b),
            },
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for (k, &q) in qubits.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::config(format!(
                    "{self:?}: qubit {q} out of range for {n_qubits} qubits"
                )));
            }
            if qubits[..k].contains(&q) {
                return Err(Error::config(format!("{self:?}: qubit {q} used twice")));
            }
        }
        match *self {
            Gate::Ry { theta, .. } | Gate::CRy { theta, .. } if !theta.is_finite() => Err(
                Error::config(format!("{self:?}: rotation angle is not finite")),
            ),
            _ => Ok(()),
        }
    }
}

/// Ordered gate list on a fixed register, always started from |0…0⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends `other` with its qubit `q` placed on `placement[q]` of this register.
    pub fn append_mapped(&mut self, other: &Circuit, placement: &[usize]) -> Result<&mut Self> {
        if placement.len() != other.n_qubits {
            return Err(Error::config(format!(
                "placement lists {} qubits, sub-circuit has {}",
                placement.len(),
                other.n_qubits
            )));
        }
        for gate in &other.gates {
            self.push(gate.remap(placement))?;
        }
        Ok(self)
    }

    /// U† as a circuit: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }
}

/// Returns the image of `state` under `gate`.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    gate.validate(state.n_qubits())?;
    let mut out = state.clone();
    apply_in_place(&mut out, gate);
    Ok(out)
}

/// Runs `circuit` on |0…0⟩.
pub fn run_circuit(circuit: &Circuit) -> StateVector {
    let mut state = StateVector::zero(circuit.n_qubits);
    for gate in &circuit.gates {
        apply_in_place(&mut state, gate);
    }
    state
}

type Mat2 = [[Complex64; 2]; 2];

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn matrix_of(gate: &Gate) -> Option<Mat2> {
    let zero = real(0.0);
    let one = real(1.0);
    let h = real(FRAC_1_SQRT_2);
    let ry = |theta: f64| {
        let (s, c) = (theta / 2.0).sin_cos();
        [[real(c), real(-s)], [real(s), real(c)]]
    };
    Some(match *gate {
        Gate::H(_) => [[h, h], [h, -h]],
        Gate::X(_) | Gate::Cnot { .. } => [[zero, one], [one, zero]],
        Gate::T(_) => [[one, zero], [zero, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
        Gate::Tdg(_) => [[one, zero], [zero, Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)]],
        Gate::Ry { theta, .. } | Gate::CRy { theta, .. } => ry(theta),
        Gate::Swap(..) | Gate::CSwap { .. } => return None,
    })
}

fn apply_in_place(state: &mut StateVector, gate: &Gate) {
    let n = state.n_qubits();
    let amps = state.amplitudes_mut();
    match *gate {
        Gate::H(t) | Gate::X(t) | Gate::T(t) | Gate::Tdg(t) | Gate::Ry { target: t, .. } => {
            apply_controlled_1q(amps, qubit_mask(n, t), 0, &matrix_of(gate).unwrap());
        }
        Gate::Cnot { control, target } | Gate::CRy { control, target, .. } => {
            apply_controlled_1q(
                amps,
                qubit_mask(n, target),
                qubit_mask(n, control),
                &matrix_of(gate).unwrap(),
            );
        }
        Gate::Swap(a, b) => swap_bits(amps, qubit_mask(n, a), qubit_mask(n, b), 0),
        Gate::CSwap { control, a, b } => {
            swap_bits(amps, qubit_mask(n, a), qubit_mask(n, b), qubit_mask(n, control))
        }
    }
}

/// Applies `m` to the target bit on every basis pair whose control bits are all set.
fn apply_controlled_1q(amps: &mut [Complex64], target: usize, controls: usize, m: &Mat2) {
    for i in 0..amps.len() {
        if i & target != 0 || i & controls != controls {
            continue;
        }
        let j = i | target;
        let (a0, a1) = (amps[i], amps[j]);
        amps[i] = m[0][0] * a0 + m[0][1] * a1;
        amps[j] = m[1][0] * a0 + m[1][1] * a1;
    }
}

fn swap_bits(amps: &mut [Complex64], a: usize, b: usize, controls: usize) {
    for i in 0..amps.len() {
        if i & a != 0 && i & b == 0 && i & controls == controls {
            amps.swap(i, i ^ a ^ b);
        }
    }
}
