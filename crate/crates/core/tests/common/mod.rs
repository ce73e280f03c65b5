#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use nmkernel::channels::{
    apply_kraus, build_channel_circuit, kraus_set, ADParams, ChannelKind, PDParams, SYSTEM_QUBIT,
};
use nmkernel::qsim::{reduced_density, run_circuit, DensityMatrix, StateVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_ad(rng: &mut ChaCha8Rng) -> ADParams {
    ADParams::new(
        rng.random_range(0.05..5.0),
        rng.random_range(0.1..2.0),
        rng.random_range(0.0..10.0),
    )
    .unwrap()
}

pub fn random_pd(rng: &mut ChaCha8Rng) -> PDParams {
    PDParams::new(
        rng.random_range(0.05..3.0),
        rng.random_range(0.2..3.0),
        rng.random_range(0.0..10.0),
    )
    .unwrap()
}

/// System marginal of the channel circuit.
pub fn circuit_state(kind: ChannelKind, theta: f64) -> DensityMatrix {
    let psi = run_circuit(&build_channel_circuit(kind, theta).unwrap());
    reduced_density(&psi, &[SYSTEM_QUBIT]).unwrap()
}

/// Kraus map applied to |+⟩⟨+|, the system input the circuit prepares.
pub fn kraus_state(kind: ChannelKind, decay: f64) -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVector::from_amplitudes(vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)]).unwrap();
    apply_kraus(&DensityMatrix::from_pure(&plus), &kraus_set(kind, decay).unwrap()).unwrap()
}

/// Haar-like random pure state from normalized complex Gaussians.
pub fn random_state(rng: &mut ChaCha8Rng, n_qubits: usize) -> StateVector {
    let dim = 1 << n_qubits;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).unwrap()
}

/// Linear-kernel Gram of `n` random Gaussian feature vectors of dimension `d`.
pub fn random_linear_gram(rng: &mut ChaCha8Rng, n: usize, d: usize) -> DMatrix<f64> {
    let x = DMatrix::from_fn(n, d, |_, _| rng.sample::<f64, _>(StandardNormal) / (d as f64).sqrt());
    &x * x.transpose()
}

pub fn dense_solve(a: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    a.clone()
        .lu()
        .solve(&DVector::from_column_slice(b))
        .expect("oracle system is singular")
        .iter()
        .copied()
        .collect()
}

/// ε-SVR by enumerating every active set. Each βᵢ = αᵢ − αᵢ* is either −C, free
/// negative, 0, free positive or +C; free coefficients and b solve the KKT
/// equalities, and the feasible pattern with the largest dual objective wins.
/// Without free coefficients b is the midpoint of its feasible interval.
pub fn svr_oracle(k: &DMatrix<f64>, y: &[f64], c: f64, eps: f64) -> (Vec<f64>, f64) {
    let n = y.len();
    let tol = 1e-9;
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    for code in 0..5usize.pow(n as u32) {
        let mut state = vec![0usize; n];
        let mut rest = code;
        for s in state.iter_mut() {
            *s = rest % 5;
            rest /= 5;
        }
        let mut beta = vec![0.0; n];
        for i in 0..n {
            beta[i] = match state[i] {
                0 => -c,
                4 => c,
                _ => 0.0,
            };
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 1 || state[i] == 3).collect();
        let b;
        if free.is_empty() {
            if beta.iter().sum::<f64>().abs() > tol {
                continue;
            }
            let g: Vec<f64> = (0..n).map(|i| (0..n).map(|j| k[(i, j)] * beta[j]).sum()).collect();
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for i in 0..n {
                match state[i] {
                    2 => {
                        lo = lo.max(y[i] - eps - g[i]);
                        hi = hi.min(y[i] + eps - g[i]);
                    }
                    4 => hi = hi.min(y[i] - eps - g[i]),
                    _ => lo = lo.max(y[i] + eps - g[i]),
                }
            }
            if lo > hi + tol {
                continue;
            }
            b = (lo + hi) / 2.0;
        } else {
            let m = free.len();
            let mut a = DMatrix::zeros(m + 1, m + 1);
            let mut rhs = vec![0.0; m + 1];
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    a[(r, s)] = k[(i, j)];
                }
                a[(r, m)] = 1.0;
                a[(m, r)] = 1.0;
                let target = if state[i] == 3 { y[i] - eps } else { y[i] + eps };
                let fixed: f64 = (0..n).filter(|j| !free.contains(j)).map(|j| k[(i, j)] * beta[j]).sum();
                rhs[r] = target - fixed;
            }
            rhs[m] = -(0..n).filter(|j| !free.contains(j)).map(|j| beta[j]).sum::<f64>();
            let Some(sol) = a.lu().solve(&DVector::from_vec(rhs)) else {
                continue;
            };
            let mut ok = true;
            for (r, &i) in free.iter().enumerate() {
                let v = sol[r];
                ok &= if state[i] == 3 { v > -tol && v < c + tol } else { v < tol && v > -c - tol };
                beta[i] = v;
            }
            if !ok {
                continue;
            }
            b = sol[m];
            let f: Vec<f64> = (0..n).map(|i| (0..n).map(|j| k[(i, j)] * beta[j]).sum::<f64>() + b).collect();
            for i in 0..n {
                ok &= match state[i] {
                    2 => (f[i] - y[i]).abs() <= eps + tol,
                    4 => y[i] - f[i] >= eps - tol,
                    0 => f[i] - y[i] >= eps - tol,
                    _ => true,
                };
            }
            if !ok {
                continue;
            }
        }
        let quad: f64 = (0..n).map(|i| (0..n).map(|j| beta[i] * k[(i, j)] * beta[j]).sum::<f64>()).sum();
        let w = -0.5 * quad - eps * beta.iter().map(|v| v.abs()).sum::<f64>()
            + y.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>();
        if best.as_ref().is_none_or(|(bw, _, _)| w > *bw) {
            best = Some((w, beta, b));
        }
    }
    let (_, beta, b) = best.expect("some active set is always optimal");
    (beta, b)
}

/// Training-set predictions Kβ + b.
pub fn decision(k: &DMatrix<f64>, beta: &[f64], b: f64) -> Vec<f64> {
    (0..k.nrows())
        .map(|i| (0..k.ncols()).map(|j| k[(i, j)] * beta[j]).sum::<f64>() + b)
        .collect()
}
