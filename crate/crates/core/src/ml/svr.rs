//! ε-support-vector regression on a precomputed kernel.
//!
//! The dual
//!
//! ```text
//! max  −½ Σᵢⱼ (αᵢ−αᵢ*)(αⱼ−αⱼ*) K(i,j) − ε Σᵢ (αᵢ+αᵢ*) + Σᵢ yᵢ (αᵢ−αᵢ*)
//! s.t. Σᵢ (αᵢ−αᵢ*) = 0,  αᵢ, αᵢ* ∈ [0, C]
//! ```
//!
//! is solved as the equivalent 2n-variable minimization with SMO: each step picks
//! the maximal-violating pair (second-order selection) and solves the two-variable
//! subproblem analytically.

use std::cmp::Ordering;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Curvature floor for non-positive-definite pair subproblems.
const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SVRParams {
    pub c: f64,
    pub epsilon: f64,
    /// Stopping tolerance on the maximal KKT violation.
    pub tol: f64,
    /// Iteration budget in sweeps; one sweep is 2n pair updates.
    pub max_passes: usize,
}

impl Default for SVRParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            epsilon: 0.1,
            tol: 1e-3,
            max_passes: 100_000,
        }
    }
}

impl SVRParams {
    pub fn new(c: f64, epsilon: f64) -> Self {
        Self {
            c,
            epsilon,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::contract(format!("SVR: C must be positive, got {}", self.c)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::contract(format!(
                "SVR: epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        if self.tol.partial_cmp(&0.0) != Some(Ordering::Greater) {
            return Err(Error::contract("SVR: tol must be positive"));
        }
        Ok(())
    }
}

/// Fitted ε-SVR.
#[derive(Debug, Clone, PartialEq)]
pub struct SVRModel {
    /// αᵢ − αᵢ* per training sample.
    pub dual_coeffs: Vec<f64>,
    pub intercept: f64,
    /// Training indices with non-zero dual coefficient.
    pub support: Vec<usize>,
    pub c: f64,
    pub epsilon: f64,
    pub iterations: usize,
    /// Maximal KKT violation at exit.
    pub kkt_residual: f64,
}

/// Solver internals exposed for tests and diagnostics.
#[derive(Debug, Clone, Default)]
pub struct SvrTrace {
    /// Dual objective (maximization form) after every update.
    pub objective: Vec<f64>,
}

pub(crate) fn check_training_inputs(k: &DMatrix<f64>, y: &[f64]) -> Result<()> {
    let (r, c) = k.shape();
    if r != c {
        return Err(Error::contract(format!("Gram matrix is {r}x{c}, not square")));
    }
    if r != y.len() {
        return Err(Error::contract(format!(
            "Gram matrix has {r} rows but {} labels were given",
            y.len()
        )));
    }
    if y.is_empty() {
        return Err(Error::contract("no training samples"));
    }
    for i in 0..r {
        for j in (i + 1)..r {
            if (k[(i, j)] - k[(j, i)]).abs() > 1e-12 {
                return Err(Error::contract(format!("Gram matrix not symmetric at ({i},{j})")));
            }
        }
    }
    Ok(())
}

pub fn svr_fit(k: &DMatrix<f64>, y: &[f64], params: &SVRParams) -> Result<SVRModel> {
    svr_fit_traced(k, y, params, None)
}

/// As [`svr_fit`], additionally recording the dual objective after every update.
pub fn svr_fit_traced(
    k: &DMatrix<f64>,
    y: &[f64],
    params: &SVRParams,
    mut trace: Option<&mut SvrTrace>,
) -> Result<SVRModel> {
    check_training_inputs(k, y)?;
    params.validate()?;
    let n = y.len();
    let l = 2 * n;
    let c = params.c;
    // Variable t < n is αₜ (sign +1); t ≥ n is α*_{t−n} (sign −1).
    let sign = |t: usize| if t < n { 1.0 } else { -1.0 };
    let kern = |t: usize, u: usize| k[(t % n, u % n)];
    let q = |t: usize, u: usize| sign(t) * sign(u) * kern(t, u);

    let p: Vec<f64> = (0..l)
        .map(|t| if t < n { params.epsilon - y[t] } else { params.epsilon + y[t - n] })
        .collect();
    let mut beta = vec![0.0; l];
    let mut grad = p.clone();

    let is_upper = |b: f64| b >= c;
    let is_lower = |b: f64| b <= 0.0;

    let max_iter = params.max_passes.saturating_mul(l).max(1);
    let mut iterations = 0;
    let residual = loop {
        // Working-set selection.
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..l {
            let up = if sign(t) > 0.0 { !is_upper(beta[t]) } else { !is_lower(beta[t]) };
            if up {
                let v = -sign(t) * grad[t];
                if v >= gmax {
                    gmax = v;
                    i_sel = Some(t);
                }
            }
        }
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j_sel = None;
        let mut obj_diff_min = f64::INFINITY;
        if let Some(i) = i_sel {
            for t in 0..l {
                let low = if sign(t) > 0.0 { !is_lower(beta[t]) } else { !is_upper(beta[t]) };
                if !low {
                    continue;
                }
                let v = sign(t) * grad[t];
                gmax2 = gmax2.max(v);
                let grad_diff = gmax + v;
                if grad_diff > 0.0 {
                    let quad = kern(i, i) + kern(t, t) - 2.0 * kern(i, t);
                    let quad = if quad > 0.0 { quad } else { TAU };
                    let obj_diff = -(grad_diff * grad_diff) / quad;
                    if obj_diff <= obj_diff_min {
                        obj_diff_min = obj_diff;
                        j_sel = Some(t);
                    }
                }
            }
        }
        let violation = if i_sel.is_some() { gmax + gmax2 } else { 0.0 };
        let (i, j) = match (i_sel, j_sel) {
            (Some(i), Some(j)) if violation >= params.tol => (i, j),
            _ => break violation.max(0.0),
        };
        if iterations >= max_iter {
            return Err(Error::Convergence {
                iterations,
                residual: violation,
                tol: params.tol,
            });
        }
        iterations += 1;

        // Two-variable subproblem.
        let (old_i, old_j) = (beta[i], beta[j]);
        let qij = q(i, j);
        if sign(i) != sign(j) {
            let quad = q(i, i) + q(j, j) + 2.0 * qij;
            let quad = if quad > 0.0 { quad } else { TAU };
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = beta[i] - beta[j];
            beta[i] += delta;
            beta[j] += delta;
            if diff > 0.0 {
                if beta[j] < 0.0 {
                    beta[j] = 0.0;
                    beta[i] = diff;
                }
            } else if beta[i] < 0.0 {
                beta[i] = 0.0;
                beta[j] = -diff;
            }
            if diff > 0.0 {
                if beta[i] > c {
                    beta[i] = c;
                    beta[j] = c - diff;
                }
            } else if beta[j] > c {
                beta[j] = c;
                beta[i] = c + diff;
            }
        } else {
            let quad = q(i, i) + q(j, j) - 2.0 * qij;
            let quad = if quad > 0.0 { quad } else { TAU };
            let delta = (grad[i] - grad[j]) / quad;
            let sum = beta[i] + beta[j];
            beta[i] -= delta;
            beta[j] += delta;
            if sum > c {
                if beta[i] > c {
                    beta[i] = c;
                    beta[j] = sum - c;
                }
            } else if beta[j] < 0.0 {
                beta[j] = 0.0;
                beta[i] = sum;
            }
            if sum > c {
                if beta[j] > c {
                    beta[j] = c;
                    beta[i] = sum - c;
                }
            } else if beta[i] < 0.0 {
                beta[i] = 0.0;
                beta[j] = sum;
            }
        }

        let (di, dj) = (beta[i] - old_i, beta[j] - old_j);
        for (t, g) in grad.iter_mut().enumerate() {
            *g += q(t, i) * di + q(t, j) * dj;
        }
        if let Some(trace) = trace.as_deref_mut() {
            // f(β) = ½ βᵀ(G + p); the dual maximizes −f.
            let f: f64 = (0..l).map(|t| beta[t] * (grad[t] + p[t])).sum::<f64>() / 2.0;
            trace.objective.push(-f);
        }
    };

    let dual_coeffs: Vec<f64> = (0..n).map(|i| beta[i] - beta[i + n]).collect();
    let intercept = recover_intercept(k, y, &beta, &dual_coeffs, params);
    let support = (0..n).filter(|&i| dual_coeffs[i] != 0.0).collect();
    Ok(SVRModel {
        dual_coeffs,
        intercept,
        support,
        c,
        epsilon: params.epsilon,
        iterations,
        kkt_residual: residual,
    })
}

/// b from the KKT conditions: the average over free multipliers (0 < α < C), each of
/// which pins f(xᵢ) = yᵢ ∓ ε. Without free multipliers, the midpoint of the interval
/// of b values consistent with every bounded multiplier.
fn recover_intercept(
    k: &DMatrix<f64>,
    y: &[f64],
    beta: &[f64],
    coeffs: &[f64],
    params: &SVRParams,
) -> f64 {
    let n = y.len();
    let (c, eps) = (params.c, params.epsilon);
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for i in 0..n {
        let g: f64 = (0..n).map(|j| coeffs[j] * k[(i, j)]).sum();
        // αᵢ: residual yᵢ − f(xᵢ) ≥ ε when αᵢ > 0, ≤ ε when αᵢ < C.
        let b_alpha = y[i] - eps - g;
        // αᵢ*: f(xᵢ) − yᵢ ≥ ε when αᵢ* > 0, ≤ ε when αᵢ* < C.
        let b_star = y[i] + eps - g;
        for (b_val, a, is_star) in [(b_alpha, beta[i], false), (b_star, beta[i + n], true)] {
            let at_zero = a <= 0.0;
            let at_c = a >= c;
            if !at_zero && !at_c {
                free_sum += b_val;
                free_count += 1;
                continue;
            }
            // α at 0 or α* at C bound b from below; α at C or α* at 0 from above.
            let bounds_below = at_zero != is_star;
            if bounds_below {
                lower = lower.max(b_val);
            } else {
                upper = upper.min(b_val);
            }
        }
    }
    if free_count > 0 {
        free_sum / free_count as f64
    } else {
        (lower + upper) / 2.0
    }
}

/// f(x) = Σᵢ (αᵢ − αᵢ*) k(xᵢ, x) + b for one row of kernel values against the training set.
pub fn svr_predict(model: &SVRModel, k_row: &[f64]) -> Result<f64> {
    if k_row.len() != model.dual_coeffs.len() {
        return Err(Error::contract(format!(
            "kernel row has {} entries, model was trained on {}",
            k_row.len(),
            model.dual_coeffs.len()
        )));
    }
    Ok(model
        .dual_coeffs
        .iter()
        .zip(k_row)
        .map(|(a, k)| a * k)
        .sum::<f64>()
        + model.intercept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn train_predictions(model: &SVRModel, k: &DMatrix<f64>) -> Vec<f64> {
        (0..k.nrows())
            .map(|i| svr_predict(model, k.row(i).iter().copied().collect::<Vec<_>>().as_slice()).unwrap())
            .collect()
    }

    #[test]
    fn constant_labels_fit_inside_tube() {
        let k = DMatrix::from_fn(4, 4, |i, j| (-((i as f64 - j as f64).powi(2))).exp());
        let y = vec![0.7; 4];
        let m = svr_fit(&k, &y, &SVRParams::new(1.0, 0.1)).unwrap();
        assert!(m.dual_coeffs.iter().all(|&a| a == 0.0));
        assert!(m.support.is_empty());
        assert_abs_diff_eq!(m.intercept, 0.7, epsilon = 1e-12);
    }

    #[test]
    fn wide_tube_gives_midpoint() {
        let k = DMatrix::identity(2, 2);
        for eps in [0.5, 0.8] {
            let m = svr_fit(&k, &[0.0, 1.0], &SVRParams::new(1.0, eps)).unwrap();
            assert!(m.dual_coeffs.iter().all(|&a| a == 0.0));
            assert_abs_diff_eq!(m.intercept, 0.5, epsilon = 1e-12);
            assert_eq!(svr_predict(&m, &[0.3, 0.9]).unwrap(), m.intercept);
        }
    }

    #[test]
    fn narrow_tube_fits_two_points() {
        // With K = I, ε = 0.1 and large C the optimum is β = (−0.4, 0.4), b = 0.5.
        let k = DMatrix::identity(2, 2);
        let m = svr_fit(&k, &[0.0, 1.0], &SVRParams { tol: 1e-10, ..SVRParams::new(10.0, 0.1) }).unwrap();
        assert_abs_diff_eq!(m.dual_coeffs[0], -0.4, epsilon = 1e-8);
        assert_abs_diff_eq!(m.dual_coeffs[1], 0.4, epsilon = 1e-8);
        assert_abs_diff_eq!(m.intercept, 0.5, epsilon = 1e-8);
        let f = train_predictions(&m, &k);
        assert_abs_diff_eq!(f[0], 0.1, epsilon = 1e-8);
        assert_abs_diff_eq!(f[1], 0.9, epsilon = 1e-8);
    }

    #[test]
    fn box_clipping_with_small_c() {
        let k = DMatrix::identity(2, 2);
        let m = svr_fit(&k, &[0.0, 1.0], &SVRParams::new(0.2, 0.1)).unwrap();
        assert_abs_diff_eq!(m.dual_coeffs[0], -0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(m.dual_coeffs[1], 0.2, epsilon = 1e-12);
        // No free multipliers: b is the midpoint of the feasible interval.
        assert_abs_diff_eq!(m.intercept, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn dual_objective_never_decreases() {
        let n = 12;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let k = DMatrix::from_fn(n, n, |i, j| (-3.0 * (xs[i] - xs[j]).abs().sqrt()).exp());
        let y: Vec<f64> = xs.iter().map(|x| (5.0 * x).sin()).collect();
        let mut trace = SvrTrace::default();
        let m = svr_fit_traced(&k, &y, &SVRParams { tol: 1e-8, ..SVRParams::new(5.0, 0.01) }, Some(&mut trace))
            .unwrap();
        assert!(!trace.objective.is_empty());
        assert!(trace.objective.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(m.dual_coeffs.iter().all(|a| a.abs() <= 5.0 + 1e-12));
        assert!(m.dual_coeffs.iter().sum::<f64>().abs() < 1e-8);
    }

    #[test]
    fn iteration_budget_exhaustion_reports_residual() {
        let n = 10;
        let k = DMatrix::from_fn(n, n, |i, j| (-((i as f64 - j as f64) / 3.0).powi(2)).exp());
        let y: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let params = SVRParams { tol: 1e-12, max_passes: 0, ..SVRParams::new(10.0, 0.001) };
        match svr_fit(&k, &y, &params) {
            Err(Error::Convergence { residual, .. }) => assert!(residual > 1e-12),
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_inputs() {
        let k = DMatrix::identity(2, 2);
        assert!(svr_fit(&k, &[0.0], &SVRParams::default()).is_err());
        assert!(svr_fit(&k, &[0.0, 1.0], &SVRParams::new(0.0, 0.1)).is_err());
        assert!(svr_fit(&k, &[0.0, 1.0], &SVRParams::new(1.0, -0.1)).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(svr_fit(&asym, &[0.0, 1.0], &SVRParams::default()).is_err());
        let m = svr_fit(&k, &[0.0, 1.0], &SVRParams::default()).unwrap();
        assert!(svr_predict(&m, &[1.0]).is_err());
    }
}
