//! Kernel ridge regression on a precomputed kernel.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use super::svr::check_training_inputs;
use crate::error::{Error, Result};

/// Default diagonal jitter added to K + αI before factorization.
pub const DEFAULT_JITTER: f64 = 1e-8;

/// Smallest jitter that makes K + jitter·I positive definite with margin
/// [`DEFAULT_JITTER`]: the default when K is PSD, otherwise DEFAULT_JITTER − λ_min(K).
pub fn auto_jitter(k: &DMatrix<f64>) -> f64 {
    if k.is_empty() {
        return DEFAULT_JITTER;
    }
    let lambda_min = SymmetricEigen::new(k.clone()).eigenvalues.min();
    DEFAULT_JITTER + (-lambda_min).max(0.0)
}

/// Fitted KRR: f(x) = Σᵢ βᵢ k(xᵢ, x), no intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct KRRModel {
    pub coeffs: Vec<f64>,
    pub ridge: f64,
    pub jitter: f64,
    /// ‖(K + (α + jitter) I) β − y‖ after the solve.
    pub residual: f64,
}

/// Solves (K + αI + jitter·I) β = y by Cholesky with iterative refinement.
pub fn krr_fit(k: &DMatrix<f64>, y: &[f64], ridge: f64, jitter: f64) -> Result<KRRModel> {
    check_training_inputs(k, y)?;
    if !(ridge > 0.0 && ridge.is_finite()) {
        return Err(Error::contract(format!("KRR: ridge must be positive, got {ridge}")));
    }
    if !(jitter >= 0.0 && jitter.is_finite()) {
        return Err(Error::contract(format!("KRR: jitter must be non-negative, got {jitter}")));
    }
    let n = y.len();
    let mut a = k.clone();
    for i in 0..n {
        a[(i, i)] += ridge + jitter;
    }
    let chol = Cholesky::new(a.clone()).ok_or(Error::NotPositiveDefinite { ridge, jitter })?;
    let rhs = DVector::from_column_slice(y);
    let mut beta = chol.solve(&rhs);
    let mut residual_vec = &rhs - &a * &beta;
    for _ in 0..2 {
        if residual_vec.norm() <= 1e-12 * rhs.norm() {
            break;
        }
        beta += chol.solve(&residual_vec);
        residual_vec = &rhs - &a * &beta;
    }
    Ok(KRRModel {
        coeffs: beta.iter().copied().collect(),
        ridge,
        jitter,
        residual: residual_vec.norm(),
    })
}

pub fn krr_predict(model: &KRRModel, k_row: &[f64]) -> Result<f64> {
    if k_row.len() != model.coeffs.len() {
        return Err(Error::contract(format!(
            "kernel row has {} entries, model was trained on {}",
            k_row.len(),
            model.coeffs.len()
        )));
    }
    Ok(model.coeffs.iter().zip(k_row).map(|(b, k)| b * k).sum())
}
