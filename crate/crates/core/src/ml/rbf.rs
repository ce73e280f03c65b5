//! Classical radial-basis-function kernel on real feature vectors.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernels::{GramMatrix, Provenance};

fn check_features(features: &[Vec<f64>]) -> Result<usize> {
    let dim = features
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::contract("no feature vectors"))?;
    if let Some(bad) = features.iter().position(|f| f.len() != dim) {
        return Err(Error::contract(format!(
            "feature vector {bad} has {} entries, expected {dim}",
            features[bad].len()
        )));
    }
    Ok(dim)
}

/// K(i, j) = exp(−γ ‖uᵢ − uⱼ‖²).
pub fn rbf_gram(features: &[Vec<f64>], gamma: f64) -> Result<GramMatrix> {
    check_features(features)?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::contract(format!("RBF gamma must be positive, got {gamma}")));
    }
    let n = features.len();
    let mut values = DMatrix::zeros(n, n);
    for i in 0..n {
        values[(i, i)] = 1.0;
        for j in (i + 1)..n {
            let d2: f64 = features[i]
                .iter()
                .zip(&features[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let v = (-gamma * d2).exp();
            values[(i, j)] = v;
            values[(j, i)] = v;
        }
    }
    GramMatrix::from_values(values, Provenance::Rbf { gamma })
}

/// γ = 1 / (d · Var(X)) over all feature entries; falls back to 1/d for constant features.
pub fn scale_gamma(features: &[Vec<f64>]) -> Result<f64> {
    let d = check_features(features)?;
    let all: Vec<f64> = features.iter().flatten().copied().collect();
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    let var = all.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / all.len() as f64;
    Ok(if var > 0.0 { 1.0 / (d as f64 * var) } else { 1.0 / d as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identical_features_give_one() {
        let g = rbf_gram(&[vec![0.3, -0.2, 0.9], vec![0.3, -0.2, 0.9]], 2.5).unwrap();
        assert_eq!(g.get(0, 1), 1.0);
        assert_eq!(g.get(1, 1), 1.0);
    }

    #[test]
    fn unit_exponent() {
        let gamma = 4.0;
        // ‖u − v‖² = 0.25 = 1/γ.
        let g = rbf_gram(&[vec![0.0, 0.0], vec![0.3, 0.4]], gamma).unwrap();
        assert_abs_diff_eq!(g.get(0, 1), (-1.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn three_vectors_by_hand() {
        let f = [vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.5]];
        let g = rbf_gram(&f, 0.5).unwrap();
        // ‖f0−f1‖² = 2, ‖f0−f2‖² = 1.25, ‖f1−f2‖² = 1.25.
        assert_abs_diff_eq!(g.get(0, 1), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(g.get(0, 2), (-0.625f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(g.get(2, 1), (-0.625f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn mismatched_dimensions() {
        assert!(rbf_gram(&[vec![1.0], vec![1.0, 2.0]], 1.0).is_err());
        assert!(rbf_gram(&[vec![1.0]], 0.0).is_err());
        assert!(rbf_gram(&[], 1.0).is_err());
    }

    #[test]
    fn scale_gamma_matches_definition() {
        let f = [vec![0.0, 1.0], vec![1.0, 0.0]];
        // Entries {0,1,1,0}: variance 0.25, d = 2 → γ = 2.
        assert_abs_diff_eq!(scale_gamma(&f).unwrap(), 2.0, epsilon = 1e-15);
    }
}
