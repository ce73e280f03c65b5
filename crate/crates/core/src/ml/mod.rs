//! Regression on precomputed kernels: ε-SVR, kernel ridge regression, the RBF
//! baseline kernel, seeded splits, cross-validated grid search and metrics.

mod cv;
mod krr;
mod metrics;
mod rbf;
mod split;
mod svr;

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use cv::{grid_search_cv, CVReport};
pub use krr::{auto_jitter, krr_fit, krr_predict, KRRModel, DEFAULT_JITTER};
pub use metrics::{mse, r2};
pub use rbf::{rbf_gram, scale_gamma};
pub use split::{kfold, train_test_split};
pub use svr::{svr_fit, svr_fit_traced, svr_predict, SVRModel, SVRParams, SvrTrace};

use crate::error::{Error, Result};

/// Model family named on the command line and in configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Svr,
    Krr,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Svr => "svr",
            ModelKind::Krr => "krr",
        }
    }

    /// Hyperparameter grid searched when none is configured.
    pub fn default_grid(&self) -> Vec<ModelSpec> {
        match self {
            ModelKind::Svr => {
                let cs = [0.1, 0.2, 0.4, 1.0, 10.0, 100.0];
                let eps = [1e-3, 1e-2];
                cs.iter()
                    .flat_map(|&c| eps.iter().map(move |&epsilon| ModelSpec::Svr { c, epsilon }))
                    .collect()
            }
            ModelKind::Krr => [1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 2e-1]
                .iter()
                .map(|&alpha| ModelSpec::Krr { alpha })
                .collect(),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "svr" | "svm" | "qsvm" => Ok(ModelKind::Svr),
            "krr" | "qkrr" => Ok(ModelKind::Krr),
            other => Err(Error::config(format!("unknown model kind '{other}'"))),
        }
    }
}

/// One hyperparameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Svr { c: f64, epsilon: f64 },
    Krr { alpha: f64 },
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Svr { .. } => ModelKind::Svr,
            ModelSpec::Krr { .. } => ModelKind::Krr,
        }
    }

    /// Fits on a training Gram block. KRR uses [`auto_jitter`] so that shot-noisy,
    /// indefinite kernels remain solvable.
    pub fn fit(&self, k: &DMatrix<f64>, y: &[f64]) -> Result<Model> {
        match *self {
            ModelSpec::Svr { c, epsilon } => {
                svr_fit(k, y, &SVRParams::new(c, epsilon)).map(Model::Svr)
            }
            ModelSpec::Krr { alpha } => krr_fit(k, y, alpha, auto_jitter(k)).map(Model::Krr),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Svr { c, epsilon } => write!(f, "svr(C={c}, epsilon={epsilon})"),
            ModelSpec::Krr { alpha } => write!(f, "krr(alpha={alpha})"),
        }
    }
}

/// A fitted model of either family.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Svr(SVRModel),
    Krr(KRRModel),
}

impl Model {
    pub fn predict(&self, k_row: &[f64]) -> Result<f64> {
        match self {
            Model::Svr(m) => svr_predict(m, k_row),
            Model::Krr(m) => krr_predict(m, k_row),
        }
    }

    /// Predictions for every row of a (test × train) kernel block.
    pub fn predict_block(&self, k: &DMatrix<f64>) -> Result<Vec<f64>> {
        (0..k.nrows())
            .map(|r| {
                let row: Vec<f64> = k.row(r).iter().copied().collect();
                self.predict(&row)
            })
            .collect()
    }

    /// Per-sample coefficients: αᵢ − αᵢ* for SVR, βᵢ for KRR.
    pub fn coefficients(&self) -> &[f64] {
        match self {
            Model::Svr(m) => &m.dual_coeffs,
            Model::Krr(m) => &m.coeffs,
        }
    }

    pub fn intercept(&self) -> f64 {
        match self {
            Model::Svr(m) => m.intercept,
            Model::Krr(_) => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids() {
        assert_eq!(ModelKind::Svr.default_grid().len(), 12);
        assert_eq!(ModelKind::Krr.default_grid().len(), 6);
        assert_eq!(
            ModelKind::Svr.default_grid()[1],
            ModelSpec::Svr { c: 0.1, epsilon: 1e-2 }
        );
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("QSVM".parse::<ModelKind>().unwrap(), ModelKind::Svr);
        assert_eq!("krr".parse::<ModelKind>().unwrap(), ModelKind::Krr);
        assert!("lasso".parse::<ModelKind>().is_err());
    }

    #[test]
    fn dispatch_predicts_training_labels_under_small_ridge() {
        let k = DMatrix::identity(3, 3);
        let y = [0.2, 0.4, 0.6];
        let m = ModelSpec::Krr { alpha: 1e-12 }.fit(&k, &y).unwrap();
        let p = m.predict_block(&k).unwrap();
        for (a, b) in p.iter().zip(y) {
            assert!((a - b).abs() < 1e-7);
        }
        assert_eq!(m.intercept(), 0.0);
    }
}
