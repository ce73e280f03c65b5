use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{kfold, mse, ModelSpec, DEFAULT_JITTER};
use crate::error::{Error, Result};
use crate::numfmt::fmt_f64;

/// Mean validation MSE for each grid point and the selected point.
#[derive(Debug, Clone, PartialEq)]
pub struct CVReport {
    pub scores: Vec<(ModelSpec, f64)>,
    pub best: usize,
    pub folds: usize,
    pub seed: u64,
}

impl CVReport {
    pub fn best_spec(&self) -> ModelSpec {
        self.scores[self.best].0
    }

    pub fn best_score(&self) -> f64 {
        self.scores[self.best].1
    }

    /// Columns: model, C, epsilon, alpha, mean_mse, best. Unused hyperparameters are empty.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        writeln!(out, "# folds={} seed={}", self.folds, self.seed)?;
        writeln!(out, "model,C,epsilon,alpha,mean_mse,best")?;
        for (i, (spec, score)) in self.scores.iter().enumerate() {
            let (c, eps, alpha) = match *spec {
                ModelSpec::Svr { c, epsilon } => (fmt_f64(c), fmt_f64(epsilon), String::new()),
                ModelSpec::Krr { alpha } => (String::new(), String::new(), fmt_f64(alpha)),
            };
            writeln!(
                out,
                "{},{c},{eps},{alpha},{},{}",
                spec.kind(),
                fmt_f64(*score),
                u8::from(i == self.best)
            )?;
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// K-fold grid search over `grid` on the training Gram `k`. Each fold fits on the
/// train block and predicts from the (validation × train) block. Ties go to the
/// earliest grid point. A KRR point whose system is not positive definite on some
/// fold scores +∞; the search fails only if every point does.
pub fn grid_search_cv(
    k: &DMatrix<f64>,
    y: &[f64],
    grid: &[ModelSpec],
    folds: usize,
    seed: u64,
) -> Result<CVReport> {
    if grid.is_empty() {
        return Err(Error::contract("hyperparameter grid is empty"));
    }
    if k.nrows() != y.len() || k.ncols() != y.len() {
        return Err(Error::contract(format!(
            "Gram matrix is {}x{} but {} labels were given",
            k.nrows(),
            k.ncols(),
            y.len()
        )));
    }
    let parts = kfold(y.len(), folds, seed)?;
    let splits: Vec<(Vec<usize>, Vec<usize>)> = parts
        .iter()
        .enumerate()
        .map(|(f, val)| {
            let train = parts
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != f)
                .flat_map(|(_, p)| p.iter().copied())
                .collect::<Vec<_>>();
            let mut train = train;
            train.sort_unstable();
            (train, val.clone())
        })
        .collect();

    let scores = grid
        .par_iter()
        .map(|spec| {
            let fold_mse = splits
                .par_iter()
                .map(|(train, val)| {
                    let k_train = k.select_rows(train).select_columns(train);
                    let y_train: Vec<f64> = train.iter().map(|&i| y[i]).collect();
                    let model = match spec.fit(&k_train, &y_train) {
                        Ok(m) => m,
                        Err(Error::NotPositiveDefinite { .. }) => return Ok(f64::INFINITY),
                        Err(e) => return Err(e),
                    };
                    let k_val = k.select_rows(val).select_columns(train);
                    let pred = model.predict_block(&k_val)?;
                    let y_val: Vec<f64> = val.iter().map(|&i| y[i]).collect();
                    mse(&y_val, &pred)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok((*spec, fold_mse.iter().sum::<f64>() / fold_mse.len() as f64))
        })
        .collect::<Result<Vec<(ModelSpec, f64)>>>()?;

    let mut best = 0;
    for (i, (_, s)) in scores.iter().enumerate() {
        if *s < scores[best].1 {
            best = i;
        }
    }
    if !scores[best].1.is_finite() {
        return Err(Error::NotPositiveDefinite {
            ridge: match scores[best].0 {
                ModelSpec::Krr { alpha } => alpha,
                ModelSpec::Svr { .. } => 0.0,
            },
            jitter: DEFAULT_JITTER,
        });
    }
    Ok(CVReport { scores, best, folds, seed })
}
