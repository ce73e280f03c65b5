//! Plot-ready CSV tables and the kernel comparison sweeps behind them.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::dataset::Dataset;
use super::experiment::{require, DATASET_FILE, PREDICTIONS_FILE};
use crate::error::{Error, Result};
use crate::kernels::{gram_matrix, kernel_value, GramMatrix, KernelFunction, OverlapMethod, Provenance};
use crate::ml::{grid_search_cv, mse, ModelKind, ModelSpec};
use crate::numfmt::fmt_f64;

/// Fixed SVR hyperparameters of the kernel-circuit comparison.
pub const FIG4_PARAMS: ModelSpec = ModelSpec::Svr { c: 0.5, epsilon: 0.01 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Exact vs shot-sampled Bloch expectations.
    Fig3,
    /// 𝒩 vs θ with training predictions per overlap circuit.
    Fig4,
    /// Predictions vs ground truth per model.
    Fig5,
    /// 𝒩 vs θ with predictions per kernel function.
    Fig6,
}

impl PlotKind {
    pub const ALL: [PlotKind; 4] = [PlotKind::Fig3, PlotKind::Fig4, PlotKind::Fig5, PlotKind::Fig6];

    pub fn name(&self) -> &'static str {
        match self {
            PlotKind::Fig3 => "fig3",
            PlotKind::Fig4 => "fig4",
            PlotKind::Fig5 => "fig5",
            PlotKind::Fig6 => "fig6",
        }
    }
}

impl fmt::Display for PlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::config(format!("unknown plot {s:?} (expected fig3, fig4, fig5 or fig6)")))
    }
}

/// Training-set fit of one overlap circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitResult {
    pub method: OverlapMethod,
    pub predictions: Vec<f64>,
    pub train_mse: f64,
}

/// Fits SVR with [`FIG4_PARAMS`] on the whole dataset for each circuit estimator
/// and predicts the training samples.
pub fn circuit_sweep(cfg: &ExperimentConfig, dataset: &Dataset) -> Result<Vec<CircuitResult>> {
    let function = cfg.kernel_function()?;
    let labels = dataset.labels();
    OverlapMethod::CIRCUITS
        .par_iter()
        .map(|&method| {
            let gram = gram_matrix(&dataset.thetas(), dataset.channel, method, &function, cfg.shots, cfg.seed)?;
            let model = FIG4_PARAMS.fit(gram.values(), &labels)?;
            let predictions = model.predict_block(gram.values())?;
            Ok(CircuitResult {
                method,
                train_mse: mse(&labels, &predictions)?,
                predictions,
            })
        })
        .collect()
}

/// Cross-validated fit of one kernel function.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionResult {
    pub function: KernelFunction,
    pub best: ModelSpec,
    pub cv_mse: f64,
    pub predictions: Vec<f64>,
    pub train_mse: f64,
}

/// Grid-searches SVR on the configured circuit for each of the linear,
/// polynomial and exponential kernel functions. Overlaps are estimated once and
/// shared across functions.
pub fn function_sweep(cfg: &ExperimentConfig, dataset: &Dataset) -> Result<Vec<FunctionResult>> {
    let identity = KernelFunction::Linear { c: 0.0 };
    let raw = gram_matrix(&dataset.thetas(), dataset.channel, cfg.method, &identity, cfg.shots, cfg.seed)?;
    let overlaps = raw.values();
    let labels = dataset.labels();
    let grid = cfg.grid_for(super::config::Estimator::Qsvm);
    debug_assert!(grid.iter().all(|s| s.kind() == ModelKind::Svr));
    KernelFunction::comparison_set()
        .par_iter()
        .map(|function| {
            let gram = GramMatrix::from_values(overlaps.map(|x| kernel_value(x, function)), Provenance::Explicit)?;
            let cv = grid_search_cv(gram.values(), &labels, &grid, cfg.cv_folds, cfg.seed)?;
            let model = cv.best_spec().fit(gram.values(), &labels)?;
            let predictions = model.predict_block(gram.values())?;
            Ok(FunctionResult {
                function: *function,
                best: cv.best_spec(),
                cv_mse: cv.best_score(),
                train_mse: mse(&labels, &predictions)?,
                predictions,
            })
        })
        .collect()
}

fn fig3(dataset: &Dataset) -> String {
    let mut s = String::from("theta,sx_exact,sy_exact,sz_exact,sx_shot,sy_shot,sz_shot\n");
    for x in &dataset.samples {
        let cols: Vec<String> = std::iter::once(x.theta)
            .chain(x.bloch_exact)
            .chain(x.bloch_shot)
            .map(fmt_f64)
            .collect();
        writeln!(s, "{}", cols.join(",")).unwrap();
    }
    s
}

fn fig4(dataset: &Dataset, results: &[CircuitResult]) -> String {
    let mut s = String::from("method,index,theta,label,prediction\n");
    for r in results {
        for (i, (x, p)) in dataset.samples.iter().zip(&r.predictions).enumerate() {
            writeln!(s, "{},{i},{},{},{}", r.method, fmt_f64(x.theta), fmt_f64(x.label), fmt_f64(*p)).unwrap();
        }
    }
    s
}

fn fig6(dataset: &Dataset, results: &[FunctionResult]) -> String {
    let mut s = String::from("function,index,theta,label,prediction\n");
    for r in results {
        for (i, (x, p)) in dataset.samples.iter().zip(&r.predictions).enumerate() {
            writeln!(s, "{},{i},{},{},{}", r.function.name(), fmt_f64(x.theta), fmt_f64(x.label), fmt_f64(*p)).unwrap();
        }
    }
    s
}

/// Long-format view of `predictions.csv`: one row per (model, sample).
fn fig5(predictions_path: &Path) -> Result<String> {
    let mut reader = csv::Reader::from_path(predictions_path)?;
    let headers = reader.headers()?.clone();
    let models: Vec<String> = headers.iter().skip(3).map(str::to_string).collect();
    let records = reader.records().collect::<std::result::Result<Vec<_>, _>>()?;
    let mut s = String::from("model,index,set,label,prediction\n");
    for (m, name) in models.iter().enumerate() {
        for r in &records {
            writeln!(s, "{name},{},{},{},{}", &r[0], &r[1], &r[2], &r[3 + m]).unwrap();
        }
    }
    Ok(s)
}

/// Writes `<which>.csv` into `cfg.out_dir` from earlier outputs. fig4 and fig6 also
/// write `sweep_circuits.csv` / `sweep_functions.csv` with per-curve scores.
/// Returns the paths written.
pub fn emit_plot_data(cfg: &ExperimentConfig, which: PlotKind) -> Result<Vec<PathBuf>> {
    let dir = &cfg.out_dir;
    let stage = "report";
    let run = || -> Result<Vec<PathBuf>> {
        let target = dir.join(format!("{which}.csv"));
        match which {
            PlotKind::Fig5 => {
                let text = fig5(&require(dir, PREDICTIONS_FILE, "evaluate")?)?;
                std::fs::write(&target, text)?;
                Ok(vec![target])
            }
            _ => {
                let dataset = Dataset::read_csv(&require(dir, DATASET_FILE, "generate")?)?;
                match which {
                    PlotKind::Fig3 => {
                        std::fs::write(&target, fig3(&dataset))?;
                        Ok(vec![target])
                    }
                    PlotKind::Fig4 => {
                        let results = circuit_sweep(cfg, &dataset)?;
                        let mut summary = String::from("method,train_mse\n");
                        for r in &results {
                            writeln!(summary, "{},{}", r.method, fmt_f64(r.train_mse)).unwrap();
                        }
                        let side = dir.join("sweep_circuits.csv");
                        std::fs::write(&target, fig4(&dataset, &results))?;
                        std::fs::write(&side, summary)?;
                        Ok(vec![target, side])
                    }
                    _ => {
                        let results = function_sweep(cfg, &dataset)?;
                        let mut summary = String::from("function,best,cv_mse,train_mse\n");
                        for r in &results {
                            writeln!(
                                summary,
                                "{},\"{}\",{},{}",
                                r.function,
                                r.best,
                                fmt_f64(r.cv_mse),
                                fmt_f64(r.train_mse)
                            )
                            .unwrap();
                        }
                        let side = dir.join("sweep_functions.csv");
                        std::fs::write(&target, fig6(&dataset, &results))?;
                        std::fs::write(&side, summary)?;
                        Ok(vec![target, side])
                    }
                }
            }
        }
    };
    run().map_err(|e| e.in_stage(stage))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::ChannelKind;
    use crate::pipeline::{generate_dataset, run_experiment};
    use crate::qsim::Shots;

    fn small(dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            channel: ChannelKind::AmplitudeDamping,
            sweep_points: 12,
            grid_points: 300,
            shots: Shots::Finite(512),
            cv_folds: 3,
            out_dir: dir.to_path_buf(),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn fig3_schema_and_flat_y() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small(dir.path());
        generate_dataset(&cfg).unwrap().write_csv(&dir.path().join(DATASET_FILE)).unwrap();
        let paths = emit_plot_data(&cfg, PlotKind::Fig3).unwrap();
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "theta,sx_exact,sy_exact,sz_exact,sx_shot,sy_shot,sz_shot");
        for l in lines {
            let sy: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
            assert!(sy.abs() < 1e-12);
        }
    }

    #[test]
    fn fig4_cardinality() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small(dir.path());
        generate_dataset(&cfg).unwrap().write_csv(&dir.path().join(DATASET_FILE)).unwrap();
        let paths = emit_plot_data(&cfg, PlotKind::Fig4).unwrap();
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        assert_eq!(text.lines().count(), 1 + 12 * 4);
    }

    #[test]
    fn fig5_from_predictions() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small(dir.path());
        run_experiment(&cfg).unwrap();
        let paths = emit_plot_data(&cfg, PlotKind::Fig5).unwrap();
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        assert_eq!(text.lines().count(), 1 + 12 * cfg.models.len());
    }

    #[test]
    fn missing_inputs_name_prior_stage() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small(dir.path());
        let msg = emit_plot_data(&cfg, PlotKind::Fig5).unwrap_err().to_string();
        assert!(msg.contains("evaluate"), "{msg}");
        let msg = emit_plot_data(&cfg, PlotKind::Fig6).unwrap_err().to_string();
        assert!(msg.contains("generate"), "{msg}");
    }
}
