//! End-to-end experiment stages with file handoff between them.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::{Estimator, ExperimentConfig, RbfGamma};
use super::dataset::{generate_dataset, Dataset};
use crate::error::{Error, Result};
use crate::kernels::{gram_matrix, GramMatrix, Provenance};
use crate::ml::{
    grid_search_cv, mse, r2, rbf_gram, scale_gamma, train_test_split, CVReport, KRRModel, Model,
    ModelSpec, SVRModel,
};
use crate::numfmt::fmt_f64;

pub const DATASET_FILE: &str = "dataset.csv";
pub const GRAM_FILE: &str = "gram.csv";
pub const RBF_GRAM_FILE: &str = "gram_rbf.csv";
pub const SPLIT_FILE: &str = "split.csv";
pub const CV_FILE: &str = "cv_report.csv";
pub const PREDICTIONS_FILE: &str = "predictions.csv";
pub const SUMMARY_FILE: &str = "summary.txt";

pub fn model_file(estimator: Estimator) -> String {
    format!("model_{}.csv", estimator.name())
}

/// Files written into an output directory, removable as a unit when a run fails.
#[derive(Debug)]
pub struct OutputSet {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputSet {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Path for `name`, recorded as an output of this run.
    pub fn create(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        p
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// Deletes everything recorded so far.
    pub fn discard(&mut self) {
        for p in self.written.drain(..) {
            let _ = std::fs::remove_file(p);
        }
    }
}

/// Path to an input produced by `stage`, or a [`Error::MissingInput`] naming that stage.
pub fn require(dir: &Path, name: &str, stage: &'static str) -> Result<PathBuf> {
    let p = dir.join(name);
    if p.is_file() {
        Ok(p)
    } else {
        Err(Error::MissingInput { stage, path: p })
    }
}

/// Train/test partition of the dataset indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl Split {
    pub fn new(cfg: &ExperimentConfig, n: usize) -> Result<Self> {
        let (train, test) = train_test_split(n, cfg.test_fraction, cfg.seed)?;
        Ok(Self { train, test })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut rows: Vec<(usize, &str)> = self
            .train
            .iter()
            .map(|&i| (i, "train"))
            .chain(self.test.iter().map(|&i| (i, "test")))
            .collect();
        rows.sort_unstable();
        let mut out = String::from("index,set\n");
        for (i, set) in rows {
            writeln!(out, "{i},{set}").unwrap();
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut split = Split {
            train: Vec::new(),
            test: Vec::new(),
        };
        for record in csv::Reader::from_path(path)?.records() {
            let record = record?;
            let parse_err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                message,
            };
            let i: usize = record[0].parse().map_err(|e| parse_err(format!("{e}")))?;
            match &record[1] {
                "train" => split.train.push(i),
                "test" => split.test.push(i),
                other => return Err(parse_err(format!("unknown set {other:?}"))),
            }
        }
        Ok(split)
    }

    pub fn set_of(&self, index: usize) -> &'static str {
        if self.test.binary_search(&index).is_ok() {
            "test"
        } else {
            "train"
        }
    }
}

/// A model selected by cross-validation and refitted on the training set.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub estimator: Estimator,
    pub spec: ModelSpec,
    /// Dataset indices of the training samples, aligned with the model coefficients.
    pub train: Vec<usize>,
    pub model: Model,
    /// RBF width for the classical baseline.
    pub rbf_gamma: Option<f64>,
}

impl FittedModel {
    /// Prediction for dataset sample `index` from a full-dataset Gram matrix.
    pub fn predict(&self, gram: &GramMatrix, index: usize) -> Result<f64> {
        let row: Vec<f64> = self.train.iter().map(|&j| gram.get(index, j)).collect();
        self.model.predict(&row)
    }

    /// Header line with the hyperparameters and intercept, then `index,coeff` rows.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        let params = match self.spec {
            ModelSpec::Svr { c, epsilon } => format!("kind=svr C={} epsilon={}", fmt_f64(c), fmt_f64(epsilon)),
            ModelSpec::Krr { alpha } => {
                let jitter = match &self.model {
                    Model::Krr(m) => m.jitter,
                    Model::Svr(_) => 0.0,
                };
                format!("kind=krr alpha={} jitter={}", fmt_f64(alpha), fmt_f64(jitter))
            }
        };
        let gamma = self.rbf_gamma.map(|g| format!(" gamma={}", fmt_f64(g))).unwrap_or_default();
        writeln!(
            out,
            "# model={} {params}{gamma} intercept={}",
            self.estimator,
            fmt_f64(self.model.intercept())
        )
        .unwrap();
        out.push_str("index,coeff\n");
        for (i, b) in self.train.iter().zip(self.model.coefficients()) {
            writeln!(out, "{i},{}", fmt_f64(*b)).unwrap();
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    /// Reads a file written by [`FittedModel::write_csv`]. Solver diagnostics are not stored.
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
            .ok_or_else(|| parse_err("missing model header".into()))?;
        let field = |key: &str| -> Result<&str> {
            meta.split_whitespace()
                .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
                .ok_or_else(|| parse_err(format!("header lacks {key}")))
        };
        let num = |key: &str| -> Result<f64> {
            field(key)?.parse().map_err(|e| parse_err(format!("{key}: {e}")))
        };
        let estimator: Estimator = field("model")?.parse()?;
        let spec = match field("kind")? {
            "svr" => ModelSpec::Svr {
                c: num("C")?,
                epsilon: num("epsilon")?,
            },
            "krr" => ModelSpec::Krr { alpha: num("alpha")? },
            other => return Err(parse_err(format!("unknown model kind {other:?}"))),
        };
        let intercept = num("intercept")?;
        let mut train = Vec::new();
        let mut coeffs = Vec::new();
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        for record in reader.records() {
            let record = record?;
            train.push(record[0].parse::<usize>().map_err(|e| parse_err(e.to_string()))?);
            coeffs.push(record[1].trim().parse::<f64>().map_err(|e| parse_err(e.to_string()))?);
        }
        let model = match spec {
            ModelSpec::Svr { c, epsilon } => Model::Svr(SVRModel {
                support: coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| **b != 0.0)
                    .map(|(i, _)| i)
                    .collect(),
                dual_coeffs: coeffs,
                intercept,
                c,
                epsilon,
                iterations: 0,
                kkt_residual: 0.0,
            }),
            ModelSpec::Krr { alpha } => Model::Krr(KRRModel {
                coeffs,
                ridge: alpha,
                jitter: num("jitter")?,
                residual: 0.0,
            }),
        };
        let rbf_gamma = match field("gamma") {
            Ok(_) => Some(num("gamma")?),
            Err(_) => None,
        };
        Ok(FittedModel {
            estimator,
            spec,
            train,
            model,
            rbf_gamma,
        })
    }
}

/// Quantum Gram matrix over every sample of the dataset.
pub fn quantum_gram(cfg: &ExperimentConfig, dataset: &Dataset) -> Result<GramMatrix> {
    gram_matrix(
        &dataset.thetas(),
        dataset.channel,
        cfg.method,
        &cfg.kernel_function()?,
        cfg.shots,
        cfg.seed,
    )
}

/// RBF Gram over the Bloch features of every sample; a "scale" width is computed
/// from the training features only.
pub fn baseline_gram(cfg: &ExperimentConfig, dataset: &Dataset, train: &[usize], gamma: RbfGamma) -> Result<GramMatrix> {
    let features = dataset.features(cfg.baseline_features);
    let gamma = match gamma {
        RbfGamma::Value(g) => g,
        RbfGamma::Scale => {
            let train_features: Vec<Vec<f64>> = train.iter().map(|&i| features[i].clone()).collect();
            scale_gamma(&train_features)?
        }
    };
    rbf_gram(&features, gamma)
}

/// One cross-validation table, tagged with its estimator and (for the baseline) RBF width.
#[derive(Debug, Clone, PartialEq)]
pub struct CvEntry {
    pub estimator: Estimator,
    pub gamma: Option<f64>,
    pub report: CVReport,
    /// Whether this table holds the estimator's selected point.
    pub chosen: bool,
}

/// Grid-searches the RBF baseline over every configured width and the SVR grid.
/// Returns all CV tables, the refitted model and the Gram of the chosen width.
pub fn fit_baseline(
    cfg: &ExperimentConfig,
    dataset: &Dataset,
    train: &[usize],
) -> Result<(Vec<CvEntry>, FittedModel, GramMatrix)> {
    let labels = dataset.labels();
    let mut entries: Vec<CvEntry> = Vec::new();
    let mut best: Option<(usize, FittedModel, GramMatrix)> = None;
    for &gamma in &cfg.rbf_gamma {
        let gram = baseline_gram(cfg, dataset, train, gamma)?;
        let g = match gram.provenance() {
            Provenance::Rbf { gamma } => *gamma,
            _ => unreachable!("rbf_gram always tags its provenance"),
        };
        let (report, mut fitted) = fit_estimator(cfg, Estimator::RbfSvm, &gram, &labels, train)?;
        fitted.rbf_gamma = Some(g);
        let better = best
            .as_ref()
            .is_none_or(|(i, _, _)| report.best_score() < entries[*i].report.best_score());
        entries.push(CvEntry {
            estimator: Estimator::RbfSvm,
            gamma: Some(g),
            report,
            chosen: false,
        });
        if better {
            best = Some((entries.len() - 1, fitted, gram));
        }
    }
    let (i, fitted, gram) = best.ok_or_else(|| Error::config("rbf_gamma list is empty"))?;
    entries[i].chosen = true;
    Ok((entries, fitted, gram))
}


/// Cross-validated selection and refit of one estimator on the training block.
pub fn fit_estimator(
    cfg: &ExperimentConfig,
    estimator: Estimator,
    gram: &GramMatrix,
    labels: &[f64],
    train: &[usize],
) -> Result<(CVReport, FittedModel)> {
    let k_train = gram.block(train, train);
    let y_train: Vec<f64> = train.iter().map(|&i| labels[i]).collect();
    let cv = grid_search_cv(&k_train, &y_train, &cfg.grid_for(estimator), cfg.cv_folds, cfg.seed)?;
    let spec = cv.best_spec();
    let model = spec.fit(&k_train, &y_train)?;
    Ok((
        cv,
        FittedModel {
            estimator,
            spec,
            train: train.to_vec(),
            model,
            rbf_gamma: None,
        },
    ))
}

/// Scores of one fitted model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelScores {
    pub estimator: Estimator,
    pub spec: ModelSpec,
    pub rbf_gamma: Option<f64>,
    pub cv_mse: Option<f64>,
    pub train_mse: f64,
    pub test_mse: f64,
    /// None when the test labels are constant.
    pub test_r2: Option<f64>,
}

/// Predictions of one model for every dataset sample.
pub fn predict_all(model: &FittedModel, gram: &GramMatrix) -> Result<Vec<f64>> {
    (0..gram.dim()).map(|i| model.predict(gram, i)).collect()
}

fn score(model: &FittedModel, predictions: &[f64], labels: &[f64], split: &Split, cv_mse: Option<f64>) -> Result<ModelScores> {
    let pick = |idx: &[usize], v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<f64>>();
    let test_true = pick(&split.test, labels);
    let test_pred = pick(&split.test, predictions);
    let test_r2 = match r2(&test_true, &test_pred) {
        Ok(v) => Some(v),
        Err(Error::UndefinedScore(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ModelScores {
        estimator: model.estimator,
        spec: model.spec,
        rbf_gamma: model.rbf_gamma,
        cv_mse,
        train_mse: mse(&pick(&split.train, labels), &pick(&split.train, predictions))?,
        test_mse: mse(&test_true, &test_pred)?,
        test_r2,
    })
}

/// One row per grid point; `best` marks each estimator's selected point.
fn write_cv_reports(entries: &[CvEntry], path: &Path) -> Result<()> {
    let mut out = String::from("model,gamma,C,epsilon,alpha,mean_mse,best\n");
    for entry in entries {
        let report = &entry.report;
        let estimator = entry.estimator;
        let gamma = entry.gamma.map(fmt_f64).unwrap_or_default();
        for (i, (spec, s)) in report.scores.iter().enumerate() {
            let (c, eps, alpha) = match *spec {
                ModelSpec::Svr { c, epsilon } => (fmt_f64(c), fmt_f64(epsilon), String::new()),
                ModelSpec::Krr { alpha } => (String::new(), String::new(), fmt_f64(alpha)),
            };
            writeln!(
                out,
                "{estimator},{gamma},{c},{eps},{alpha},{},{}",
                fmt_f64(*s),
                u8::from(entry.chosen && i == report.best)
            )
            .unwrap();
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Best mean CV-MSE per estimator, read back from `cv_report.csv`.
fn read_cv_best(path: &Path) -> Result<Vec<(Estimator, f64)>> {
    let mut best = Vec::new();
    for record in csv::Reader::from_path(path)?.records() {
        let record = record?;
        if &record[6] == "1" {
            let s = record[5].parse::<f64>().map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?;
            best.push((record[0].parse()?, s));
        }
    }
    Ok(best)
}

fn load_dataset(dir: &Path) -> Result<Dataset> {
    Dataset::read_csv(&require(dir, DATASET_FILE, "generate")?)
}

fn gram_for(estimator: Estimator, dir: &Path) -> Result<GramMatrix> {
    if estimator.is_quantum() {
        GramMatrix::read_csv(&require(dir, GRAM_FILE, "gram")?)
    } else {
        GramMatrix::read_csv(&require(dir, RBF_GRAM_FILE, "train")?)
    }
}

fn staged<T>(stage: &'static str, out: &mut OutputSet, body: impl FnOnce(&mut OutputSet) -> Result<T>) -> Result<T> {
    let start = out.written().len();
    match body(out) {
        Ok(v) => Ok(v),
        Err(e) => {
            for p in &out.written()[start..] {
                let _ = std::fs::remove_file(p);
            }
            out.written.truncate(start);
            Err(e.in_stage(stage))
        }
    }
}

/// Writes `dataset.csv`.
pub fn stage_generate(cfg: &ExperimentConfig, out: &mut OutputSet) -> Result<Dataset> {
    staged("generate", out, |out| {
        let dataset = generate_dataset(cfg)?;
        dataset.write_csv(&out.create(DATASET_FILE))?;
        Ok(dataset)
    })
}

/// Reads `dataset.csv`, writes `gram.csv`.
pub fn stage_gram(cfg: &ExperimentConfig, out: &mut OutputSet) -> Result<GramMatrix> {
    staged("gram", out, |out| {
        let dataset = load_dataset(out.dir())?;
        let gram = quantum_gram(cfg, &dataset)?;
        gram.write_csv(&out.create(GRAM_FILE))?;
        Ok(gram)
    })
}

/// Splits, cross-validates and refits every configured model. Writes `split.csv`,
/// `cv_report.csv`, one `model_<name>.csv` per model and, with the RBF baseline,
/// `gram_rbf.csv`.
pub fn stage_train(cfg: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<FittedModel>> {
    staged("train", out, |out| {
        let dataset = load_dataset(out.dir())?;
        let split = Split::new(cfg, dataset.len())?;
        split.write_csv(&out.create(SPLIT_FILE))?;
        let labels = dataset.labels();
        let mut reports = Vec::new();
        let mut models = Vec::new();
        for &estimator in &cfg.models {
            let fitted = if estimator.is_quantum() {
                let gram = gram_for(estimator, out.dir())?;
                if gram.dim() != dataset.len() {
                    return Err(Error::contract(format!(
                        "Gram matrix has dimension {} but the dataset has {} samples",
                        gram.dim(),
                        dataset.len()
                    )));
                }
                let (report, fitted) = fit_estimator(cfg, estimator, &gram, &labels, &split.train)?;
                reports.push(CvEntry {
                    estimator,
                    gamma: None,
                    report,
                    chosen: true,
                });
                fitted
            } else {
                let (entries, fitted, gram) = fit_baseline(cfg, &dataset, &split.train)?;
                gram.write_csv(&out.create(RBF_GRAM_FILE))?;
                reports.extend(entries);
                fitted
            };
            fitted.write_csv(&out.create(&model_file(estimator)))?;
            models.push(fitted);
        }
        write_cv_reports(&reports, &out.create(CV_FILE))?;
        Ok(models)
    })
}

/// Predicts every sample with the stored models. Writes `predictions.csv` and `summary.txt`.
pub fn stage_evaluate(cfg: &ExperimentConfig, out: &mut OutputSet) -> Result<Vec<ModelScores>> {
    staged("evaluate", out, |out| {
        let dir = out.dir().to_path_buf();
        let dataset = load_dataset(&dir)?;
        let split = Split::read_csv(&require(&dir, SPLIT_FILE, "train")?)?;
        let cv_best = read_cv_best(&require(&dir, CV_FILE, "train")?)?;
        let labels = dataset.labels();
        let mut columns = Vec::new();
        let mut scores = Vec::new();
        for &estimator in &cfg.models {
            let model = FittedModel::read_csv(&require(&dir, &model_file(estimator), "train")?)?;
            let gram = gram_for(estimator, &dir)?;
            let pred = predict_all(&model, &gram)?;
            let cv = cv_best.iter().find(|(e, _)| *e == estimator).map(|(_, s)| *s);
            scores.push(score(&model, &pred, &labels, &split, cv)?);
            columns.push((estimator, pred));
        }

        let mut csv_out = String::from("index,set,label");
        for (e, _) in &columns {
            write!(csv_out, ",{e}").unwrap();
        }
        csv_out.push('\n');
        for i in 0..dataset.len() {
            write!(csv_out, "{i},{},{}", split.set_of(i), fmt_f64(labels[i])).unwrap();
            for (_, p) in &columns {
                write!(csv_out, ",{}", fmt_f64(p[i])).unwrap();
            }
            csv_out.push('\n');
        }
        std::fs::write(out.create(PREDICTIONS_FILE), csv_out)?;
        std::fs::write(out.create(SUMMARY_FILE), summary_text(cfg, &split, &scores)?)?;
        Ok(scores)
    })
}

fn summary_text(cfg: &ExperimentConfig, split: &Split, scores: &[ModelScores]) -> Result<String> {
    let mut s = String::new();
    writeln!(s, "channel = {}", cfg.channel).unwrap();
    writeln!(
        s,
        "samples = {} (train {}, test {})",
        split.train.len() + split.test.len(),
        split.train.len(),
        split.test.len()
    )
    .unwrap();
    writeln!(
        s,
        "kernel = {} / {}, shots = {}, seed = {}",
        cfg.method,
        cfg.kernel_function()?,
        cfg.shots,
        cfg.seed
    )
    .unwrap();
    for m in scores {
        writeln!(s, "\n[{}]", m.estimator).unwrap();
        writeln!(s, "best = {}", m.spec).unwrap();
        if let Some(g) = m.rbf_gamma {
            writeln!(s, "rbf_gamma = {}", fmt_f64(g)).unwrap();
        }
        if let Some(cv) = m.cv_mse {
            writeln!(s, "cv_mse = {}", fmt_f64(cv)).unwrap();
        }
        writeln!(s, "train_mse = {}", fmt_f64(m.train_mse)).unwrap();
        writeln!(s, "test_mse = {}", fmt_f64(m.test_mse)).unwrap();
        match m.test_r2 {
            Some(r) => writeln!(s, "test_r2 = {}", fmt_f64(r)).unwrap(),
            None => writeln!(s, "test_r2 = undefined").unwrap(),
        }
    }
    Ok(s)
}

/// generate → gram → train → evaluate into `cfg.out_dir`. On failure every file
/// written by this run is removed and the error names the failing stage.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ModelScores>> {
    cfg.validate().map_err(|e| e.in_stage("config"))?;
    let mut out = OutputSet::new(&cfg.out_dir).map_err(|e| e.in_stage("config"))?;
    let result = (|| {
        stage_generate(cfg, &mut out)?;
        stage_gram(cfg, &mut out)?;
        stage_train(cfg, &mut out)?;
        stage_evaluate(cfg, &mut out)
    })();
    if result.is_err() {
        out.discard();
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::ChannelKind;
    use crate::qsim::Shots;

    fn tiny(dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            channel: ChannelKind::AmplitudeDamping,
            sweep_points: 20,
            grid_points: 300,
            shots: Shots::Infinite,
            cv_folds: 3,
            out_dir: dir.to_path_buf(),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn end_to_end_writes_all_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny(dir.path());
        let scores = run_experiment(&cfg).unwrap();
        assert_eq!(scores.len(), 3);
        for f in [DATASET_FILE, GRAM_FILE, RBF_GRAM_FILE, SPLIT_FILE, CV_FILE, PREDICTIONS_FILE, SUMMARY_FILE] {
            assert!(dir.path().join(f).is_file(), "{f}");
        }
        for e in Estimator::ALL {
            assert!(dir.path().join(model_file(e)).is_file());
        }
    }

    #[test]
    fn model_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny(dir.path());
        let mut out = OutputSet::new(dir.path()).unwrap();
        stage_generate(&cfg, &mut out).unwrap();
        stage_gram(&cfg, &mut out).unwrap();
        let models = stage_train(&cfg, &mut out).unwrap();
        for m in &models {
            let back = FittedModel::read_csv(&dir.path().join(model_file(m.estimator))).unwrap();
            assert_eq!(back.spec, m.spec);
            assert_eq!(back.train, m.train);
            assert_eq!(back.model.coefficients(), m.model.coefficients());
            assert_eq!(back.model.intercept(), m.model.intercept());
            assert_eq!(back.rbf_gamma, m.rbf_gamma);
            if let (Model::Krr(a), Model::Krr(b)) = (&back.model, &m.model) {
                assert_eq!(a.jitter, b.jitter);
            }
        }
    }

    #[test]
    fn missing_input_names_stage() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny(dir.path());
        let mut out = OutputSet::new(dir.path()).unwrap();
        let err = stage_gram(&cfg, &mut out).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("gram") && msg.contains("generate"), "{msg}");
    }

    #[test]
    fn failure_removes_partial_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            // More folds than training samples fails during training.
            sweep_points: 4,
            cv_folds: 4,
            ..tiny(dir.path())
        };
        let err = run_experiment(&cfg).unwrap_err();
        assert!(matches!(err, Error::Stage { stage: "train", .. }), "{err}");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    }
}
