//! Configuration-driven experiments: dataset generation, Gram construction,
//! training, evaluation and plot-data emission.

mod config;
mod dataset;
mod experiment;
mod plots;

pub use config::{Estimator, ExperimentConfig, FeatureSource, RbfGamma};
pub use dataset::{generate_dataset, Dataset, Sample};
pub use experiment::{
    baseline_gram, fit_baseline, fit_estimator, model_file, predict_all, quantum_gram, require, run_experiment,
    stage_evaluate, stage_generate, stage_gram, stage_train, CvEntry, FittedModel, ModelScores, OutputSet,
    Split, CV_FILE, DATASET_FILE, GRAM_FILE, PREDICTIONS_FILE, RBF_GRAM_FILE, SPLIT_FILE,
    SUMMARY_FILE,
};
pub use plots::{
    circuit_sweep, emit_plot_data, function_sweep, CircuitResult, FunctionResult, PlotKind,
    FIG4_PARAMS,
};
