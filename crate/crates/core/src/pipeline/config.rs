//! Experiment configuration, stored as a flat TOML table.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::channels::{ADParams, ChannelKind, ChannelParams, PDParams};
use crate::error::{Error, Result};
use crate::kernels::{KernelFunction, OverlapMethod};
use crate::ml::{ModelKind, ModelSpec};
use crate::nonmarkov::TimeGrid;
use crate::qsim::Shots;

/// A model fitted and scored by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Estimator {
    /// ε-SVR on the quantum Gram matrix.
    #[serde(rename = "qsvm")]
    Qsvm,
    /// Kernel ridge on the quantum Gram matrix.
    #[serde(rename = "qkrr")]
    Qkrr,
    /// ε-SVR on an RBF kernel over Bloch-vector features.
    #[serde(rename = "rbf-svm")]
    RbfSvm,
}

impl Estimator {
    pub const ALL: [Estimator; 3] = [Estimator::Qsvm, Estimator::Qkrr, Estimator::RbfSvm];

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Qsvm => "qsvm",
            Estimator::Qkrr => "qkrr",
            Estimator::RbfSvm => "rbf-svm",
        }
    }

    pub fn model_kind(&self) -> ModelKind {
        match self {
            Estimator::Qsvm | Estimator::RbfSvm => ModelKind::Svr,
            Estimator::Qkrr => ModelKind::Krr,
        }
    }

    pub fn is_quantum(&self) -> bool {
        !matches!(self, Estimator::RbfSvm)
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::config(format!("unknown model {s:?} (expected qsvm, qkrr or rbf-svm)")))
    }
}

/// Width of the RBF baseline kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RbfGamma {
    /// 1 / (d · Var(features)).
    Scale,
    Value(f64),
}

impl Serialize for RbfGamma {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RbfGamma::Scale => s.serialize_str("scale"),
            RbfGamma::Value(g) => s.serialize_f64(*g),
        }
    }
}

impl<'de> Deserialize<'de> for RbfGamma {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(g) => Ok(RbfGamma::Value(g)),
            Raw::Int(g) => Ok(RbfGamma::Value(g as f64)),
            Raw::Str(s) if s == "scale" => Ok(RbfGamma::Scale),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "rbf_gamma must be a number or \"scale\", got {s:?}"
            ))),
        }
    }
}

/// Which Bloch features feed the RBF baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSource {
    Exact,
    Sampled,
}

/// Every knob of an experiment. Keys left out of a config file take the defaults
/// below; `sweep_min`, `sweep_max` and `t_star` default per channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub channel: ChannelKind,
    /// Non-Markovianity control ratio: λ/γ₀ for AD, ατ for PD.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_max: Option<f64>,
    pub sweep_points: usize,
    /// Explicit ratios; overrides the uniform range when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_values: Option<Vec<f64>>,
    pub gamma0: f64,
    pub tau: f64,
    /// Snapshot time; defaults to 1/γ₀ (AD) or τ/2 (PD).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_star: Option<f64>,
    pub grid_points: usize,
    /// Trajectory length in units of the channel time scale.
    pub grid_horizon: f64,
    pub method: OverlapMethod,
    /// "linear", "polynomial" or "exponential".
    pub kernel: String,
    pub kernel_c: f64,
    pub kernel_degree: u32,
    pub kernel_sigma: f64,
    pub shots: Shots,
    pub seed: u64,
    pub models: Vec<Estimator>,
    pub svr_c: Vec<f64>,
    pub svr_epsilon: Vec<f64>,
    pub krr_alpha: Vec<f64>,
    pub cv_folds: usize,
    pub test_fraction: f64,
    /// Widths searched for the RBF baseline, jointly with the SVR grid.
    pub rbf_gamma: Vec<RbfGamma>,
    pub baseline_features: FeatureSource,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let grid = TimeGrid::default();
        Self {
            channel: ChannelKind::AmplitudeDamping,
            sweep_min: None,
            sweep_max: None,
            sweep_points: 200,
            sweep_values: None,
            gamma0: 1.0,
            tau: 1.0,
            t_star: None,
            grid_points: grid.points,
            grid_horizon: grid.horizon,
            method: OverlapMethod::InversionTest,
            kernel: "exponential".into(),
            kernel_c: 0.0,
            kernel_degree: 3,
            kernel_sigma: 3.0,
            shots: Shots::Finite(8192),
            seed: 42,
            models: Estimator::ALL.to_vec(),
            svr_c: vec![0.1, 0.2, 0.4, 1.0, 10.0, 100.0],
            svr_epsilon: vec![1e-3, 1e-2],
            krr_alpha: vec![1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 2e-1],
            cv_folds: 5,
            test_fraction: 0.2,
            rbf_gamma: vec![RbfGamma::Scale, RbfGamma::Value(1.0), RbfGamma::Value(10.0), RbfGamma::Value(100.0)],
            baseline_features: FeatureSource::Exact,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    /// Defaults for `channel`.
    pub fn for_channel(channel: ChannelKind) -> Self {
        Self {
            channel,
            ..Self::default()
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Inclusive sweep range, with per-channel defaults.
    pub fn sweep_range(&self) -> (f64, f64) {
        let max_default = match self.channel {
            ChannelKind::AmplitudeDamping => 3.0,
            ChannelKind::PhaseDamping => 2.0,
        };
        (
            self.sweep_min.unwrap_or(0.05),
            self.sweep_max.unwrap_or(max_default),
        )
    }

    /// Ratios to generate samples for.
    pub fn sweep(&self) -> Vec<f64> {
        if let Some(values) = &self.sweep_values {
            return values.clone();
        }
        let (lo, hi) = self.sweep_range();
        match self.sweep_points {
            0 => Vec::new(),
            1 => vec![lo],
            n => (0..n)
                .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }

    pub fn time_scale(&self) -> f64 {
        match self.channel {
            ChannelKind::AmplitudeDamping => 1.0 / self.gamma0,
            ChannelKind::PhaseDamping => self.tau,
        }
    }

    /// At t = τ the PD angle folds back for ατ ≳ 1.67, so two labels would share
    /// one θ; τ/2 keeps θ monotone over the default sweep.
    pub fn snapshot_time(&self) -> f64 {
        self.t_star.unwrap_or(match self.channel {
            ChannelKind::AmplitudeDamping => 1.0 / self.gamma0,
            ChannelKind::PhaseDamping => self.tau / 2.0,
        })
    }

    pub fn time_grid(&self) -> TimeGrid {
        TimeGrid {
            points: self.grid_points,
            horizon: self.grid_horizon,
        }
    }

    /// Channel parameters at the snapshot time for control ratio `g`.
    pub fn channel_params(&self, g: f64) -> Result<ChannelParams> {
        let t = self.snapshot_time();
        let params = match self.channel {
            ChannelKind::AmplitudeDamping => ADParams::new(g * self.gamma0, self.gamma0, t).map(ChannelParams::Ad),
            ChannelKind::PhaseDamping => PDParams::new(g / self.tau, self.tau, t).map(ChannelParams::Pd),
        };
        params.map_err(|e| Error::config(format!("sweep value {g}: {e}")))
    }

    pub fn kernel_function(&self) -> Result<KernelFunction> {
        let f = match self.kernel.to_ascii_lowercase().as_str() {
            "linear" => KernelFunction::Linear { c: self.kernel_c },
            "polynomial" => KernelFunction::Polynomial {
                c: self.kernel_c,
                degree: self.kernel_degree,
            },
            "exponential" => KernelFunction::Exponential {
                sigma: self.kernel_sigma,
            },
            other => {
                return Err(Error::config(format!(
                    "unknown kernel function {other:?} (expected linear, polynomial or exponential)"
                )))
            }
        };
        f.validate()?;
        Ok(f)
    }

    /// Hyperparameter grid searched for `estimator`.
    pub fn grid_for(&self, estimator: Estimator) -> Vec<ModelSpec> {
        match estimator.model_kind() {
            ModelKind::Svr => self
                .svr_c
                .iter()
                .flat_map(|&c| self.svr_epsilon.iter().map(move |&epsilon| ModelSpec::Svr { c, epsilon }))
                .collect(),
            ModelKind::Krr => self.krr_alpha.iter().map(|&alpha| ModelSpec::Krr { alpha }).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sweep = self.sweep();
        if sweep.is_empty() {
            return Err(Error::config("sweep is empty"));
        }
        if let Some(bad) = sweep.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
            return Err(Error::config(format!("sweep value {bad} must be positive")));
        }
        let (lo, hi) = self.sweep_range();
        if self.sweep_values.is_none() && lo > hi {
            return Err(Error::config(format!("sweep_min {lo} exceeds sweep_max {hi}")));
        }
        for (name, v) in [("gamma0", self.gamma0), ("tau", self.tau), ("t_star", self.snapshot_time())] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        self.time_grid().validate()?;
        self.kernel_function()?;
        if self.models.is_empty() {
            return Err(Error::config("models list is empty"));
        }
        for e in &self.models {
            if self.grid_for(*e).is_empty() {
                return Err(Error::config(format!("hyperparameter grid for {e} is empty")));
            }
        }
        for (name, values, allow_zero) in [
            ("svr_c", &self.svr_c, false),
            ("svr_epsilon", &self.svr_epsilon, true),
            ("krr_alpha", &self.krr_alpha, false),
        ] {
            if let Some(bad) = values
                .iter()
                .find(|v| !(v.is_finite() && (**v > 0.0 || (allow_zero && **v == 0.0))))
            {
                return Err(Error::config(format!("{name} contains invalid value {bad}")));
            }
        }
        if self.cv_folds < 2 {
            return Err(Error::config("cv_folds must be at least 2"));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::config(format!(
                "test_fraction must lie in (0, 1), got {}",
                self.test_fraction
            )));
        }
        if self.rbf_gamma.is_empty() {
            return Err(Error::config("rbf_gamma list is empty"));
        }
        for gamma in &self.rbf_gamma {
            if let RbfGamma::Value(g) = *gamma {
                if !(g > 0.0 && g.is_finite()) {
                    return Err(Error::config(format!("rbf_gamma must be positive, got {g}")));
                }
            }
        }
        Ok(())
    }
}
