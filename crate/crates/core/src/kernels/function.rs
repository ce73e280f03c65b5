use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Function applied to an overlap x ∈ [0, 1] to produce a kernel entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelFunction {
    /// x + c
    Linear { c: f64 },
    /// (x + c)^degree
    Polynomial { c: f64, degree: u32 },
    /// exp(−σ √(1 − x))
    Exponential { sigma: f64 },
}

impl KernelFunction {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelFunction::Linear { c } if !c.is_finite() => {
                Err(Error::config("linear kernel offset must be finite"))
            }
            KernelFunction::Polynomial { c, degree } if !c.is_finite() || degree < 1 => Err(
                Error::config("polynomial kernel needs a finite offset and degree ≥ 1"),
            ),
            KernelFunction::Exponential { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                Err(Error::config("exponential kernel sigma must be positive"))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelFunction::Linear { .. } => "linear",
            KernelFunction::Polynomial { .. } => "polynomial",
            KernelFunction::Exponential { .. } => "exponential",
        }
    }

    /// Linear with c = 0, polynomial (x + 0.1)³ and exponential σ = 3.
    pub fn comparison_set() -> [KernelFunction; 3] {
        [
            KernelFunction::Linear { c: 0.0 },
            KernelFunction::Polynomial { c: 0.1, degree: 3 },
            KernelFunction::Exponential { sigma: 3.0 },
        ]
    }
}

impl fmt::Display for KernelFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelFunction::Linear { c } => write!(f, "linear(c={c})"),
            KernelFunction::Polynomial { c, degree } => write!(f, "polynomial(c={c};d={degree})"),
            KernelFunction::Exponential { sigma } => write!(f, "exponential(sigma={sigma})"),
        }
    }
}

/// Kernel entry for a (possibly shot-noisy) overlap estimate. The exponential form
/// clamps the overlap into [0, 1] before taking √(1 − x).
pub fn kernel_value(overlap: f64, function: &KernelFunction) -> f64 {
    match *function {
        KernelFunction::Linear { c } => overlap + c,
        KernelFunction::Polynomial { c, degree } => (overlap + c).powi(degree as i32),
        KernelFunction::Exponential { sigma } => {
            let x = overlap.clamp(0.0, 1.0);
            (-sigma * (1.0 - x).sqrt()).exp()
        }
    }
}
