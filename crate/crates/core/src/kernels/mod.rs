//! Quantum kernels: overlap circuits, kernel functions, and Gram matrices.

mod function;
mod gram;
mod overlap;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use function::{kernel_value, KernelFunction};
pub use gram::{gram_matrix, pair_stream, GramMatrix, Provenance};
pub use overlap::{
    aba_circuit, aba_overlap, aba_prepared, bba_circuit, bba_overlap, bba_prepared,
    estimate_prepared, inversion_test, inversion_test_circuit, inversion_test_prepared,
    overlap_oracle, reference_overlap, swap_test, swap_test_circuit, swap_test_prepared,
};

/// How the overlap between two dataset states is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OverlapMethod {
    #[serde(rename = "swap")]
    SwapTest,
    #[serde(rename = "inversion")]
    InversionTest,
    #[serde(rename = "aba")]
    AncillaBased,
    #[serde(rename = "bba")]
    BellBasis,
    #[serde(rename = "exact")]
    ExactOracle,
}

impl OverlapMethod {
    /// The four circuit-based estimators.
    pub const CIRCUITS: [OverlapMethod; 4] = [
        OverlapMethod::SwapTest,
        OverlapMethod::InversionTest,
        OverlapMethod::AncillaBased,
        OverlapMethod::BellBasis,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OverlapMethod::SwapTest => "swap",
            OverlapMethod::InversionTest => "inversion",
            OverlapMethod::AncillaBased => "aba",
            OverlapMethod::BellBasis => "bba",
            OverlapMethod::ExactOracle => "exact",
        }
    }
}

impl fmt::Display for OverlapMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OverlapMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "swap" | "swap-test" => Ok(OverlapMethod::SwapTest),
            "inversion" | "inversion-test" => Ok(OverlapMethod::InversionTest),
            "aba" | "ancilla-based" => Ok(OverlapMethod::AncillaBased),
            "bba" | "bell-basis" => Ok(OverlapMethod::BellBasis),
            "exact" | "oracle" => Ok(OverlapMethod::ExactOracle),
            other => Err(Error::config(format!("unknown overlap method {other:?}"))),
        }
    }
}
