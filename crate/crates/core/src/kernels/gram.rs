use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{estimate_prepared, kernel_value, KernelFunction, OverlapMethod};
use crate::channels::{build_channel_circuit, ChannelKind};
use crate::error::{Error, Result};
use crate::numfmt::fmt_f64;
use crate::qsim::{stream_rng, Shots};

/// Where a Gram matrix came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Quantum {
        method: OverlapMethod,
        function: KernelFunction,
        shots: Shots,
        seed: u64,
    },
    Rbf {
        gamma: f64,
    },
    Explicit,
}

impl Provenance {
    fn header(&self) -> String {
        match self {
            Provenance::Quantum {
                method,
                function,
                shots,
                seed,
            } => format!("method={method} function={function} shots={shots} seed={seed}"),
            Provenance::Rbf { gamma } => format!("method=rbf gamma={}", fmt_f64(*gamma)),
            Provenance::Explicit => "method=explicit".to_string(),
        }
    }
}

/// Symmetric kernel matrix over a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    values: DMatrix<f64>,
    raw_overlaps: Option<DMatrix<f64>>,
    provenance: Provenance,
}

impl GramMatrix {
    /// Wraps a caller-supplied matrix; it must be square and symmetric within 1e-12.
    pub fn from_values(values: DMatrix<f64>, provenance: Provenance) -> Result<Self> {
        check_symmetric(&values)?;
        Ok(Self {
            values,
            raw_overlaps: None,
            provenance,
        })
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// Overlap estimates before the kernel function was applied (quantum Gram only).
    pub fn raw_overlaps(&self) -> Option<&DMatrix<f64>> {
        self.raw_overlaps.as_ref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// Rows `rows`, columns `cols` of the matrix.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |a, b| self.values[(rows[a], cols[b])])
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.values
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Row-major CSV preceded by a `#` line holding the provenance fields.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let n = self.dim();
        let mut out = String::new();
        writeln!(out, "# {} n={n}", self.provenance.header()).unwrap();
        let header: Vec<String> = (0..n).map(|j| format!("k{j}")).collect();
        writeln!(out, "{}", header.join(",")).unwrap();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| fmt_f64(self.values[(i, j)])).collect();
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        std::fs::File::create(path)?.write_all(out.as_bytes())?;
        Ok(())
    }

    /// Reads a file written by [`GramMatrix::write_csv`]. Provenance is not parsed back.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            message,
        };
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_path(path)?;
        let n = reader.headers()?.len();
        let mut data = Vec::with_capacity(n * n);
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != n {
                return Err(parse_err(format!("row {row} has {} entries, expected {n}", record.len())));
            }
            for field in record.iter() {
                data.push(
                    field
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| parse_err(format!("row {row}: {e}")))?,
                );
            }
        }
        if data.len() != n * n {
            return Err(parse_err(format!("expected {n} rows")));
        }
        let values = DMatrix::from_row_slice(n, n, &data);
        GramMatrix::from_values(values, Provenance::Explicit).map_err(|e| parse_err(e.to_string()))
    }
}

fn check_symmetric(values: &DMatrix<f64>) -> Result<()> {
    let (r, c) = values.shape();
    if r != c {
        return Err(Error::contract(format!("Gram matrix is {r}x{c}, not square")));
    }
    for i in 0..r {
        for j in (i + 1)..r {
            if (values[(i, j)] - values[(j, i)]).abs() > 1e-12 {
                return Err(Error::contract(format!("Gram matrix not symmetric at ({i},{j})")));
            }
        }
    }
    Ok(())
}

/// RNG stream id for Gram entry (i, j). Depends only on the indices, so entries can
/// be evaluated in any order or in parallel with identical results.
pub fn pair_stream(i: usize, j: usize) -> u64 {
    ((i as u64) << 32) | j as u64
}

/// Builds the Gram matrix of the channel states prepared at `thetas`.
///
/// Only the upper triangle (diagonal included) is estimated; the lower triangle is
/// mirrored. The inversion-test diagonal is set to `function(1)` without simulation,
/// since U†U = I makes it exact.
pub fn gram_matrix(
    thetas: &[f64],
    kind: ChannelKind,
    method: OverlapMethod,
    function: &KernelFunction,
    shots: Shots,
    seed: u64,
) -> Result<GramMatrix> {
    if thetas.is_empty() {
        return Err(Error::contract("gram_matrix: empty angle list"));
    }
    function.validate()?;
    let preps = thetas
        .iter()
        .map(|&t| build_channel_circuit(kind, t))
        .collect::<Result<Vec<_>>>()?;
    let n = thetas.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let estimates = pairs
        .par_iter()
        .map(|&(i, j)| {
            if i == j && method == OverlapMethod::InversionTest {
                return Ok(1.0);
            }
            let mut rng = stream_rng(seed, pair_stream(i, j));
            estimate_prepared(method, &preps[i], &preps[j], shots, &mut rng)
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut overlaps = DMatrix::zeros(n, n);
    let mut values = DMatrix::zeros(n, n);
    for (&(i, j), &x) in pairs.iter().zip(&estimates) {
        let k = kernel_value(x, function);
        overlaps[(i, j)] = x;
        overlaps[(j, i)] = x;
        values[(i, j)] = k;
        values[(j, i)] = k;
    }
    Ok(GramMatrix {
        values,
        raw_overlaps: Some(overlaps),
        provenance: Provenance::Quantum {
            method,
            function: *function,
            shots,
            seed,
        },
    })
}
