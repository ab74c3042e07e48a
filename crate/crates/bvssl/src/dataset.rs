//! Mixed continuous/ordinal dataset container.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Per-column measurement scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Continuous,
    /// Ordered categorical with codes 1..=levels.
    Ordinal { levels: u32 },
}

impl ColumnKind {
    pub fn is_ordinal(&self) -> bool {
        matches!(self, ColumnKind::Ordinal { .. })
    }
}

/// n×p covariate matrix with mixed column kinds. Ordinal entries are stored
/// as integer category codes 1..=M in the same f64 matrix.
#[derive(Debug, Clone)]
pub struct MixedDataset {
    kinds: Vec<ColumnKind>,
    values: DMatrix<f64>,
    standardized: bool,
}

/// Per-column centering/scaling parameters fitted on a training set, so test
/// rows can be transformed identically.
#[derive(Debug, Clone)]
pub struct Standardization {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl MixedDataset {
    /// Validates and wraps a raw matrix. Ordinal columns must hold integer
    /// codes in [1, M]; all entries must be finite.
    pub fn new(values: DMatrix<f64>, kinds: Vec<ColumnKind>) -> Result<Self> {
        if values.ncols() != kinds.len() {
            return Err(Error::Ingestion(format!(
                "matrix has {} columns but {} kinds given",
                values.ncols(),
                kinds.len()
            )));
        }
        for (j, kind) in kinds.iter().enumerate() {
            for i in 0..values.nrows() {
                let v = values[(i, j)];
                if !v.is_finite() {
                    return Err(Error::Ingestion(format!(
                        "non-finite value at row {}, column {}",
                        i + 1,
                        j + 1
                    )));
                }
                if let ColumnKind::Ordinal { levels } = kind {
                    if v.fract() != 0.0 || v < 1.0 || v > *levels as f64 {
                        return Err(Error::Ingestion(format!(
                            "ordinal code {} at row {}, column {} outside 1..={}",
                            v,
                            i + 1,
                            j + 1,
                            levels
                        )));
                    }
                }
            }
        }
        Ok(Self {
            kinds,
            values,
            standardized: false,
        })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn kinds(&self) -> &[ColumnKind] {
        &self.kinds
    }

    pub fn kind(&self, j: usize) -> ColumnKind {
        self.kinds[j]
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// Ordinal code at (i, j) as 1-based u32. Panics on continuous columns.
    pub fn code(&self, i: usize, j: usize) -> u32 {
        debug_assert!(self.kinds[j].is_ordinal());
        self.values[(i, j)] as u32
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    pub fn ordinal_columns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.p()).filter(|&j| self.kinds[j].is_ordinal())
    }

    /// Centers and scales continuous columns to mean 0, sd 1 (sample sd with
    /// n−1 denominator). Ordinal columns are left untouched. Returns the
    /// fitted parameters for transforming held-out rows. Idempotent.
    pub fn standardize(&self) -> Result<(MixedDataset, Standardization)> {
        let n = self.n();
        let mut values = self.values.clone();
        let mut means = vec![0.0; self.p()];
        let mut sds = vec![1.0; self.p()];
        if !self.standardized {
            for j in 0..self.p() {
                if self.kinds[j].is_ordinal() {
                    continue;
                }
                let col = values.column(j);
                let mean = col.sum() / n as f64;
                let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                    / (n as f64 - 1.0).max(1.0);
                let sd = var.sqrt();
                if sd < 1e-12 {
                    return Err(Error::Ingestion(format!(
                        "continuous column {} is constant and cannot be standardized",
                        j + 1
                    )));
                }
                means[j] = mean;
                sds[j] = sd;
                for i in 0..n {
                    values[(i, j)] = (values[(i, j)] - mean) / sd;
                }
            }
        }
        Ok((
            MixedDataset {
                kinds: self.kinds.clone(),
                values,
                standardized: true,
            },
            Standardization { means, sds },
        ))
    }

    /// Applies training-set standardization parameters to this dataset.
    pub fn apply_standardization(&self, params: &Standardization) -> Result<MixedDataset> {
        if params.means.len() != self.p() {
            return Err(Error::Ingestion(format!(
                "standardization fitted on {} columns, dataset has {}",
                params.means.len(),
                self.p()
            )));
        }
        let mut values = self.values.clone();
        for j in 0..self.p() {
            if self.kinds[j].is_ordinal() {
                continue;
            }
            for i in 0..self.n() {
                values[(i, j)] = (values[(i, j)] - params.means[j]) / params.sds[j];
            }
        }
        Ok(MixedDataset {
            kinds: self.kinds.clone(),
            values,
            standardized: true,
        })
    }
}
