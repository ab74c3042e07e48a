//! Latent-Gaussian representation of ordinal covariates.
//!
//! Each ordinal column j carries a latent continuous column z and a cutpoint
//! vector D₀ < D₁ < … < D_M with D₀ = −∞ and D_M = +∞; observing code l pins
//! z to [D_{l−1}, D_l). Continuous columns pass through unchanged.
//!
//! All interior cutpoints are sampled. The latent location is pinned by the
//! zero-mean Gaussian model and the scale softly by the precision prior, so
//! the cutpoints are identified by the category frequencies; anchoring one
//! of them instead would force half the latent mass below the anchor and
//! fight the observed frequencies.

use nalgebra::DMatrix;
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::dataset::MixedDataset;
use crate::error::{Error, Result};
use crate::truncnorm::sample_truncated_normal;

/// Latent matrix plus per-ordinal-column cutpoints.
#[derive(Debug, Clone)]
pub struct LatentState {
    /// n×p; continuous columns copy the observed values.
    z: DMatrix<f64>,
    /// `Some(d)` for ordinal columns, with d.len() = M+1, d[0] = −∞,
    /// d[M] = +∞, d[1] = 0.
    cutpoints: Vec<Option<Vec<f64>>>,
}

impl LatentState {
    /// Deterministic initial state. Cutpoints start at the standard-normal
    /// quantiles of the empirical cumulative category frequencies and each
    /// latent at the quantile of its bracket's frequency midpoint, so the
    /// initial latent columns are near zero mean and unit scale with
    /// correlations close to the polychoric values.
    pub fn init(dataset: &MixedDataset) -> Self {
        let std_normal = Normal::standard();
        let n = dataset.n();
        let mut z = dataset.values().clone();
        let mut cutpoints = Vec::with_capacity(dataset.p());
        for j in 0..dataset.p() {
            match dataset.kind(j) {
                crate::dataset::ColumnKind::Continuous => cutpoints.push(None),
                crate::dataset::ColumnKind::Ordinal { levels } => {
                    let m = levels as usize;
                    let mut counts = vec![0usize; m + 1];
                    for i in 0..n {
                        counts[dataset.code(i, j) as usize] += 1;
                    }
                    // Cumulative frequencies, clamped away from {0, 1} and
                    // forced strictly increasing across unobserved levels.
                    let floor = 1.0 / (2.0 * n as f64);
                    let mut cum = vec![0.0; m + 1];
                    let mut running = 0usize;
                    for l in 1..m {
                        running += counts[l];
                        cum[l] = (running as f64 / n as f64).clamp(floor, 1.0 - floor);
                    }
                    cum[m] = 1.0;
                    let mut d = vec![0.0; m + 1];
                    d[0] = f64::NEG_INFINITY;
                    d[m] = f64::INFINITY;
                    for l in 1..m {
                        d[l] = std_normal.inverse_cdf(cum[l]);
                        if l > 1 && d[l] <= d[l - 1] {
                            d[l] = d[l - 1] + 1e-6;
                        }
                    }
                    for i in 0..n {
                        let code = dataset.code(i, j) as usize;
                        let lo_p = if code == 1 { 0.0 } else { cum[code - 1] };
                        let hi_p = cum[code];
                        let mid = std_normal.inverse_cdf((lo_p + hi_p) / 2.0);
                        z[(i, j)] = if mid >= d[code - 1] && mid < d[code] {
                            mid
                        } else {
                            // Quantile rounding pushed the midpoint out of a
                            // degenerate bracket; fall back to its center.
                            0.5 * (d[code - 1].max(-8.0) + d[code].min(8.0))
                        };
                    }
                    cutpoints.push(Some(d));
                }
            }
        }
        Self { z, cutpoints }
    }

    pub fn z(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn cutpoints(&self, column: usize) -> Option<&[f64]> {
        self.cutpoints[column].as_deref()
    }

    /// Redraws every ordinal latent cell from its truncated Gaussian full
    /// conditional under precision `omega`, sweeping rows then columns and
    /// conditioning on the freshest values. Continuous cells are untouched.
    pub fn sample_latent<R: Rng + ?Sized>(
        &mut self,
        dataset: &MixedDataset,
        omega: &DMatrix<f64>,
        rng: &mut R,
    ) -> Result<()> {
        let p = dataset.p();
        for i in 0..dataset.n() {
            for j in dataset.ordinal_columns() {
                let w_jj = omega[(j, j)];
                if w_jj <= 0.0 {
                    return Err(Error::InvalidPrecision(format!(
                        "omega[{j},{j}] = {w_jj} <= 0"
                    )));
                }
                let mut cross = 0.0;
                for k in 0..p {
                    if k != j {
                        cross += omega[(j, k)] * self.z[(i, k)];
                    }
                }
                let mean = -cross / w_jj;
                let sd = (1.0 / w_jj).sqrt();
                let d = self.cutpoints[j].as_ref().expect("ordinal column");
                let code = dataset.code(i, j) as usize;
                let (lo, hi) = (d[code - 1], d[code]);
                if !(lo < hi) {
                    return Err(Error::InvariantViolation(format!(
                        "empty bracket [{lo}, {hi}) for column {j} level {code}"
                    )));
                }
                self.z[(i, j)] = sample_truncated_normal(mean, sd, lo, hi, rng)?;
            }
        }
        debug_assert!(self.check_brackets(dataset).is_ok());
        Ok(())
    }

    /// Uniform draws for every interior cutpoint l = 1..M−1 of every ordinal
    /// column.
    ///
    /// Bounds come from the latents: lower = max z at level l, upper = min z
    /// at level l+1. An unobserved level substitutes the neighboring current
    /// cutpoint; if that leaves a bound infinite (an empty extreme level)
    /// the cutpoint is left unchanged, as no proper uniform exists.
    pub fn update_cutpoints<R: Rng + ?Sized>(
        &mut self,
        dataset: &MixedDataset,
        rng: &mut R,
    ) -> Result<()> {
        for j in dataset.ordinal_columns() {
            let m = match dataset.kind(j) {
                crate::dataset::ColumnKind::Ordinal { levels } => levels as usize,
                _ => unreachable!(),
            };
            for l in 1..m {
                let (mut z_lower, mut z_upper) = (f64::NEG_INFINITY, f64::INFINITY);
                for i in 0..dataset.n() {
                    let code = dataset.code(i, j) as usize;
                    let z = self.z[(i, j)];
                    if code == l && z > z_lower {
                        z_lower = z;
                    }
                    if code == l + 1 && z < z_upper {
                        z_upper = z;
                    }
                }
                let d = self.cutpoints[j].as_mut().expect("ordinal column");
                if z_lower == f64::NEG_INFINITY {
                    z_lower = d[l - 1];
                }
                if z_upper == f64::INFINITY {
                    z_upper = d[l + 1];
                }
                if z_lower == f64::NEG_INFINITY || z_upper == f64::INFINITY {
                    continue;
                }
                if z_lower > z_upper {
                    return Err(Error::DataCorruption(format!(
                        "cutpoint bounds crossed for column {j} level {l}: {z_lower} > {z_upper}"
                    )));
                }
                d[l] = if z_lower == z_upper {
                    z_lower
                } else {
                    z_lower + (z_upper - z_lower) * rng.random::<f64>()
                };
            }
            let d = self.cutpoints[j].as_ref().expect("ordinal column");
            debug_assert!(d.windows(2).all(|w| w[0] < w[1] || w[0] == w[1]));
        }
        Ok(())
    }

    /// Replaces a column's cutpoint vector (e.g. to impose a known
    /// thresholding). The vector must be strictly increasing with infinite
    /// end points; the latents should be redrawn afterwards.
    pub fn set_cutpoints(&mut self, column: usize, cutpoints: Vec<f64>) -> Result<()> {
        if self.cutpoints[column].is_none() {
            return Err(Error::InvariantViolation(format!(
                "column {column} is not ordinal"
            )));
        }
        if cutpoints.first() != Some(&f64::NEG_INFINITY)
            || cutpoints.last() != Some(&f64::INFINITY)
            || !cutpoints.windows(2).all(|w| w[0] < w[1])
        {
            return Err(Error::InvariantViolation(
                "cutpoints must be strictly increasing from -inf to +inf".into(),
            ));
        }
        if cutpoints.len() != self.cutpoints[column].as_ref().unwrap().len() {
            return Err(Error::InvariantViolation(
                "cutpoint count must match the column's level count".into(),
            ));
        }
        self.cutpoints[column] = Some(cutpoints);
        Ok(())
    }

    /// Verifies D_{l−1} <= z < D_l for every ordinal cell and strict cutpoint
    /// monotonicity. Used by the soundness checks.
    pub fn check_brackets(&self, dataset: &MixedDataset) -> Result<()> {
        for j in dataset.ordinal_columns() {
            let d = self.cutpoints[j].as_ref().expect("ordinal column");
            for w in d.windows(2) {
                if !(w[0] < w[1]) {
                    return Err(Error::InvariantViolation(format!(
                        "cutpoints not strictly increasing in column {j}: {:?}",
                        d
                    )));
                }
            }
            for i in 0..dataset.n() {
                let code = dataset.code(i, j) as usize;
                let z = self.z[(i, j)];
                if !(d[code - 1] <= z && z < d[code]) {
                    return Err(Error::InvariantViolation(format!(
                        "latent {z} outside bracket [{}, {}) at row {i}, column {j}",
                        d[code - 1],
                        d[code]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Gaussian full conditional of coordinate `j` given the other entries of
/// `row` under precision `omega`: mean −(Σ_{k≠j} ω_{jk} row_k)/ω_{jj},
/// variance 1/ω_{jj}.
pub fn conditional_latent_params(
    omega: &DMatrix<f64>,
    row: &[f64],
    j: usize,
) -> Result<(f64, f64)> {
    let p = omega.nrows();
    if j >= p || row.len() != p {
        return Err(Error::InvariantViolation(format!(
            "index {j} out of range for p={p} (row len {})",
            row.len()
        )));
    }
    let w_jj = omega[(j, j)];
    if w_jj <= 0.0 {
        return Err(Error::InvalidPrecision(format!(
            "omega[{j},{j}] = {w_jj} <= 0"
        )));
    }
    let cross: f64 = (0..p)
        .filter(|&k| k != j)
        .map(|k| omega[(j, k)] * row[k])
        .sum();
    Ok((-cross / w_jj, 1.0 / w_jj))
}
