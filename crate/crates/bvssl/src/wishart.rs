//! Wishart sampling via the Bartlett decomposition.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Draws W ~ Wishart(df, V) where `scale_chol` is the lower Cholesky factor
/// of V. Requires df > p − 1 so that W is almost surely positive definite.
pub fn sample_wishart<R: Rng + ?Sized>(
    df: f64,
    scale_chol: &DMatrix<f64>,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let p = scale_chol.nrows();
    if df <= p as f64 - 1.0 {
        return Err(Error::Domain {
            function: "sample_wishart".into(),
            message: format!("df {df} must exceed p - 1 = {}", p - 1),
        });
    }
    let mut a = DMatrix::zeros(p, p);
    for i in 0..p {
        let chi = ChiSquared::new(df - i as f64).map_err(|e| Error::Domain {
            function: "sample_wishart".into(),
            message: e.to_string(),
        })?;
        a[(i, i)] = chi.sample(rng).sqrt();
        for j in 0..i {
            a[(i, j)] = rng.sample(StandardNormal);
        }
    }
    let la = scale_chol * a;
    Ok(&la * la.transpose())
}
