#![allow(dead_code)] // each test target compiles its own subset of these helpers

//! Shared oracles and statistics helpers for the integration tests. These
//! stay independent of the library code paths they are used to check.

pub mod hyp2f1_oracle;

use nalgebra::{DMatrix, DVector};
use statrs::function::gamma::ln_gamma;

/// Plain positive-term power series for ₂F₁, independent of the library's
/// scaled implementation. Only valid while the value fits in f64.
pub fn series_2f1(a: f64, b: f64, c: f64, z: f64, max_terms: usize) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term < sum * 1e-17 && (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z < 1.0 {
            break;
        }
    }
    sum
}

/// ln B(a, b).
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// OLS R² of centered y on raw columns (centered internally), solved with a
/// plain normal-equation inverse.
pub fn ols_r_squared(x: &DMatrix<f64>, y: &[f64]) -> f64 {
    let n = x.nrows();
    if x.ncols() == 0 {
        return 0.0;
    }
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let yc = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));
    let mut xc = x.clone();
    for j in 0..x.ncols() {
        let mean = xc.column(j).sum() / n as f64;
        for i in 0..n {
            xc[(i, j)] -= mean;
        }
    }
    let gram = xc.transpose() * &xc;
    let coef = gram
        .try_inverse()
        .expect("full-rank oracle design")
        * (xc.transpose() * &yc);
    let fitted = &xc * coef;
    let rss = (&yc - &fitted).norm_squared();
    let tss = yc.norm_squared();
    1.0 - rss / tss
}

/// Hyper-g marginal likelihood used by the enumeration oracles, computed
/// with the independent series above.
pub fn oracle_marginal_likelihood(n: usize, p_gamma: usize, r2: f64, a: f64) -> f64 {
    (a - 2.0) / (p_gamma as f64 + a - 2.0)
        * series_2f1((n as f64 - 1.0) / 2.0, 1.0, (p_gamma as f64 + a) / 2.0, r2, 2_000_000)
}

/// Exact posterior over all 2^q clique configurations, marginalizing the
/// Beta prior on the inclusion probability. Returns per-clique marginal
/// inclusion probabilities.
pub fn enumerate_clique_posterior(
    x: &DMatrix<f64>,
    y: &[f64],
    cliques: &[Vec<usize>],
    a: f64,
    a_pi: f64,
    b_pi: f64,
) -> Vec<f64> {
    let q = cliques.len();
    let n = x.nrows();
    let mut weights = vec![0.0_f64; 1 << q];
    for mask in 0..(1usize << q) {
        let mut active: Vec<usize> = Vec::new();
        for (k, clique) in cliques.iter().enumerate() {
            if mask & (1 << k) != 0 {
                for &j in clique {
                    if !active.contains(&j) {
                        active.push(j);
                    }
                }
            }
        }
        active.sort_unstable();
        let xa = DMatrix::from_fn(n, active.len(), |r, c| x[(r, active[c])]);
        let r2 = ols_r_squared(&xa, y);
        let ml = oracle_marginal_likelihood(n, active.len(), r2, a);
        let q_star = mask.count_ones() as f64;
        let prior =
            (ln_beta(q_star + a_pi, q as f64 - q_star + b_pi) - ln_beta(a_pi, b_pi)).exp();
        weights[mask] = prior * ml;
    }
    let total: f64 = weights.iter().sum();
    (0..q)
        .map(|k| {
            weights
                .iter()
                .enumerate()
                .filter(|(mask, _)| mask & (1 << k) != 0)
                .map(|(_, w)| w)
                .sum::<f64>()
                / total
        })
        .collect()
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        let fa = i as f64 / a.len() as f64;
        let fb = j as f64 / b.len() as f64;
        d = d.max((fa - fb).abs());
    }
    d
}

/// Critical value of the two-sample KS test at level alpha.
pub fn ks_critical(alpha: f64, n: usize, m: usize) -> f64 {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Effective sample size from the initial positive autocorrelations.
pub fn effective_sample_size(chain: &[f64]) -> f64 {
    let n = chain.len();
    if n < 2 {
        return n as f64;
    }
    let mean = chain.iter().sum::<f64>() / n as f64;
    let var = chain.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
    if var < 1e-12 {
        return n as f64;
    }
    let mut sum_rho = 0.0;
    for lag in 1..=(n / 2).min(2000) {
        let cov = (0..n - lag)
            .map(|i| (chain[i] - mean) * (chain[i + lag] - mean))
            .sum::<f64>()
            / (n - lag) as f64;
        let rho = cov / var;
        if rho < 0.01 {
            break;
        }
        sum_rho += rho;
    }
    n as f64 / (1.0 + 2.0 * sum_rho)
}

/// Monte-Carlo standard error of a binary chain's mean, adjusted for
/// autocorrelation.
pub fn binary_chain_se(chain: &[f64]) -> f64 {
    let n_eff = effective_sample_size(chain);
    let mean = chain.iter().sum::<f64>() / chain.len() as f64;
    (mean * (1.0 - mean) / n_eff).max(1e-12).sqrt()
}

/// Batch-means standard error of a chain's mean.
pub fn batch_means_se(chain: &[f64], batches: usize) -> f64 {
    let b = batches.min(chain.len());
    let size = chain.len() / b;
    let means: Vec<f64> = (0..b)
        .map(|k| chain[k * size..(k + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / b as f64;
    let var = means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>() / (b as f64 - 1.0);
    (var / b as f64).sqrt()
}

/// Standard error for comparing a binary chain's mean against an exact
/// probability: batch means capture autocorrelation, and the binomial floor
/// at the exact value keeps the test calibrated when the chain sees no (or
/// almost no) minority draws.
pub fn binary_vs_exact_se(chain: &[f64], exact: f64) -> f64 {
    let floor = (exact * (1.0 - exact) / chain.len() as f64).sqrt();
    batch_means_se(chain, 100).max(floor)
}
