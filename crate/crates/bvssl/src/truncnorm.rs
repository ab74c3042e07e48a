//! Truncated normal sampling.
//!
//! Inverse-CDF inversion in the central region, switching to rejection
//! samplers once the whole interval lies beyond four standard deviations,
//! where quantile inversion runs out of precision.

use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Standardized boundary beyond which tail rejection replaces inversion.
const TAIL_SWITCH: f64 = 4.0;

/// Draw from N(mean, sd²) conditioned on [lo, hi).
///
/// Either bound may be infinite. The returned value always satisfies
/// `lo <= x < hi`.
pub fn sample_truncated_normal<R: Rng + ?Sized>(
    mean: f64,
    sd: f64,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> Result<f64> {
    if !(sd > 0.0) {
        return Err(Error::InvalidPrecision(format!(
            "truncated normal requires sd > 0, got {sd}"
        )));
    }
    if !(lo < hi) {
        return Err(Error::InvariantViolation(format!(
            "empty truncation interval [{lo}, {hi})"
        )));
    }
    let a = (lo - mean) / sd;
    let b = (hi - mean) / sd;

    let std_draw = if a >= TAIL_SWITCH {
        right_tail(a, b, rng)
    } else if b <= -TAIL_SWITCH {
        -right_tail(-b, -a, rng)
    } else {
        central_inverse_cdf(a, b, rng)
    };

    let x = mean + sd * std_draw;
    // Guard against boundary rounding after de-standardizing.
    if x < lo {
        Ok(lo)
    } else if x >= hi {
        Ok(prev_below(hi, lo))
    } else {
        Ok(x)
    }
}

fn prev_below(hi: f64, lo: f64) -> f64 {
    let candidate = if hi.is_finite() {
        f64::from_bits(hi.to_bits() - 1)
    } else {
        f64::MAX
    };
    candidate.max(lo)
}

fn central_inverse_cdf<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let std_normal = Normal::standard();
    let pa = if a == f64::NEG_INFINITY { 0.0 } else { std_normal.cdf(a) };
    let pb = if b == f64::INFINITY { 1.0 } else { std_normal.cdf(b) };
    if pb - pa < 1e-300 {
        // Degenerate sliver; both endpoints map to the same CDF value.
        return 0.5 * (a.max(-TAIL_SWITCH) + b.min(TAIL_SWITCH));
    }
    let u: f64 = rng.random();
    let p = pa + u * (pb - pa);
    std_normal.inverse_cdf(p.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0))
}

/// Standard-normal right tail on [a, b) with a >= TAIL_SWITCH.
fn right_tail<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    // Narrow far-tail slivers: uniform proposal with the density bounded at a.
    if b.is_finite() && (b - a) * (a + b) < 4.0 {
        loop {
            let x = a + (b - a) * rng.random::<f64>();
            let log_accept = -(x * x - a * a) / 2.0;
            if rng.random::<f64>().ln() <= log_accept {
                return x;
            }
        }
    }
    // Robert (1995) translated-exponential rejection.
    let rate = (a + (a * a + 4.0).sqrt()) / 2.0;
    loop {
        let e: f64 = -rng.random::<f64>().ln() / rate;
        let x = a + e;
        if x >= b {
            continue;
        }
        let log_accept = -(x - rate) * (x - rate) / 2.0;
        if rng.random::<f64>().ln() <= log_accept {
            return x;
        }
    }
}

/// Mean of the standard normal truncated to (-inf, 0]: -2·φ(0).
#[cfg(test)]
pub(crate) fn half_normal_negative_mean() -> f64 {
    -2.0 * (-0.0_f64).exp() / (2.0 * std::f64::consts::PI).sqrt()
}
