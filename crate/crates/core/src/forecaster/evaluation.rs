//! Error metrics and the table-style error offsets.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Metrics {
    pub mse: f64,
    pub rmse: f64,
    /// Mean absolute percentage error, in percent.
    pub mape: f64,
}

pub fn metrics(predicted: &[f64], actual: &[f64]) -> Result<Metrics> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            predicted: predicted.len(),
            actual: actual.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::EmptyMetrics);
    }
    if let Some(i) = actual.iter().position(|&a| a == 0.0) {
        return Err(Error::ZeroActual(i));
    }
    let n = actual.len() as f64;
    let mut sq = 0.0;
    let mut pct = 0.0;
    for (&p, &a) in predicted.iter().zip(actual) {
        let e = p - a;
        sq += e * e;
        pct += libm::fabs(e / a);
    }
    let mse = sq / n;
    Ok(Metrics {
        mse,
        rmse: libm::sqrt(mse),
        mape: 100.0 * pct / n,
    })
}

/// Truncates toward zero at two decimals.
///
/// Sums like `20390.19 + 0.0` land a hair below the intended cent in binary
/// floating point, so values within a few ulps of a cent boundary snap to it
/// before truncating.
pub fn truncate_cents(value: f64) -> f64 {
    let scaled = value * 100.0;
    let nearest = libm::round(scaled);
    let tolerance = 64.0 * f64::EPSILON * libm::fabs(scaled).max(1.0);
    let cents = if libm::fabs(scaled - nearest) <= tolerance {
        nearest
    } else {
        libm::trunc(scaled)
    };
    cents / 100.0
}

/// `base + error`, truncated (not rounded) to two decimals.
pub fn apply_error_offset(base: f64, error: f64) -> f64 {
    truncate_cents(base + error)
}

/// Percentage by which `after` improves on `before`.
pub fn error_reduction(before: f64, after: f64) -> Result<f64> {
    if before == 0.0 {
        return Err(Error::UndefinedReduction);
    }
    Ok(100.0 * (before - after) / before)
}

/// `P(A|B) = P(A) P(B|A) / P(B)`.
pub fn bayes_posterior(p_a: f64, p_b: f64, p_b_given_a: f64) -> Result<f64> {
    for (name, value) in [("P(A)", p_a), ("P(B)", p_b), ("P(B|A)", p_b_given_a)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidProbability { name, value });
        }
    }
    if p_b == 0.0 {
        return Err(Error::UndefinedConditional);
    }
    let posterior = p_a * p_b_given_a / p_b;
    if posterior > 1.0 {
        return Err(Error::InconsistentProbability(posterior));
    }
    Ok(posterior)
}
