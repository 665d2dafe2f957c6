//! Min/max based rescaling of a price column and its exact inverse.

use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Which affine rescaling to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    /// `(2y - (max + min)) / (max - min)`, maps `[min, max]` onto `[-1, 1]`.
    #[default]
    Symmetric,
    /// `(high - low) / (max - min) * (y - min)`, maps `[min, max]` onto `[0, high - low]`.
    ScaledSpan,
    /// `low + (y - min)(high - low) / (max - min)`, maps `[min, max]` onto `[low, high]`.
    TargetRange,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Symmetric => "symmetric",
            Method::ScaledSpan => "scaled_span",
            Method::TargetRange => "target_range",
        }
    }

    fn uses_range(self) -> bool {
        !matches!(self, Method::Symmetric)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Method::Symmetric),
            "scaled_span" => Ok(Method::ScaledSpan),
            "target_range" => Ok(Method::TargetRange),
            _ => Err(Error::UnknownMethod(s.to_string())),
        }
    }
}

/// A fitted normalization: method plus column extrema and the chosen range.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawSpec"))]
pub struct NormalizationSpec {
    method: Method,
    min: f64,
    max: f64,
    low: f64,
    high: f64,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawSpec {
    method: Method,
    min: f64,
    max: f64,
    low: f64,
    high: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<RawSpec> for NormalizationSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        Self::new(raw.method, raw.min, raw.max, raw.low, raw.high)
    }
}

impl NormalizationSpec {
    pub fn new(method: Method, min: f64, max: f64, low: f64, high: f64) -> Result<Self> {
        if max <= min || !min.is_finite() || !max.is_finite() {
            return Err(Error::DegenerateSpec { min, max });
        }
        if method.uses_range() && (high <= low || !low.is_finite() || !high.is_finite()) {
            return Err(Error::InvalidRange { low, high });
        }
        Ok(Self {
            method,
            min,
            max,
            low,
            high,
        })
    }

    /// Takes `min`/`max` from the series; `low`/`high` are stored as given.
    pub fn fit(series: &[f64], method: Method, low: f64, high: f64) -> Result<Self> {
        if let Some(i) = series.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        let min = series.iter().copied().fold(f64::INFINITY, f64::min);
        let max = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if series.is_empty() {
            return Err(Error::DegenerateSpec { min: 0.0, max: 0.0 });
        }
        Self::new(method, min, max, low, high)
    }

    pub fn method(&self) -> Method {
        self.method
    }
    pub fn min(&self) -> f64 {
        self.min
    }
    pub fn max(&self) -> f64 {
        self.max
    }
    pub fn low(&self) -> f64 {
        self.low
    }
    pub fn high(&self) -> f64 {
        self.high
    }

    /// Values outside `[min, max]` extrapolate linearly.
    ///
    /// Evaluated through the unit position `t = (y - min) / (max - min)`, which
    /// is algebraically identical to the textbook forms but lands exactly on
    /// the range endpoints at `y = min` and `y = max`.
    pub fn normalize(&self, y: f64) -> f64 {
        let t = (y - self.min) / (self.max - self.min);
        match self.method {
            Method::Symmetric => 2.0 * t - 1.0,
            Method::ScaledSpan => t * (self.high - self.low),
            Method::TargetRange => (1.0 - t) * self.low + t * self.high,
        }
    }

    pub fn denormalize(&self, x: f64) -> f64 {
        let t = match self.method {
            Method::Symmetric => (x + 1.0) / 2.0,
            Method::ScaledSpan => x / (self.high - self.low),
            Method::TargetRange => (x - self.low) / (self.high - self.low),
        };
        self.min + t * (self.max - self.min)
    }
}
