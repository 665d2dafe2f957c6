//! Monthly OHLC records, dataset validation and sliding training windows.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// One of the four price summaries of a month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Column {
    Open,
    High,
    Low,
    Close,
}

impl Column {
    pub const ALL: [Column; 4] = [Column::Open, Column::High, Column::Low, Column::Close];

    pub fn name(self) -> &'static str {
        match self {
            Column::Open => "open",
            Column::High => "high",
            Column::Low => "low",
            Column::Close => "close",
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "open" => Ok(Column::Open),
            "high" => Ok(Column::High),
            "low" => Ok(Column::Low),
            "close" => Ok(Column::Close),
            _ => Err(Error::UnknownColumn(s.to_string())),
        }
    }
}

/// One month of index prices.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OhlcRecord {
    /// Opaque display label such as `Jun11` or `2014-12`, kept verbatim.
    pub month: String,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
}

impl OhlcRecord {
    pub fn new(month: impl Into<String>, open: f64, high: f64, low: f64, close: f64) -> Self {
        Self {
            month: month.into(),
            open,
            high,
            low,
            close,
        }
    }

    pub fn get(&self, column: Column) -> f64 {
        match column {
            Column::Open => self.open,
            Column::High => self.high,
            Column::Low => self.low,
            Column::Close => self.close,
        }
    }

    /// Checks the hard invariants: finite positive prices and `low <= high`.
    /// `row` is the 1-based data row number used in the error.
    pub fn validate(&self, row: usize) -> Result<()> {
        for column in Column::ALL {
            let value = self.get(column);
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidRecord {
                    row,
                    reason: alloc::format!("{column} price {value} must be finite and positive"),
                });
            }
        }
        if self.low > self.high {
            return Err(Error::InvalidRecord {
                row,
                reason: alloc::format!("low {} exceeds high {}", self.low, self.high),
            });
        }
        Ok(())
    }

    /// Soft invariant: open and close should sit inside `[low, high]`.
    pub fn range_warnings(&self, row: usize) -> impl Iterator<Item = RangeWarning> + '_ {
        [Column::Open, Column::Close]
            .into_iter()
            .filter(move |&c| {
                let v = self.get(c);
                v < self.low || v > self.high
            })
            .map(move |column| RangeWarning {
                row,
                month: self.month.clone(),
                column,
                value: self.get(column),
                low: self.low,
                high: self.high,
            })
    }
}

/// An open or close price outside its month's `[low, high]` band.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeWarning {
    pub row: usize,
    pub month: String,
    pub column: Column,
    pub value: f64,
    pub low: f64,
    pub high: f64,
}

impl fmt::Display for RangeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {} ({}): {} {:.2} outside [{:.2}, {:.2}]",
            self.row, self.month, self.column, self.value, self.low, self.high
        )
    }
}

/// Chronological, validated series of monthly records.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(try_from = "Vec<OhlcRecord>", into = "Vec<OhlcRecord>")
)]
pub struct MarketDataset {
    records: Vec<OhlcRecord>,
    warnings: Vec<RangeWarning>,
}

impl MarketDataset {
    /// Validates every record, rejects duplicates and collects range warnings.
    pub fn new(records: Vec<OhlcRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut seen = BTreeSet::new();
        let mut warnings = Vec::new();
        for (i, record) in records.iter().enumerate() {
            let row = i + 1;
            record.validate(row)?;
            if !seen.insert(record.month.as_str()) {
                return Err(Error::DuplicateMonth {
                    label: record.month.clone(),
                    row,
                });
            }
            warnings.extend(record.range_warnings(row));
        }
        Ok(Self { records, warnings })
    }

    pub fn records(&self) -> &[OhlcRecord] {
        &self.records
    }

    pub fn warnings(&self) -> &[RangeWarning] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn first(&self) -> &OhlcRecord {
        &self.records[0]
    }

    pub fn last(&self) -> &OhlcRecord {
        &self.records[self.records.len() - 1]
    }

    /// Values of one column in chronological order.
    pub fn column(&self, column: Column) -> Vec<f64> {
        self.records.iter().map(|r| r.get(column)).collect()
    }

    /// Like [`column`](Self::column) but takes the column by name.
    pub fn extract_column(&self, name: &str) -> Result<Vec<f64>> {
        Ok(self.column(name.parse()?))
    }
}

impl TryFrom<Vec<OhlcRecord>> for MarketDataset {
    type Error = Error;

    fn try_from(records: Vec<OhlcRecord>) -> Result<Self> {
        Self::new(records)
    }
}

impl From<MarketDataset> for Vec<OhlcRecord> {
    fn from(dataset: MarketDataset) -> Self {
        dataset.records
    }
}

/// `inputs` are the `W` values immediately preceding `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingWindow {
    pub inputs: Vec<f64>,
    pub target: f64,
}

/// Slides a window of `width` values over `series`, one target per step.
///
/// Produces `series.len().saturating_sub(width)` windows.
///
/// # Panics
///
/// If `width` is zero.
pub fn make_windows(series: &[f64], width: usize) -> Vec<TrainingWindow> {
    assert!(width >= 1, "window width must be at least 1");
    series
        .windows(width + 1)
        .map(|w| TrainingWindow {
            inputs: w[..width].to_vec(),
            target: w[width],
        })
        .collect()
}
