//! `Month,Open,High,Low,Close` files and the single-value base files used
//! for error-offset tables.

use std::fmt::Write as _;

use swarmcast_core::{Column, MarketDataset, OhlcRecord};

use crate::error::{Error, Result};

pub const HEADER: &str = "Month,Open,High,Low,Close";
const COLUMNS: [&str; 5] = ["Month", "Open", "High", "Low", "Close"];

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes())
}

fn parse_price(field: &str, column: &str, row: usize) -> Result<f64> {
    field.parse::<f64>().map_err(|_| Error::Row {
        row,
        message: format!("{column} value {field:?} is not a number"),
    })
}

/// Parses an OHLC file. The header may list the five columns in any order
/// and any letter case; rows are kept in file order.
pub fn parse_dataset(text: &str) -> Result<MarketDataset> {
    let mut rdr = reader(text);
    let headers = rdr.headers()?.clone();
    let mut index = [0usize; 5];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or(Error::MissingColumn(name))?;
    }

    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::Row {
            row: row_no,
            message: e.to_string(),
        })?;
        let field = |k: usize| row.get(index[k]).unwrap_or("");
        let month = field(0);
        if month.is_empty() {
            return Err(Error::Row {
                row: row_no,
                message: "empty month label".into(),
            });
        }
        records.push(OhlcRecord::new(
            month,
            parse_price(field(1), COLUMNS[1], row_no)?,
            parse_price(field(2), COLUMNS[2], row_no)?,
            parse_price(field(3), COLUMNS[3], row_no)?,
            parse_price(field(4), COLUMNS[4], row_no)?,
        ));
    }
    Ok(MarketDataset::new(records)?)
}

/// Emits a dataset with every price at exactly two decimals.
pub fn write_dataset(dataset: &MarketDataset) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in dataset.records() {
        let _ = writeln!(
            out,
            "{},{:.2},{:.2},{:.2},{:.2}",
            r.month, r.open, r.high, r.low, r.close
        );
    }
    out
}

/// One forecast row: prices for the modelled columns, `None` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRow {
    pub month: String,
    pub values: [Option<f64>; 4],
}

/// Historical rows followed by forecast rows, flagged in a trailing
/// `forecast` column (`0` historical, `1` forecast).
pub fn write_forecast(history: &MarketDataset, forecast: &[ForecastRow]) -> String {
    let mut out = format!("{HEADER},forecast\n");
    for r in history.records() {
        let _ = writeln!(
            out,
            "{},{:.2},{:.2},{:.2},{:.2},0",
            r.month, r.open, r.high, r.low, r.close
        );
    }
    for row in forecast {
        out.push_str(&row.month);
        for value in row.values {
            out.push(',');
            if let Some(v) = value {
                let _ = write!(out, "{v:.2}");
            }
        }
        out.push_str(",1\n");
    }
    out
}

/// Parses a two-column `Month,<value>` file.
pub fn parse_base(text: &str) -> Result<Vec<(String, f64)>> {
    let mut rdr = reader(text);
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || !headers[0].eq_ignore_ascii_case("month") {
        return Err(Error::MissingColumn("Month"));
    }
    let value_name = headers[1].to_string();
    let mut rows = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::Row {
            row: row_no,
            message: e.to_string(),
        })?;
        let value = parse_price(&row[1], &value_name, row_no)?;
        if !value.is_finite() {
            return Err(Error::Row {
                row: row_no,
                message: format!("{value_name} value must be finite"),
            });
        }
        rows.push((row[0].to_string(), value));
    }
    if rows.is_empty() {
        return Err(swarmcast_core::Error::EmptyDataset.into());
    }
    Ok(rows)
}

/// Column index in the OHLC order used by [`ForecastRow::values`].
pub fn column_slot(column: Column) -> usize {
    match column {
        Column::Open => 0,
        Column::High => 1,
        Column::Low => 2,
        Column::Close => 3,
    }
}
