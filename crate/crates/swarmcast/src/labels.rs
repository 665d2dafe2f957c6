//! Calendar continuation of month labels such as `Dec14`, `Sept11`,
//! `Jan 15` or `2014-12`.

use std::fmt;

use crate::error::{Error, Result};

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];
const SHORT: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sept", "Oct", "Nov", "Dec",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct YearMonth {
    pub year: i32,
    /// 1..=12
    pub month: u32,
}

/// How generated labels are spelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelStyle {
    /// `2015-01`
    #[default]
    Iso,
    /// `Jan 15`
    Short,
}

impl YearMonth {
    /// Accepts `YYYY-MM`, or a month name (at least three letters, any case)
    /// followed by an optional space and a two- or four-digit year.
    pub fn parse(label: &str) -> Result<Self> {
        let bad = || Error::MonthLabel(label.to_string());
        let s = label.trim();
        if let Some((y, m)) = s.split_once('-') {
            let year = y.parse::<i32>().map_err(|_| bad())?;
            let month = m.parse::<u32>().map_err(|_| bad())?;
            if y.len() != 4 || !(1..=12).contains(&month) {
                return Err(bad());
            }
            return Ok(Self { year, month });
        }

        let split = s.find(|c: char| !c.is_ascii_alphabetic()).ok_or_else(bad)?;
        let (name, year) = s.split_at(split);
        let name = name.to_ascii_lowercase();
        let year = year.trim_start();
        if name.len() < 3 || !year.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let month = MONTHS
            .iter()
            .position(|m| m.starts_with(&name))
            .ok_or_else(bad)? as u32
            + 1;
        let year = match year.len() {
            2 => 2000 + year.parse::<i32>().map_err(|_| bad())?,
            4 => year.parse::<i32>().map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        Ok(Self { year, month })
    }

    pub fn next(self) -> Self {
        if self.month == 12 {
            Self {
                year: self.year + 1,
                month: 1,
            }
        } else {
            Self {
                year: self.year,
                month: self.month + 1,
            }
        }
    }

    pub fn format(self, style: LabelStyle) -> String {
        match style {
            LabelStyle::Iso => self.to_string(),
            LabelStyle::Short => format!(
                "{} {:02}",
                SHORT[self.month as usize - 1],
                self.year.rem_euclid(100)
            ),
        }
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// The `count` labels that follow `last`.
pub fn continue_labels(last: &str, count: usize, style: LabelStyle) -> Result<Vec<String>> {
    let mut current = YearMonth::parse(last)?;
    Ok((0..count)
        .map(|_| {
            current = current.next();
            current.format(style)
        })
        .collect())
}
