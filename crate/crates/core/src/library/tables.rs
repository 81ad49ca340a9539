//! Golden rows of the two reference iteration tables and the comparison
//! against the recurrence.

use serde::Serialize;

use super::paper::paper_recurrence_run;
use crate::error::{Error, Result};

pub const TABLE1_CSV: &str = include_str!("../../fixtures/table1.csv");
pub const TABLE2_CSV: &str = include_str!("../../fixtures/table2.csv");

/// Absolute tolerance for matching printed digits. The tables print nine
/// or ten significant digits and truncate rather than round in places.
pub const TABLE_TOL: f64 = 5e-9;

pub const TABLE1_START: (f64, f64) = (10.0, 15.0);
pub const TABLE2_START: (f64, f64) = (5.0, 1.25);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureRow {
    pub n: usize,
    pub x: f64,
    pub y: f64,
}

/// Parses a `n,x,y` CSV with a header line.
pub fn parse_fixture(text: &str) -> Result<Vec<FixtureRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some("n,x,y") => {}
        other => {
            return Err(Error::InvalidProblem(format!(
                "fixture header must be `n,x,y`, found {other:?}"
            )))
        }
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad =
                || Error::InvalidProblem(format!("fixture line {}: cannot parse `{line}`", i + 2));
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [n, x, y] = fields.as_slice() else {
                return Err(bad());
            };
            Ok(FixtureRow {
                n: n.parse().map_err(|_| bad())?,
                x: x.parse().map_err(|_| bad())?,
                y: y.parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowCheck {
    pub table: usize,
    pub n: usize,
    pub expected: (f64, f64),
    pub computed: (f64, f64),
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub rows: Vec<RowCheck>,
    pub tol: f64,
}

impl TableReport {
    pub fn passed_count(&self) -> usize {
        self.rows.iter().filter(|r| r.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<&RowCheck> {
        self.rows.iter().find(|r| !r.passed)
    }
}

fn compare(
    table: usize,
    start: (f64, f64),
    rows: &[FixtureRow],
    tol: f64,
) -> Result<Vec<RowCheck>> {
    let last = rows.iter().map(|r| r.n).max().unwrap_or(0);
    let run = paper_recurrence_run(start.0, start.1, last)?;
    Ok(rows
        .iter()
        .map(|row| {
            let (_, x, y) = run[row.n];
            RowCheck {
                table,
                n: row.n,
                expected: (row.x, row.y),
                computed: (x, y),
                passed: (x - row.x).abs() <= tol && (y - row.y).abs() <= tol,
            }
        })
        .collect())
}

/// Runs the recurrence from both tabulated starting points and compares it
/// with the given fixture rows.
pub fn reproduce_tables(
    table1: &[FixtureRow],
    table2: &[FixtureRow],
    tol: f64,
) -> Result<TableReport> {
    let mut rows = compare(1, TABLE1_START, table1, tol)?;
    rows.extend(compare(2, TABLE2_START, table2, tol)?);
    Ok(TableReport { rows, tol })
}

/// [`reproduce_tables`] against the embedded fixtures.
pub fn reproduce_embedded_tables() -> Result<TableReport> {
    reproduce_tables(
        &parse_fixture(TABLE1_CSV)?,
        &parse_fixture(TABLE2_CSV)?,
        TABLE_TOL,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_fixtures_match() {
        let report = reproduce_embedded_tables().unwrap();
        assert_eq!(report.rows.len(), 13);
        assert!(report.all_passed(), "{:?}", report.first_failure());
    }

    #[test]
    fn perturbed_cell_is_reported() {
        let mut t1 = parse_fixture(TABLE1_CSV).unwrap();
        t1[5].x += 1e-8;
        let report = reproduce_tables(&t1, &parse_fixture(TABLE2_CSV).unwrap(), TABLE_TOL).unwrap();
        assert!(!report.all_passed());
        let first = report.first_failure().unwrap();
        assert_eq!((first.table, first.n), (1, 249));
        assert_eq!(report.passed_count(), 12);
    }

    #[test]
    fn malformed_fixtures_rejected() {
        assert!(parse_fixture("a,b,c\n1,2,3").is_err());
        assert!(parse_fixture("n,x,y\n1,2").is_err());
        assert!(parse_fixture("n,x,y\n1,abc,3").is_err());
    }
}
