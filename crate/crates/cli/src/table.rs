//! Result tables and their CSV and JSON encodings.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::Result;

/// Significant digits kept for floating-point cells.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Text(String::new()), Cell::Float)
    }
}

/// `v` rounded to `SIGNIFICANT_DIGITS` significant digits.
pub fn round_significant(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .unwrap_or(v)
}

/// Shortest decimal text of `v` after rounding.
pub fn format_float(v: f64) -> String {
    let r = round_significant(v);
    if r == 0.0 {
        return "0".into();
    }
    if !r.is_finite() || (1e-6..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Number::from_f64(round_significant(*v))
                .map_or_else(|| Value::String(format_float(*v)), Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            _ => None,
        }
    }
}

/// Column values shared by every row of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunHeader {
    pub n: usize,
    pub theta: f64,
    pub seed: u64,
    pub trials: usize,
}

/// A table whose rows all start with `n, theta, seed, trials`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

const HEADER_COLUMNS: [&str; 4] = ["n", "theta", "seed", "trials"];

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: HEADER_COLUMNS
                .iter()
                .chain(columns)
                .map(|c| c.to_string())
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, header: RunHeader, cells: Vec<Cell>) {
        assert_eq!(
            cells.len() + HEADER_COLUMNS.len(),
            self.columns.len(),
            "row width does not match columns"
        );
        let mut row: Vec<Cell> = vec![
            header.n.into(),
            header.theta.into(),
            header.seed.into(),
            header.trials.into(),
        ];
        row.extend(cells);
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Cell of `row` in column `name`.
    pub fn get(&self, row: usize, name: &str) -> Option<&Cell> {
        let col = self.columns.iter().position(|c| c == name)?;
        self.rows.get(row)?.get(col)
    }

    /// First row whose column `key` holds the text `value`.
    pub fn find(&self, key: &str, value: &str) -> Option<usize> {
        let col = self.columns.iter().position(|c| c == key)?;
        self.rows
            .iter()
            .position(|r| matches!(&r[col], Cell::Text(s) if s == value))
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write_json(&self, mut out: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        out.write_all(b"\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_twelve_digits() {
        assert_eq!(format_float(0.35843819870123456), "0.358438198701");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.5e-9), "1.5e-9");
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn csv_uses_lf_and_header() {
        let mut t = Table::new(&["x"]);
        let h = RunHeader { n: 3, theta: 0.3, seed: 7, trials: 10 };
        t.push(h, vec![2.5.into()]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,theta,seed,trials,x\n3,0.3,7,10,2.5\n");
        let j = t.to_json();
        assert_eq!(j[0]["x"], 2.5);
        assert_eq!(t.get(0, "n"), Some(&Cell::Int(3)));
    }
}
