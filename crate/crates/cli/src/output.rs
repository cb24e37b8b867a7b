//! Row tables with per-field provenance, written as CSV or JSON.

use std::io::Write;

use serde_json::{Map, Number, Value};

/// Largest integer every JSON reader holds exactly.
const JSON_SAFE_INT: u128 = 1 << 53;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prov {
    Exact,
    Predicted,
    Ratio,
}

impl Prov {
    fn tag(self) -> &'static str {
        match self {
            Prov::Exact => "exact",
            Prov::Predicted => "predicted",
            Prov::Ratio => "ratio",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u128),
    Float(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as u128)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as u128)
    }
}

impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        Cell::Int(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float_text(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) if *v > JSON_SAFE_INT => Value::String(v.to_string()),
            Cell::Int(v) => Value::Number(Number::from(*v as u64)),
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Cell::Int(_) | Cell::Float(_))
    }
}

/// Shortest round-trip decimal, so equal values always print equally.
fn float_text(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else {
        String::new()
    }
}

/// A column; numeric columns carry a provenance tag emitted as `<name>_prov`.
#[derive(Debug, Clone)]
pub struct Column {
    pub name: &'static str,
    pub prov: Option<Prov>,
}

pub const fn exact(name: &'static str) -> Column {
    Column {
        name,
        prov: Some(Prov::Exact),
    }
}

pub const fn predicted(name: &'static str) -> Column {
    Column {
        name,
        prov: Some(Prov::Predicted),
    }
}

pub const fn ratio(name: &'static str) -> Column {
    Column {
        name,
        prov: Some(Prov::Ratio),
    }
}

pub const fn label(name: &'static str) -> Column {
    Column { name, prov: None }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<Column>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        debug_assert!(row
            .iter()
            .zip(&self.columns)
            .all(|(c, col)| !c.is_numeric() || col.prov.is_some()));
        self.rows.push(row);
    }

    fn header(&self) -> Vec<String> {
        let mut h = Vec::new();
        for c in &self.columns {
            h.push(c.name.to_string());
            if c.prov.is_some() {
                h.push(format!("{}_prov", c.name));
            }
        }
        h
    }

    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for row in &self.rows {
            let mut rec = Vec::new();
            for (cell, col) in row.iter().zip(&self.columns) {
                rec.push(cell.csv());
                if let Some(p) = col.prov {
                    rec.push(p.tag().to_string());
                }
            }
            w.write_record(rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (cell, col) in row.iter().zip(&self.columns) {
                    obj.insert(col.name.to_string(), cell.json());
                    if let Some(p) = col.prov {
                        obj.insert(format!("{}_prov", col.name), Value::from(p.tag()));
                    }
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }

    pub fn write_json(&self, mut out: impl Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)
    }
}
