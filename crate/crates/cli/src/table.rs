//! Result tables, their CSV form, and plot-data files.

use std::fmt;

use anyhow::{bail, Result};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Value {
    fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(x) => Some(*x),
            Value::Text(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x:e}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or_else(|| Value::Text(String::new()), Value::Float)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

/// Column `name` measured in `unit` (`1` for dimensionless quantities).
pub fn col(name: &str, unit: &str) -> Column {
    Column {
        name: name.into(),
        unit: unit.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Header cells are `name [unit]`.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::to_string))?;
        }
        Ok(w.into_inner()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotSpec {
    pub x: String,
    /// One or two series.
    pub y: Vec<String>,
    pub sort_by_x: bool,
}

impl PlotSpec {
    pub fn new(x: &str, y: &[&str]) -> Self {
        PlotSpec {
            x: x.into(),
            y: y.iter().map(|s| s.to_string()).collect(),
            sort_by_x: false,
        }
    }

    pub fn sorted(mut self) -> Self {
        self.sort_by_x = true;
        self
    }
}

/// Whitespace-separated columns `x y [y2]` with a `#` comment header.
pub fn emit_plot_data(table: &Table, spec: &PlotSpec) -> Result<Vec<u8>> {
    if table.rows.is_empty() {
        bail!("cannot plot an empty table");
    }
    if spec.y.is_empty() || spec.y.len() > 2 {
        bail!("plot data has two or three columns, got {}", spec.y.len() + 1);
    }
    let names: Vec<&String> = std::iter::once(&spec.x).chain(&spec.y).collect();
    let mut indices = Vec::new();
    for name in &names {
        match table.column_index(name) {
            Some(i) => indices.push(i),
            None => bail!("no column `{name}` in table"),
        }
    }
    let mut points = Vec::with_capacity(table.rows.len());
    for (r, row) in table.rows.iter().enumerate() {
        let mut point = Vec::with_capacity(indices.len());
        for (&i, name) in indices.iter().zip(&names) {
            match row[i].as_f64() {
                Some(x) => point.push(x),
                None => bail!("row {r}: column `{name}` is not numeric"),
            }
        }
        points.push(point);
    }
    if spec.sort_by_x {
        points.sort_by(|a, b| a[0].total_cmp(&b[0]));
    }
    let mut out = String::new();
    out.push('#');
    for &i in &indices {
        let c = &table.columns[i];
        out.push_str(&format!(" {}[{}]", c.name, c.unit));
    }
    out.push('\n');
    for p in points {
        let line: Vec<String> = p.iter().map(|x| format!("{x:e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out.into_bytes())
}
