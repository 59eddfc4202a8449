//! Tabular reports rendered as CSV or JSON.
//!
//! Numbers are written with 17 significant digits in CSV and with the
//! shortest round-tripping form in JSON, so both renderings parse back to
//! the same doubles. Every numeric column carries a unit tag.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}', expected csv or json")),
        }
    }
}

/// Natural units built from κ0, ħ and m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Wavenumber,
    Length,
    Time,
    Velocity,
    Momentum,
    Radian,
    Dimensionless,
}

impl Unit {
    pub fn tag(self) -> &'static str {
        match self {
            Unit::Wavenumber => "kappa0",
            Unit::Length => "1/kappa0",
            Unit::Time => "m/(hbar*kappa0^2)",
            Unit::Velocity => "hbar*kappa0/m",
            Unit::Momentum => "hbar*kappa0",
            Unit::Radian => "rad",
            Unit::Dimensionless => "1",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Num(_) | Cell::Empty => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(if b { "pass" } else { "fail" }.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Column {
    pub name: &'static str,
    pub unit: Option<Unit>,
}

impl Column {
    pub const fn num(name: &'static str, unit: Unit) -> Self {
        Self { name, unit: Some(unit) }
    }

    pub const fn text(name: &'static str) -> Self {
        Self { name, unit: None }
    }

    pub fn header(&self) -> String {
        match self.unit {
            Some(u) => format!("{}[{}]", self.name, u.tag()),
            None => self.name.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FooterEntry {
    pub key: String,
    pub unit: Option<Unit>,
    pub value: Cell,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<FooterEntry>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: Vec<Column>) -> Self {
        Self {
            title: title.into(),
            columns,
            rows: Vec::new(),
            footer: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn footer(&mut self, key: impl Into<String>, unit: Option<Unit>, value: impl Into<Cell>) {
        self.footer.push(FooterEntry {
            key: key.into(),
            unit,
            value: value.into(),
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn footer_value(&self, key: &str) -> Option<&Cell> {
        self.footer.iter().find(|e| e.key == key).map(|e| &e.value)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.columns.iter().map(Column::header))
            .expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("writing to memory");
        }
        let mut out = String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8");
        for e in &self.footer {
            let key = match e.unit {
                Some(u) => format!("{}[{}]", e.key, u.tag()),
                None => e.key.clone(),
            };
            out.push_str(&format!("# {key} = {}\n", e.value.csv()));
        }
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|c| json!({ "name": c.name, "unit": c.unit.map(Unit::tag) }))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, cell) in self.columns.iter().zip(row) {
                    m.insert(c.name.to_string(), cell.json());
                }
                Value::Object(m)
            })
            .collect();
        let footer: Vec<Value> = self
            .footer
            .iter()
            .map(|e| json!({ "key": e.key, "unit": e.unit.map(Unit::tag), "value": e.value.json() }))
            .collect();
        let doc = json!({
            "title": self.title,
            "columns": columns,
            "rows": rows,
            "footer": footer,
            "notes": self.notes,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json values are serializable");
        s.push('\n');
        s
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}
