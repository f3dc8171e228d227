//! Deterministic table output: CSV with fixed 17-significant-digit floats,
//! or JSON with one object per row (NDJSON). Identical invocations produce
//! byte-identical bytes.

use std::io::Write;

use serde_json::{Map, Value};

/// One emitted cell.
#[derive(Clone, Debug)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => serde_json::json!(x),
            Cell::Int(n) => serde_json::json!(n),
            Cell::Text(s) => serde_json::json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

/// 17 significant digits, locale-free.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Table {
    pub name: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn parse_format(s: &str) -> Option<Format> {
    match s {
        "csv" => Some(Format::Csv),
        "json" => Some(Format::Json),
        _ => None,
    }
}

/// Writes the tables: CSV as header+rows blocks separated by a blank line;
/// JSON as one object per row tagged with the table name.
pub fn write_tables<W: Write>(w: &mut W, format: Format, tables: &[Table]) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(w)?;
                }
                writeln!(w, "{}", t.columns.join(","))?;
                for row in &t.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(w, "{}", cells.join(","))?;
                }
            }
        }
        Format::Json => {
            for t in tables {
                for row in &t.rows {
                    let mut obj = Map::new();
                    obj.insert("record".into(), Value::String(t.name.into()));
                    for (col, cell) in t.columns.iter().zip(row) {
                        obj.insert((*col).into(), cell.json());
                    }
                    writeln!(w, "{}", Value::Object(obj))?;
                }
            }
        }
    }
    Ok(())
}
