use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::LabError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => {
                // prints -0 as 0
                let v = v + 0.0;
                let a = v.abs();
                if a == 0.0 || !a.is_finite() || (1e-4..1e16).contains(&a) {
                    format!("{v}")
                } else {
                    format!("{v:e}")
                }
            }
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v + 0.0).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
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

/// Sweep output: one row per grid point, in grid order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column; `None` for empty or text cells.
    pub fn values(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[k] {
                    Cell::Num(v) => Some(v),
                    Cell::Int(v) => Some(v as f64),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, out: W, generated: Option<u64>) -> Result<(), LabError> {
        let mut out = out;
        if let Some(t) = generated {
            writeln!(out, "# generated {t}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self, generated: Option<u64>) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert(c.clone(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        let mut top = Map::new();
        if let Some(t) = generated {
            top.insert("generated".into(), Value::from(t));
        }
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    pub fn save(&self, path: &Path, json: bool, generated: Option<u64>) -> Result<(), LabError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        self.write_csv(std::fs::File::create(path)?, generated)?;
        if json {
            let text = serde_json::to_string_pretty(&self.to_json(generated))
                .map_err(|e| LabError::Io(e.to_string()))?;
            std::fs::write(path.with_extension("json"), text + "\n")?;
        }
        Ok(())
    }
}
