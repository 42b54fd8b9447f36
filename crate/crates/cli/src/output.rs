//! Report serialization. CSV carries the schema stamp, the resolved
//! configuration and the diagnostics as leading comment lines, then a
//! header row and data rows; floats are printed in full-precision
//! scientific notation (17 significant digits) so downstream plotting never
//! re-introduces rounding. JSON is a single object
//! {schema, config, rows, diagnostics}.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{OutputFormat, ResolvedConfig};

pub const SCHEMA: &str = "gribov-lab-report/1";

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
        }
    }
}

/// A rectangular report table plus free-form diagnostics.
#[derive(Debug, Clone)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub diagnostics: Map<String, Value>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            diagnostics: Map::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn diagnostic<T: Serialize>(&mut self, key: &str, value: T) {
        self.diagnostics
            .insert(key.to_string(), serde_json::to_value(value).unwrap());
    }

    pub fn render(&self, config: &ResolvedConfig) -> String {
        match config.format {
            OutputFormat::Csv => self.render_csv(config),
            OutputFormat::Json => self.render_json(config),
        }
    }

    fn render_csv(&self, config: &ResolvedConfig) -> String {
        let mut out = String::new();
        out.push_str(&format!("# schema: {SCHEMA}\n"));
        out.push_str(&format!(
            "# config: {}\n",
            serde_json::to_string(config).unwrap()
        ));
        out.push_str(&format!(
            "# diagnostics: {}\n",
            serde_json::to_string(&self.diagnostics).unwrap()
        ));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self, config: &ResolvedConfig) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row.iter()) {
                    obj.insert(name.clone(), cell.to_json());
                }
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "schema": SCHEMA,
            "config": serde_json::to_value(config).unwrap(),
            "rows": rows,
            "diagnostics": Value::Object(self.diagnostics.clone()),
        });
        let mut text = serde_json::to_string_pretty(&doc).unwrap();
        text.push('\n');
        text
    }
}

/// Write to the configured path or standard output.
pub fn emit(text: &str, output: Option<&str>) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
        }
    }
}
