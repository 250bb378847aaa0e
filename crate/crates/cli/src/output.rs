//! Table rendering. CSV carries a `#` metadata block, then one header row,
//! then data; JSON holds the same three parts as `metadata`, `columns`,
//! `rows` (plus `summary` where a command has one).

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

/// Build identifier baked in at compile time.
pub const BUILD: &str = env!("VOIGT_CASIMIR_BUILD");

/// Reflectivities use the pure Voigt orientation for every in-plane direction.
pub const APPROXIMATION: &str = "voigt-orientation-all-azimuths";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // Routed through the 9-digit text so both formats carry the same numbers.
            Cell::Num(v) => fmt_num(*v).parse::<f64>().map(Value::from).unwrap_or(Value::Null),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Nine significant digits.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary_columns: Vec<&'static str>,
    pub summary: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            ..Table::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_summary(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.summary_columns.len());
        self.summary.push(row);
    }
}

fn run_section(command: &str) -> Vec<(&'static str, String)> {
    vec![
        ("command", command.to_string()),
        ("build", BUILD.to_string()),
        ("approximation", APPROXIMATION.to_string()),
    ]
}

pub fn render(table: &Table, cfg: &RunConfig, command: &str) -> String {
    match cfg.format {
        Format::Csv => render_csv(table, cfg, command),
        Format::Json => render_json(table, cfg, command),
    }
}

fn render_csv(table: &Table, cfg: &RunConfig, command: &str) -> String {
    let mut out = String::new();
    let mut sections = vec![("run", run_section(command))];
    sections.extend(cfg.sections());
    for (section, entries) in sections {
        for (k, v) in entries {
            out.push_str(&format!("# {section}.{k}={v}\n"));
        }
    }
    for row in &table.summary {
        let parts: Vec<String> = table
            .summary_columns
            .iter()
            .zip(row)
            .map(|(c, v)| format!("{c}={}", v.csv()))
            .collect();
        out.push_str(&format!("# summary: {}\n", parts.join(" ")));
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn records(columns: &[&'static str], rows: &[Vec<Cell>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| {
                let obj: Map<String, Value> = columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

fn render_json(table: &Table, cfg: &RunConfig, command: &str) -> String {
    let mut meta = Map::new();
    let mut sections = vec![("run", run_section(command))];
    sections.extend(cfg.sections());
    for (section, entries) in sections {
        let obj: Map<String, Value> = entries
            .into_iter()
            .map(|(k, v)| (k.to_string(), Value::from(v)))
            .collect();
        meta.insert(section.to_string(), Value::Object(obj));
    }
    let mut doc = json!({
        "metadata": meta,
        "columns": table.columns,
        "rows": records(&table.columns, &table.rows),
    });
    if !table.summary_columns.is_empty() {
        doc["summary"] = records(&table.summary_columns, &table.summary);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
    s.push('\n');
    s
}
