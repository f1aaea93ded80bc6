//! Tabular results and their CSV, JSON and text renderings.

use std::io::Write;

use serde_json::{json, Map, Value};

use cardinal_core::scalars::{self, BigReal};

use crate::config::RunConfig;

/// Version of the JSON document layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Marker prefixed to numbers with fewer certified digits than displayed.
pub const UNCERTIFIED_MARKER: char = '~';

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Empty,
    Int(i64),
    Bool(bool),
    Text(String),
    /// Exact rational rendered as `p/q`.
    Rational(String),
    /// Decimal rendering of a certified number.
    Number { text: String, certified: bool },
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn int(v: impl TryInto<i64>) -> Cell {
        Cell::Int(v.try_into().unwrap_or(i64::MAX))
    }

    /// `x` to `digits` significant digits, certified when at least `digits`
    /// leading digits agree with a doubled-precision run.
    pub fn number(x: &BigReal, digits: u32, certified_digits: u32) -> Cell {
        Cell::Number { text: scalars::format_significant(x, digits), certified: certified_digits >= digits }
    }

    pub fn exact(q: &rug::Rational) -> Cell {
        Cell::Rational(q.to_string())
    }

    pub fn is_uncertified(&self) -> bool {
        matches!(self, Cell::Number { certified: false, .. })
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) | Cell::Rational(s) => s.clone(),
            Cell::Number { text, certified: true } => text.clone(),
            Cell::Number { text, certified: false } => format!("{UNCERTIFIED_MARKER}{text}"),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Bool(b) => json!(b),
            _ => Value::String(self.render()),
        }
    }
}

/// Result of one command: a fixed column schema, rows in deterministic
/// order and summary counters.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Ordered `(key, value)` summary entries.
    pub summary: Vec<(&'static str, Value)>,
    pub counterexamples: usize,
    pub cross_check_failures: usize,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Report { columns, ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn uncertified_cells(&self) -> usize {
        self.rows.iter().flatten().filter(|c| c.is_uncertified()).count()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()
    }

    pub fn write_json<W: Write>(&self, config: &RunConfig, mut out: W) -> std::io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    obj.insert((*col).to_string(), cell.to_json());
                }
                Value::Object(obj)
            })
            .collect();
        let mut summary = Map::new();
        for (k, v) in &self.summary {
            summary.insert((*k).to_string(), v.clone());
        }
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": config.command.as_str(),
            "config": config,
            "columns": self.columns,
            "rows": rows,
            "summary": summary,
            "generated_by": generated_by(),
        });
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let rendered: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| rendered.iter().map(|r| r[i].chars().count()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| -> String {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            parts.join("  ").trim_end().to_string()
        };
        writeln!(out, "{}", line(self.columns.clone()))?;
        for row in &rendered {
            writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
        }
        for (k, v) in &self.summary {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            writeln!(out, "# {k}: {v}")?;
        }
        Ok(())
    }
}

pub fn generated_by() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}
