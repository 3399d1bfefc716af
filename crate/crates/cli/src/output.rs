//! Run manifests and the CSV / JSON encodings of result tables.

use std::io::{self, Write};

use serde_json::{Map, Number, Value as Json};

/// Tool identifier written at the top of every output.
pub const TOOL: &str = "xychain";

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Value {
    /// CSV cell. Floats use the shortest representation that round-trips.
    pub fn to_csv(&self) -> String {
        match self {
            Value::Num(x) => format!("{x:?}"),
            Value::Int(i) => i.to_string(),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::Empty => String::new(),
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Num(x) => Number::from_f64(*x).map_or(Json::Null, Json::Number),
            Value::Int(i) => Json::from(*i),
            Value::Text(s) => Json::from(s.as_str()),
            Value::Bool(b) => Json::Bool(*b),
            Value::Empty => Json::Null,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<u64> for Value {
    fn from(i: u64) -> Self {
        Value::Int(i as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(x: Option<T>) -> Self {
        x.map_or(Value::Empty, Into::into)
    }
}

/// Everything needed to reproduce a run. Carries no timestamp.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    pub parameters: Vec<(String, Value)>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), version: env!("CARGO_PKG_VERSION"), parameters: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.push((key.to_owned(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.push((key.to_owned(), value.into()));
    }

    fn to_json(&self) -> Json {
        let mut params = Map::new();
        for (k, v) in &self.parameters {
            params.insert(k.clone(), v.to_json());
        }
        let mut m = Map::new();
        m.insert("tool".into(), TOOL.into());
        m.insert("version".into(), self.version.into());
        m.insert("command".into(), self.command.as_str().into());
        m.insert("parameters".into(), Json::Object(params));
        Json::Object(m)
    }
}

/// A named-column table plus optional trailing blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Self { columns: columns.iter().map(|c| c.as_ref().to_owned()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write_csv(&self, out: &mut dyn Write, prefix: &str) -> io::Result<()> {
        writeln!(out, "{prefix}{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::to_csv).collect();
            writeln!(out, "{prefix}{}", cells.join(","))?;
        }
        Ok(())
    }

    fn to_json(&self) -> Json {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    obj.insert(c.clone(), v.to_json());
                }
                Json::Object(obj)
            })
            .collect();
        Json::Array(rows)
    }
}

/// Complete output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub manifest: RunManifest,
    pub rows: Table,
    /// Emitted as the `peaks` array; only scans fill it.
    pub peaks: Option<Table>,
    /// Summary values such as maximum deviations.
    pub summary: Vec<(String, Value)>,
}

impl Report {
    pub fn new(manifest: RunManifest, rows: Table) -> Self {
        Self { manifest, rows, peaks: None, summary: Vec::new() }
    }

    /// Manifest lines, header row, data rows, then `#`-prefixed trailing blocks.
    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "# {TOOL} {}", self.manifest.version)?;
        writeln!(out, "# command: {}", self.manifest.command)?;
        for (k, v) in &self.manifest.parameters {
            writeln!(out, "# {k}: {}", v.to_csv())?;
        }
        self.rows.write_csv(out, "")?;
        if let Some(peaks) = &self.peaks {
            writeln!(out, "# peaks: {}", peaks.rows.len())?;
            peaks.write_csv(out, "# ")?;
        }
        for (k, v) in &self.summary {
            writeln!(out, "# {k}: {}", v.to_csv())?;
        }
        Ok(())
    }

    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut m = Map::new();
        m.insert("manifest".into(), self.manifest.to_json());
        m.insert("rows".into(), self.rows.to_json());
        m.insert("peaks".into(), self.peaks.as_ref().map_or(Json::Array(Vec::new()), Table::to_json));
        if !self.summary.is_empty() {
            let mut s = Map::new();
            for (k, v) in &self.summary {
                s.insert(k.clone(), v.to_json());
            }
            m.insert("summary".into(), Json::Object(s));
        }
        serde_json::to_writer_pretty(&mut *out, &Json::Object(m))?;
        writeln!(out)
    }
}
