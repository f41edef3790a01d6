//! Plot-ready tables in CSV or JSON with a self-describing header.
//!
//! CSV files start with `# key: value` comment lines, then one header row.
//! Floats are written with 17 significant digits so that runs can be diffed
//! byte for byte.

use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config {
                field: "format".into(),
                reason: format!("expected csv or json, got `{s}`"),
            }),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
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

/// `{:.16e}`, with `inf`, `-inf` and `nan` spelled out.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(format_float(*v)),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Ordered key/value pairs describing how a table was produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Header {
    entries: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &str) -> Self {
        let mut h = Header::default();
        h.push("tool", format!("leaf-ldp {}", env!("CARGO_PKG_VERSION")));
        h.push("command", command);
        h
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    /// Adds the current UTC time.
    pub fn timestamp(&mut self) -> &mut Self {
        let now = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        self.push("generated", now)
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Header,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra JSON-only payload, such as per-solution summaries.
    pub summary: Option<Value>,
}

impl Table {
    pub fn new(header: Header, columns: &[&str]) -> Self {
        Table {
            header,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Domain(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        for (k, v) in self.header.entries() {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> Result<()> {
        let header: Map<String, Value> = self
            .header
            .entries()
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(r.iter().map(Cell::json))
                        .collect(),
                )
            })
            .collect();
        let mut doc = json!({ "header": header, "rows": rows });
        if let Some(s) = &self.summary {
            doc["summary"] = s.clone();
        }
        serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        let mut h = Header::new("demo");
        h.push("model", "rpa:beta=0,gamma=1:1/2;2:1/2,seed=7");
        let mut t = Table::new(h, &["k", "log_prob", "name"]);
        t.push(vec![1u64.into(), (-0.5f64).into(), "a,b".into()])
            .unwrap();
        t.push(vec![2u64.into(), f64::NEG_INFINITY.into(), "c".into()])
            .unwrap();
        t
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        table().write(Format::Csv, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# tool: leaf-ldp"));
        assert_eq!(lines[1], "# command: demo");
        assert_eq!(lines[3], "k,log_prob,name");
        assert_eq!(lines[4], "1,-5.0000000000000000e-1,\"a,b\"");
        assert_eq!(lines[5], "2,-inf,c");
    }

    #[test]
    fn json_layout() {
        let mut buf = Vec::new();
        table().write(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["header"]["command"], "demo");
        assert_eq!(v["rows"][0]["log_prob"], -0.5);
        assert_eq!(v["rows"][1]["log_prob"], "-inf");
    }

    #[test]
    fn floats_keep_seventeen_digits() {
        let x = 0.1 + 0.2;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        assert_eq!(format_float(x), "3.0000000000000004e-1");
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let mut t = table();
        assert!(t.push(vec![1u64.into()]).is_err());
    }
}
