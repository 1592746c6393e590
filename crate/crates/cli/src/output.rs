//! Output files. Every file starts with a provenance line (a `#` comment for
//! CSV, a `mfcross` object for JSON); floats carry 17 significant digits.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub enum Cell {
    Text(String),
    Int(u64),
    Float(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // `inf`, `-inf`, `NaN`
        format!("{x}")
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => fmt_float(*x),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(n) => json!(n),
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => Value::String(format!("{x}")),
        }
    }
}

/// Destination directory plus the provenance stamped on every file.
pub struct Sink {
    dir: PathBuf,
    format: Format,
    hash: String,
    seed: u64,
}

impl Sink {
    pub fn create(dir: &Path, config: &RunConfig) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Sink {
            dir: dir.to_path_buf(),
            format: config.format,
            hash: config.hash(),
            seed: config.seed,
        })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn header_line(&self) -> String {
        format!("# mfcross {VERSION} config={} seed={}", self.hash, self.seed)
    }

    fn provenance(&self) -> Value {
        json!({ "version": VERSION, "config": self.hash, "seed": self.seed })
    }

    /// Write a table as `<stem>.csv` or `<stem>.json` depending on the format.
    pub fn table(&self, stem: &str, columns: &[&str], rows: &[Vec<Cell>]) -> CliResult<PathBuf> {
        match self.format {
            Format::Csv => {
                let path = self.path(&format!("{stem}.csv"));
                let mut buf = Vec::new();
                writeln!(buf, "{}", self.header_line()).expect("write to Vec");
                {
                    let mut w = csv::WriterBuilder::new()
                        .terminator(csv::Terminator::Any(b'\n'))
                        .from_writer(&mut buf);
                    w.write_record(columns)?;
                    for row in rows {
                        w.write_record(row.iter().map(Cell::to_csv))?;
                    }
                    w.flush().map_err(|e| CliError::io(&path, e))?;
                }
                self.write_bytes(&path, &buf)?;
                Ok(path)
            }
            Format::Json => {
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
                    .collect();
                self.json(stem, json!({ "columns": columns, "rows": rows }))
            }
        }
    }

    /// Write `<stem>.json`; `body` must be an object and gains a `mfcross`
    /// provenance entry.
    pub fn json(&self, stem: &str, body: Value) -> CliResult<PathBuf> {
        let path = self.path(&format!("{stem}.json"));
        let mut obj = Map::new();
        obj.insert("mfcross".into(), self.provenance());
        match body {
            Value::Object(m) => obj.extend(m),
            other => {
                obj.insert("value".into(), other);
            }
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(obj))?;
        text.push('\n');
        self.write_bytes(&path, text.as_bytes())?;
        Ok(path)
    }

    /// Write raw content preceded by the header line.
    pub fn raw_with_header(&self, name: &str, content: &[u8]) -> CliResult<PathBuf> {
        let path = self.path(name);
        let mut buf = format!("{}\n", self.header_line()).into_bytes();
        buf.extend_from_slice(content);
        self.write_bytes(&path, &buf)?;
        Ok(path)
    }

    pub fn write_bytes(&self, path: &Path, bytes: &[u8]) -> CliResult<()> {
        std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
    }
}

/// File-name suffix for one value of a swept parameter; empty when the sweep
/// has a single value.
pub fn suffix(param: &str, value: f64, n_values: usize) -> String {
    if n_values == 1 {
        String::new()
    } else {
        format!("_{param}{value}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_float(f64::INFINITY), "inf");
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn suffixes() {
        assert_eq!(suffix("K", 0.6, 1), "");
        assert_eq!(suffix("K", 0.01, 3), "_K0.01");
    }
}
