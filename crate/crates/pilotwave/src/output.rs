//! Tabular output as CSV (with a `#` comment header) or JSON (with a `meta`
//! object). Both carry the tool version, seed and input digests.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::files::InputFile;

pub const TOOL: &str = "pilotwave";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance written at the top of every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    /// Extra `key=value` lines, e.g. `T=100`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<(String, String)>,
}

impl Meta {
    pub fn new(seed: u64, inputs: &[&InputFile]) -> Self {
        Meta {
            tool: TOOL,
            version: VERSION,
            seed,
            inputs: inputs
                .iter()
                .map(|f| InputDigest {
                    path: f.path.display().to_string(),
                    sha256: f.sha256.clone(),
                })
                .collect(),
            extra: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.push((key.to_string(), value.to_string()));
        self
    }

    pub fn write_comment(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "# {} {}", self.tool, self.version)?;
        writeln!(w, "# seed={}", self.seed)?;
        for input in &self.inputs {
            writeln!(w, "# input {} sha256={}", input.path, input.sha256)?;
        }
        for (k, v) in &self.extra {
            writeln!(w, "# {k}={v}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "tool": self.tool,
            "version": self.version,
            "seed": self.seed,
            "inputs": self.inputs,
        });
        for (k, val) in &self.extra {
            v[k] = Value::String(val.clone());
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Real(x) => x.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn write_table(w: &mut dyn Write, meta: &Meta, table: &Table, format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            meta.write_comment(w)?;
            let mut writer = csv::Writer::from_writer(w);
            writer.write_record(&table.columns)?;
            for row in &table.rows {
                writer.write_record(row.iter().map(Cell::csv))?;
            }
            writer.flush()
        }
        Format::Json => {
            let doc = json!({
                "meta": meta.to_json(),
                "columns": table.columns,
                "rows": table.rows,
            });
            serde_json::to_writer(&mut *w, &doc)?;
            writeln!(w)
        }
    }
}

/// Destination of a command's primary output.
pub enum Sink {
    Stdout(io::Stdout),
    File(PathBuf, BufWriter<File>),
}

impl Sink {
    pub fn open(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Sink::Stdout(io::stdout())),
            Some(p) => File::create(p)
                .map(|f| Sink::File(p.to_path_buf(), BufWriter::new(f)))
                .map_err(|e| CliError::io(p, e)),
        }
    }

    pub fn writer(&mut self) -> &mut dyn Write {
        match self {
            Sink::Stdout(s) => s,
            Sink::File(_, f) => f,
        }
    }

    pub fn finish(mut self, result: io::Result<()>) -> CliResult<()> {
        let flushed = result.and_then(|_| self.writer().flush());
        flushed.map_err(|e| match &self {
            Sink::Stdout(_) => CliError::io(Path::new("<stdout>"), e),
            Sink::File(p, _) => CliError::io(p, e),
        })
    }
}
