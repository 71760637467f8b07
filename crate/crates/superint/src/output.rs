//! Byte-stable artifacts: CSV tables and sorted-key JSON reports.
//!
//! Every float is printed with 17 significant digits (`{:.16e}`), so the
//! decimal text round-trips to the same `f64`. JSON objects are
//! `serde_json::Map`, which is a `BTreeMap` here, hence sorted keys; floats go
//! through [`SciFormatter`].

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// A float as a JSON value; `null` when non-finite.
pub fn num(v: f64) -> Value {
    Value::from(v)
}

pub fn nums(vs: &[f64]) -> Value {
    Value::Array(vs.iter().map(|&v| num(v)).collect())
}

/// Small builder for sorted JSON objects.
#[derive(Debug, Default, Clone)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.to_owned(), value.into());
        self
    }

    pub fn float(self, key: &str, v: f64) -> Self {
        self.set(key, num(v))
    }

    pub fn insert(&mut self, key: &str, value: impl Into<Value>) {
        self.0.insert(key.to_owned(), value.into());
    }
}

impl From<Obj> for Value {
    fn from(o: Obj) -> Self {
        Value::Object(o.0)
    }
}

/// Rows of floats under a header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| fmt_float(v)))
                .map_err(csv_err)?;
        }
        w.into_inner()
            .map_err(|e| CliError::Io("csv".into(), e.into_error()))
    }

    pub fn to_json(&self) -> Value {
        Obj::new()
            .set("columns", self.header.clone())
            .set("rows", Value::Array(self.rows.iter().map(|r| nums(r)).collect()))
            .into()
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io("csv".into(), io::Error::other(e))
}

/// Flattens a report to `key,value` rows with dotted paths (array entries by
/// index), in sorted-key order.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_owned()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(&join(k), v, out)),
            Value::Array(a) => a
                .iter()
                .enumerate()
                .for_each(|(i, v)| walk(&join(&i.to_string()), v, out)),
            Value::String(s) => out.push((prefix.to_owned(), s.clone())),
            Value::Number(n) if n.is_f64() => {
                out.push((prefix.to_owned(), fmt_float(n.as_f64().unwrap_or(f64::NAN))))
            }
            other => out.push((prefix.to_owned(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

/// Pretty printer that writes floats as `{:.16e}`.
pub struct SciFormatter(PrettyFormatter<'static>);

impl Default for SciFormatter {
    fn default() -> Self {
        Self(PrettyFormatter::new())
    }
}

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(fmt_float(v).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn json_bytes(value: &Value) -> Vec<u8> {
    let mut bytes = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut bytes, SciFormatter::default());
    value
        .serialize(&mut ser)
        .expect("writing JSON to memory cannot fail");
    bytes.push(b'\n');
    bytes
}

pub fn report_bytes(value: &Value, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => Ok(json_bytes(value)),
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(["key", "value"]).map_err(csv_err)?;
            for (k, v) in flatten(value) {
                w.write_record([k, v]).map_err(csv_err)?;
            }
            w.into_inner()
                .map_err(|e| CliError::Io("csv".into(), e.into_error()))
        }
    }
}

pub fn table_bytes(table: &Table, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => Ok(json_bytes(&table.to_json())),
    }
}

/// Writes to `path`, or stdout when absent.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut f = File::create(p).map_err(|e| CliError::Io(p.display().to_string(), e))?;
            f.write_all(bytes)
                .map_err(|e| CliError::Io(p.display().to_string(), e))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io("stdout".into(), e))
        }
    }
}
