//! Output records: JSON envelopes for reports, CSV tables for grids and
//! samples.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize)]
pub struct OutputRecord<'a> {
    pub schema_version: &'static str,
    pub command: &'a str,
    pub payload: Value,
}

pub enum Record {
    /// Rendered JSON text.
    Json(String),
    Csv(Csv),
}

impl Record {
    pub fn json<T: Serialize>(command: &str, payload: &T) -> Record {
        let payload = serde_json::to_value(payload).expect("payload types serialize");
        let rec = OutputRecord { schema_version: SCHEMA_VERSION, command, payload };
        Record::Json(serde_json::to_string_pretty(&rec).expect("record serializes"))
    }

    pub fn write(&self, mut out: impl Write) -> io::Result<()> {
        match self {
            Record::Json(text) => writeln!(out, "{text}"),
            Record::Csv(t) => t.write(out),
        }
    }
}

/// 17 significant digits, enough to reparse to the identical `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Csv { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: impl IntoIterator<Item = String>) {
        self.rows.push(row.into_iter().collect());
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|v| num(*v)));
    }

    fn write(&self, out: impl Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()
    }
}

/// Machine-readable error on stdout.
pub fn emit_error(command: &str, kind: &str, message: &str) {
    let v = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": { "kind": kind, "message": message },
    });
    println!("{}", serde_json::to_string_pretty(&v).expect("error record serializes"));
}
