//! Report envelope and writers.
//!
//! JSON goes through `serde_json::Value`, whose object map is a `BTreeMap`,
//! so keys come out sorted and the bytes depend only on the data. Every
//! exact value `"(u, v, e)"` gets a sibling `<key>_decimal` holding its
//! `f64` approximation; the string stays the normative form.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use blindlab_core::exact::ExactReal;
use clap::ValueEnum;
use serde_json::{Map, Number, Value};

pub const TOOL: &str = "blindlab";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What a command produced: the structured result, a flat table for CSV
/// output, and whether every check passed.
pub struct Outcome {
    pub result: Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub pass: bool,
}

fn parse_exact(v: &Value) -> Option<f64> {
    match v {
        Value::String(s) if s.starts_with('(') => s.parse::<ExactReal>().ok().map(|r| r.to_f64()),
        _ => None,
    }
}

fn decimal(x: f64) -> Value {
    Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// Adds `<key>_decimal` next to every exact value or array of exact values.
pub fn annotate_decimals(value: &mut Value) {
    match value {
        Value::Object(map) => {
            let mut extra = Map::new();
            for (k, v) in map.iter_mut() {
                if let Some(x) = parse_exact(v) {
                    extra.insert(format!("{k}_decimal"), decimal(x));
                    continue;
                }
                if let Value::Array(items) = v {
                    let parsed: Option<Vec<f64>> = items.iter().map(parse_exact).collect();
                    if let Some(xs) = parsed.filter(|xs| !xs.is_empty()) {
                        extra.insert(format!("{k}_decimal"), Value::Array(xs.into_iter().map(decimal).collect()));
                        continue;
                    }
                }
                annotate_decimals(v);
            }
            map.extend(extra);
        }
        Value::Array(items) => items.iter_mut().for_each(annotate_decimals),
        _ => {}
    }
}

pub fn envelope(command: &str, config: Value, outcome: &Outcome) -> Value {
    let mut result = outcome.result.clone();
    annotate_decimals(&mut result);
    serde_json::json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "result": result,
        "pass": outcome.pass,
    })
}

fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            Box::new(File::create(path).with_context(|| format!("cannot create report file {}", path.display()))?)
        }
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_report(command: &str, config: Value, outcome: &Outcome, format: Format, out: Option<&Path>) -> Result<()> {
    let mut sink = open_sink(out)?;
    match format {
        Format::Json => {
            let report = envelope(command, config, outcome);
            serde_json::to_writer_pretty(&mut sink, &report)?;
            writeln!(sink)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(&outcome.csv_header)?;
            for row in &outcome.csv_rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
