//! Bundles every output of a run into a single JSON document.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use polybench::Result;

use crate::analyze::ANALYSIS_JSON;
use crate::dataset::Manifest;
use crate::table::CsvTable;
use crate::{measure, solve};

pub const REPORT_JSON: &str = "report.json";

/// Numbers become JSON numbers, `NaN` becomes `null`, anything else stays a string.
fn cell(s: &str) -> Value {
    if let Ok(i) = s.parse::<i64>() {
        return Value::from(i);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Value::from(v),
        Ok(_) => Value::Null,
        Err(_) => Value::from(s),
    }
}

/// Rows of a CSV file as objects, or `null` when the file was not produced.
fn csv_records(path: &Path) -> Result<Value> {
    if !path.exists() {
        return Ok(Value::Null);
    }
    let table = CsvTable::read(path)?;
    let rows = table
        .rows
        .iter()
        .map(|r| {
            let obj: Map<String, Value> = table.headers.iter().zip(r).map(|(h, v)| (h.clone(), cell(v))).collect();
            Value::Object(obj)
        })
        .collect();
    Ok(Value::Array(rows))
}

fn json_file(path: &Path) -> Result<Value> {
    if !path.exists() {
        return Ok(Value::Null);
    }
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn build_report(root: &Path) -> Result<Value> {
    let manifest = Manifest::load(root)?;
    Ok(json!({
        "manifest": manifest,
        "metrics": csv_records(&root.join(measure::METRICS_CSV))?,
        "solver": csv_records(&root.join(solve::SOLVER_CSV))?,
        "convergence": csv_records(&root.join(solve::CONVERGENCE_CSV))?,
        "analysis": json_file(&root.join(ANALYSIS_JSON))?,
        "failures": {
            "generate": manifest.failures,
            "measure": csv_records(&root.join(measure::FAILURES_CSV))?,
            "solve": csv_records(&root.join(solve::FAILURES_CSV))?,
        },
    }))
}

pub fn write_report(root: &Path) -> Result<Value> {
    let report = build_report(root)?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    fs::write(root.join(REPORT_JSON), text)?;
    Ok(report)
}
