//! Batch pipeline: dataset generation, metric evaluation, solving, correlation analysis.

pub mod analyze;
pub mod config;
pub mod dataset;
pub mod measure;
pub mod report;
pub mod solve;
pub mod table;

pub use config::BenchmarkConfig;

/// A row that could not be computed, with the reason.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Failure {
    pub mesh_id: String,
    pub level: Option<usize>,
    pub reason: String,
}

impl Failure {
    pub fn new(mesh_id: &str, level: Option<usize>, err: impl std::fmt::Display) -> Self {
        Self { mesh_id: mesh_id.to_string(), level, reason: err.to_string() }
    }
}

/// Floats in the CSV outputs: 17 significant digits, `NaN` for failed values.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `mesh_id,level,reason`, one line per failure.
pub fn write_failures(path: &std::path::Path, failures: &[Failure]) -> polybench::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| polybench::Error::Parse(e.to_string());
    w.write_record(["mesh_id", "level", "reason"]).map_err(io)?;
    for f in failures {
        let level = f.level.map(|l| l.to_string()).unwrap_or_default();
        w.write_record([f.mesh_id.as_str(), level.as_str(), f.reason.as_str()]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| polybench::Error::Parse(e.to_string()))?;
    std::fs::write(path, bytes)?;
    Ok(())
}
