//! Geometric metrics of every generated mesh.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use polybench::metrics::{aggregate_mesh_metrics, compute_polygon_metrics, ElementSet, MeshMetricsRecord, Metric, MetricsRecord};
use polybench::Result;

use crate::dataset::{Manifest, ManifestEntry};
use crate::table::csv_text;
use crate::{fmt_f64, write_failures, Failure};

pub const METRICS_CSV: &str = "metrics.csv";
pub const FAILURES_CSV: &str = "metrics_failures.csv";

/// Aggregates of one mesh level: min/avg/max over the polygonal cells and the worst
/// value over the polygons and their incident triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub mesh_id: String,
    pub family: String,
    pub t: f64,
    pub level: usize,
    pub polygons: [[f64; 3]; 12],
    pub worst: [f64; 12],
}

pub fn metrics_header() -> Vec<String> {
    let mut h: Vec<String> = ["mesh_id", "family", "t", "level"].iter().map(|s| s.to_string()).collect();
    for m in Metric::ALL {
        for s in ["min", "avg", "max"] {
            h.push(format!("{}_{s}", m.abbr()));
        }
    }
    h.extend(Metric::ALL.iter().map(|m| format!("{}_worst", m.abbr())));
    h
}

impl MetricsRow {
    fn new(entry: &ManifestEntry, level: usize, polygons: [[f64; 3]; 12], worst: [f64; 12]) -> Self {
        Self { mesh_id: entry.mesh_id.clone(), family: entry.family.to_string(), t: entry.t, level, polygons, worst }
    }

    fn failed(entry: &ManifestEntry, level: usize) -> Self {
        Self::new(entry, level, [[f64::NAN; 3]; 12], [f64::NAN; 12])
    }

    fn from_records(entry: &ManifestEntry, level: usize, polygons: &MeshMetricsRecord, worst: &MetricsRecord) -> Self {
        let stats = std::array::from_fn(|k| {
            let s = polygons.stats[k];
            [s.min, s.avg, s.max]
        });
        Self::new(entry, level, stats, worst.values())
    }

    pub fn fields(&self) -> Vec<String> {
        let mut f = vec![self.mesh_id.clone(), self.family.clone(), fmt_f64(self.t), self.level.to_string()];
        f.extend(self.polygons.iter().flatten().map(|&v| fmt_f64(v)));
        f.extend(self.worst.iter().map(|&v| fmt_f64(v)));
        f
    }
}

fn measure_level(root: &Path, entry: &ManifestEntry, level: usize) -> Result<MetricsRow> {
    let mesh = entry.load_mesh(root, level)?;
    let polygons = aggregate_mesh_metrics(&mesh, ElementSet::Polygons)?;
    let incident = aggregate_mesh_metrics(&mesh, ElementSet::PolygonsWithIncident)?;
    Ok(MetricsRow::from_records(entry, level, &polygons, &incident.worst()))
}

fn measure_polygon(root: &Path, entry: &ManifestEntry) -> Result<MetricsRow> {
    let record = compute_polygon_metrics(&entry.load_polygon(root)?)?;
    let values = record.values();
    Ok(MetricsRow::new(entry, 0, std::array::from_fn(|k| [values[k]; 3]), values))
}

/// Metric rows for every entry and level in manifest order. Without canvas meshes
/// each polygon is measured on its own as level 0.
pub fn measure(root: &Path, manifest: &Manifest) -> (Vec<MetricsRow>, Vec<Failure>) {
    let jobs: Vec<(&ManifestEntry, usize)> = if manifest.canvas {
        manifest.entries.iter().flat_map(|e| e.levels.iter().map(move |l| (e, l.level))).collect()
    } else {
        manifest.entries.iter().map(|e| (e, 0)).collect()
    };
    let results: Vec<Result<MetricsRow>> = jobs
        .par_iter()
        .map(|&(e, level)| if manifest.canvas { measure_level(root, e, level) } else { measure_polygon(root, e) })
        .collect();
    let mut rows = Vec::with_capacity(jobs.len());
    let mut failures = Vec::new();
    for (&(e, level), r) in jobs.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(err) => {
                failures.push(Failure::new(&e.mesh_id, Some(level), err));
                rows.push(MetricsRow::failed(e, level));
            }
        }
    }
    (rows, failures)
}

pub fn write_metrics(root: &Path, rows: &[MetricsRow], failures: &[Failure]) -> Result<()> {
    let body: Vec<Vec<String>> = rows.iter().map(MetricsRow::fields).collect();
    fs::write(root.join(METRICS_CSV), csv_text(&metrics_header(), &body))?;
    write_failures(&root.join(FAILURES_CSV), failures)
}
