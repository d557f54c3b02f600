use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compute_polygon_metrics, Metric, MetricsRecord};
use crate::error::{Error, Result};
use crate::mesh::PolygonMesh;

/// Which cells of a mesh enter an aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementSet {
    All,
    /// Non-triangular (central polygon) cells only.
    Polygons,
    /// Central polygons plus every triangle sharing a vertex with one.
    PolygonsWithIncident,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStats {
    pub min: f64,
    pub avg: f64,
    pub max: f64,
}

/// Min/avg/max of each metric over a set of cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshMetricsRecord {
    pub cells: usize,
    pub stats: [MetricStats; 12],
}

impl MeshMetricsRecord {
    pub fn from_records(records: &[MetricsRecord]) -> Self {
        assert!(!records.is_empty());
        let stats = std::array::from_fn(|k| {
            let vals = records.iter().map(|r| r.values()[k]);
            let (mut min, mut max, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
            for v in vals {
                min = min.min(v);
                max = max.max(v);
                sum += v;
            }
            // Clamp so rounding in the mean never breaks min <= avg <= max.
            let avg = (sum / records.len() as f64).clamp(min, max);
            MetricStats { min, avg, max }
        });
        Self { cells: records.len(), stats }
    }

    pub fn get(&self, m: Metric) -> MetricStats {
        self.stats[m.index()]
    }

    /// Per metric, the worst value over the aggregated cells.
    pub fn worst(&self) -> MetricsRecord {
        MetricsRecord::from_values(std::array::from_fn(|k| {
            let m = Metric::ALL[k];
            m.worse(self.stats[k].min, self.stats[k].max)
        }))
    }
}

pub fn cell_metrics(mesh: &PolygonMesh, cell: usize) -> Result<MetricsRecord> {
    compute_polygon_metrics(&mesh.cell_polygon(cell))
}

/// Aggregates the metrics of the selected cells; fails on an empty selection.
pub fn aggregate_mesh_metrics(mesh: &PolygonMesh, set: ElementSet) -> Result<MeshMetricsRecord> {
    let selected: Vec<usize> = match set {
        ElementSet::All => (0..mesh.num_cells()).collect(),
        ElementSet::Polygons => mesh.central_cells().collect(),
        ElementSet::PolygonsWithIncident => {
            let mut v: Vec<usize> = mesh.central_cells().collect();
            v.extend(mesh.incident_triangles());
            v
        }
    };
    if selected.is_empty() {
        return Err(Error::InvalidParameter(format!("no cells selected by {set:?}")));
    }
    let records = selected
        .par_iter()
        .map(|&c| cell_metrics(mesh, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeshMetricsRecord::from_records(&records))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::tests::square_grid;

    #[test]
    fn identical_squares_have_flat_aggregates() {
        let m = square_grid(4);
        let agg = aggregate_mesh_metrics(&m, ElementSet::All).unwrap();
        assert_eq!(agg.cells, 16);
        for s in agg.stats {
            assert!(s.max - s.min <= 1e-15 * s.max.abs().max(1.0));
            assert!(s.min <= s.avg && s.avg <= s.max);
        }
    }

    #[test]
    fn worst_takes_minimum_of_ranked_metrics() {
        let r1 = MetricsRecord::from_values([1.0; 12]);
        let r2 = MetricsRecord::from_values([2.0; 12]);
        let agg = MeshMetricsRecord::from_records(&[r1, r2]);
        assert_eq!(agg.worst().values(), [1.0; 12]);
        assert_eq!(agg.get(Metric::KAR).avg, 1.5);
    }
}
