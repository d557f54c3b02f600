//! Correlation matrices between geometric metrics and solver performance.

use std::fs;
use std::path::Path;

use serde::Serialize;

use polybench::metrics::Metric;
use polybench::stats::{correlation_matrix, CorrelationMatrix, ObservationTable};
use polybench::{Error, Result};

use crate::measure::METRICS_CSV;
use crate::solve::SOLVER_CSV;
use crate::table::CsvTable;

pub const ANALYSIS_JSON: &str = "analysis.json";
pub const SOLVER_COLUMNS: [&str; 4] = ["eps_inf", "eps_2", "eps_S", "kappa1"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    /// Mesh level the observations are taken from, the finest available.
    pub level: usize,
    pub rows: usize,
    pub geometry: CorrelationMatrix,
    pub solver: Option<CorrelationMatrix>,
    pub geometry_solver: Option<CorrelationMatrix>,
}

pub fn geometry_columns(suffix: &str) -> Vec<String> {
    Metric::SCALE_INVARIANT.iter().map(|m| format!("{}_{suffix}", m.abbr())).collect()
}

fn key_of(table: &CsvTable, level: usize) -> Result<(Vec<usize>, Vec<String>)> {
    let ids = table.strings("mesh_id")?;
    let levels = table.strings("level")?;
    let rows: Vec<usize> = (0..ids.len()).filter(|&r| levels[r] == level.to_string()).collect();
    let keys = rows.iter().map(|&r| format!("{}@{}", ids[r], levels[r])).collect();
    Ok((rows, keys))
}

fn observations(table: &CsvTable, level: usize, columns: &[String]) -> Result<ObservationTable> {
    let (rows, keys) = key_of(table, level)?;
    let mut obs = ObservationTable::new(keys);
    for c in columns {
        let all = table.floats(c)?;
        obs.add_column(c.clone(), rows.iter().map(|&r| all[r]).collect())?;
    }
    Ok(obs)
}

fn refs(columns: &[String]) -> Vec<&str> {
    columns.iter().map(String::as_str).collect()
}

/// Correlations at the finest level of the measured dataset. Solver matrices are
/// included when solver results exist; their mesh ids must match the metrics exactly.
pub fn analyze(root: &Path) -> Result<Analysis> {
    let metrics = CsvTable::read(&root.join(METRICS_CSV))?;
    let level = metrics
        .strings("level")?
        .iter()
        .map(|l| l.parse::<usize>().map_err(|e| Error::Parse(format!("level `{l}`: {e}"))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .ok_or_else(|| Error::InvalidParameter("metrics table is empty".into()))?;

    let avg = geometry_columns("avg");
    let worst = geometry_columns("worst");
    let mut geo_columns = avg.clone();
    geo_columns.extend(worst.iter().cloned());
    let geo = observations(&metrics, level, &geo_columns)?;
    let geometry = correlation_matrix(&geo, &refs(&avg))?;

    let solver_path = root.join(SOLVER_CSV);
    let (solver, geometry_solver) = if solver_path.exists() {
        let solver_table = CsvTable::read(&solver_path)?;
        let cols: Vec<String> = SOLVER_COLUMNS.iter().map(|s| s.to_string()).collect();
        let sol = observations(&solver_table, level, &cols)?;
        let joined = geo.join(&sol)?;
        let solver = correlation_matrix(&sol, &SOLVER_COLUMNS)?;
        let mut combined = worst.clone();
        combined.extend(cols);
        let geometry_solver = correlation_matrix(&joined, &refs(&combined))?;
        (Some(solver), Some(geometry_solver))
    } else {
        (None, None)
    };
    Ok(Analysis { level, rows: geo.len(), geometry, solver, geometry_solver })
}

fn write_matrix(root: &Path, name: &str, m: &CorrelationMatrix) -> Result<()> {
    fs::write(root.join(format!("{name}.csv")), m.to_csv())?;
    let mut json = serde_json::to_string_pretty(m)?;
    json.push('\n');
    fs::write(root.join(format!("{name}.json")), json)?;
    Ok(())
}

pub fn write_analysis(root: &Path, a: &Analysis) -> Result<()> {
    write_matrix(root, "corr_geometry", &a.geometry)?;
    if let Some(m) = &a.solver {
        write_matrix(root, "corr_solver", m)?;
    }
    if let Some(m) = &a.geometry_solver {
        write_matrix(root, "corr_geometry_solver", m)?;
    }
    let mut json = serde_json::to_string_pretty(a)?;
    json.push('\n');
    fs::write(root.join(ANALYSIS_JSON), json)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_columns_are_the_scale_invariant_metrics() {
        assert_eq!(geometry_columns("avg"), ["CR_avg", "KAR_avg", "PAR_avg", "MA_avg", "ER_avg", "NPD_avg"]);
    }
}
