//! Reading the pipeline's CSV files back.

use std::path::Path;

use polybench::{Error, Result};

/// A CSV file as a header and string rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn read(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
            .iter()
            .map(str::to_string)
            .collect();
        let rows = reader
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Ok(Self { headers, rows })
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse(format!("missing column `{name}`")))
    }

    pub fn strings(&self, name: &str) -> Result<Vec<String>> {
        let c = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[c].clone()).collect())
    }

    pub fn floats(&self, name: &str) -> Result<Vec<f64>> {
        let c = self.column_index(name)?;
        self.rows
            .iter()
            .map(|r| r[c].parse::<f64>().map_err(|e| Error::Parse(format!("column `{name}`: {e}"))))
            .collect()
    }
}

/// Writes `header` and `rows` (already formatted) as CSV text.
pub fn csv_text(header: &[String], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}
