//! Pearson correlation between per-mesh observations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Strength bucket of a correlation coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorrelationClass {
    #[serde(rename = "strong+")]
    StrongPositive,
    #[serde(rename = "weak+")]
    WeakPositive,
    #[serde(rename = "none")]
    None,
    #[serde(rename = "weak-")]
    WeakNegative,
    #[serde(rename = "strong-")]
    StrongNegative,
}

pub const STRONG: f64 = 0.7;
pub const WEAK: f64 = 0.3;

impl CorrelationClass {
    /// `(0.7, 1]` is strong, `(0.3, 0.7]` weak, in either sign.
    pub fn of(rho: f64) -> Self {
        let a = rho.abs();
        match (a > STRONG, a > WEAK, rho > 0.0) {
            (true, _, true) => Self::StrongPositive,
            (true, _, false) => Self::StrongNegative,
            (false, true, true) => Self::WeakPositive,
            (false, true, false) => Self::WeakNegative,
            _ => Self::None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::StrongPositive => "strong+",
            Self::WeakPositive => "weak+",
            Self::None => "none",
            Self::WeakNegative => "weak-",
            Self::StrongNegative => "strong-",
        }
    }
}

impl fmt::Display for CorrelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn centered(v: &[f64]) -> (Vec<f64>, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let c: Vec<f64> = v.iter().map(|x| x - mean).collect();
    let var = c.iter().map(|x| x * x).sum::<f64>() / n;
    (c, var)
}

/// Pearson correlation coefficient, clamped to `[−1, 1]`.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    pearson_named(a, b, "a", "b")
}

fn pearson_named(a: &[f64], b: &[f64], name_a: &str, name_b: &str) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidParameter(format!("lengths differ: {} vs {}", a.len(), b.len())));
    }
    if a.len() < 3 {
        return Err(Error::InvalidParameter(format!("{} observations, need at least 3", a.len())));
    }
    let (ca, va) = centered(a);
    let (cb, vb) = centered(b);
    if !(va >= 1e-300) {
        return Err(Error::ConstantColumn(name_a.to_string()));
    }
    if !(vb >= 1e-300) {
        return Err(Error::ConstantColumn(name_b.to_string()));
    }
    let num: f64 = ca.iter().zip(&cb).map(|(x, y)| x * y).sum();
    let den = (ca.iter().map(|x| x * x).sum::<f64>() * cb.iter().map(|y| y * y).sum::<f64>()).sqrt();
    Ok((num / den).clamp(-1.0, 1.0))
}

/// Named real columns over a common list of row keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObservationTable {
    keys: Vec<String>,
    columns: Vec<(String, Vec<f64>)>,
}

impl ObservationTable {
    pub fn new(keys: Vec<String>) -> Self {
        Self { keys, columns: Vec::new() }
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn add_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.keys.len() {
            return Err(Error::InvalidParameter(format!(
                "column `{name}` has {} values for {} rows",
                values.len(),
                self.keys.len()
            )));
        }
        self.columns.retain(|(n, _)| *n != name);
        self.columns.push((name, values));
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    /// Columns of both tables on the keys of `self`; every key must occur in both.
    pub fn join(&self, other: &ObservationTable) -> Result<ObservationTable> {
        let index: std::collections::HashMap<&str, usize> =
            other.keys.iter().enumerate().map(|(i, k)| (k.as_str(), i)).collect();
        if index.len() != other.keys.len() {
            return Err(Error::MissingJoin("duplicate key in joined table".into()));
        }
        let rows: Vec<usize> = self
            .keys
            .iter()
            .map(|k| index.get(k.as_str()).copied().ok_or_else(|| Error::MissingJoin(k.clone())))
            .collect::<Result<_>>()?;
        if other.keys.len() != self.keys.len() {
            let mine: std::collections::HashSet<&str> = self.keys.iter().map(String::as_str).collect();
            let extra = other.keys.iter().find(|k| !mine.contains(k.as_str())).cloned().unwrap_or_default();
            return Err(Error::MissingJoin(extra));
        }
        let mut out = self.clone();
        for (name, values) in &other.columns {
            out.add_column(name.clone(), rows.iter().map(|&r| values[r]).collect())?;
        }
        Ok(out)
    }
}

/// Pairwise correlations of a set of columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub rho: Vec<Vec<f64>>,
    pub class: Vec<Vec<CorrelationClass>>,
    /// Rows left out because an analyzed column was NaN.
    pub dropped_rows: usize,
}

impl CorrelationMatrix {
    /// Header `label,<labels>` then one row per label, floats in `{:.16e}`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("label");
        for l in &self.labels {
            s.push(',');
            s.push_str(l);
        }
        s.push('\n');
        for (l, row) in self.labels.iter().zip(&self.rho) {
            s.push_str(l);
            for v in row {
                s.push_str(&format!(",{v:.16e}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Correlates `columns` of `table`, dropping rows where any of them is NaN.
pub fn correlation_matrix(table: &ObservationTable, columns: &[&str]) -> Result<CorrelationMatrix> {
    let data: Vec<&[f64]> = columns
        .iter()
        .map(|c| table.column(c).ok_or_else(|| Error::InvalidParameter(format!("no column `{c}`"))))
        .collect::<Result<_>>()?;
    let keep: Vec<usize> = (0..table.len()).filter(|&r| data.iter().all(|col| !col[r].is_nan())).collect();
    let dropped_rows = table.len() - keep.len();
    let filtered: Vec<Vec<f64>> = data.iter().map(|col| keep.iter().map(|&r| col[r]).collect()).collect();
    let k = columns.len();
    let mut rho = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let r = pearson_named(&filtered[i], &filtered[j], columns[i], columns[j])?;
            rho[i][j] = r;
            rho[j][i] = r;
        }
    }
    let class = rho.iter().map(|row| row.iter().map(|&r| CorrelationClass::of(r)).collect()).collect();
    Ok(CorrelationMatrix { labels: columns.iter().map(|c| c.to_string()).collect(), rho, class, dropped_rows })
}
