use std::path::PathBuf;

use polybench::generators::FamilyId;
use polybench::vem::ModelProblem;
use polybench::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    /// Families to generate; `Random` adds the random polygons.
    pub families: Vec<FamilyId>,
    pub t_samples: usize,
    pub random_count: usize,
    /// Mesh levels per polygon, the base mesh included.
    pub levels: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub problem: ModelProblem,
    /// Mesh the canvas around each polygon; without it only polygons are written.
    pub canvas: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            families: FamilyId::ALL.to_vec(),
            t_samples: 20,
            random_count: 100,
            levels: 3,
            seed: 0,
            out: PathBuf::from("polybench-out"),
            problem: ModelProblem::SinSin,
            canvas: true,
        }
    }
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t_samples < 2 {
            return Err(Error::InvalidParameter(format!("t-samples must be at least 2, got {}", self.t_samples)));
        }
        if self.levels < 1 {
            return Err(Error::InvalidParameter("levels must be at least 1".into()));
        }
        Ok(())
    }

    /// `tᵢ = i / (t_samples − 1)`, both endpoints included.
    pub fn t_values(&self) -> Vec<f64> {
        let last = (self.t_samples - 1) as f64;
        (0..self.t_samples).map(|i| i as f64 / last).collect()
    }
}
