//! Solver runs over the mesh hierarchies and the convergence fits.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use polybench::perf::{fit_convergence, solver_report, ConvergenceFit, SolverReport};
use polybench::vem::ModelProblem;
use polybench::{Error, Result};

use crate::dataset::{Manifest, ManifestEntry};
use crate::table::csv_text;
use crate::{fmt_f64, write_failures, Failure};

pub const SOLVER_CSV: &str = "solver.csv";
pub const CONVERGENCE_CSV: &str = "convergence.csv";
pub const FAILURES_CSV: &str = "solver_failures.csv";

pub const SOLVER_HEADER: [&str; 10] = ["mesh_id", "family", "t", "level", "h", "n_dofs", "eps_inf", "eps_2", "eps_S", "kappa1"];
pub const CONVERGENCE_HEADER: [&str; 6] = ["mesh_id", "family", "t", "C", "p", "residual"];

#[derive(Debug, Clone, PartialEq)]
pub struct SolverRow {
    pub mesh_id: String,
    pub family: String,
    pub t: f64,
    pub level: usize,
    /// `None` when the run failed.
    pub report: Option<SolverReport>,
}

impl SolverRow {
    pub fn fields(&self) -> Vec<String> {
        let mut f = vec![self.mesh_id.clone(), self.family.clone(), fmt_f64(self.t), self.level.to_string()];
        match &self.report {
            Some(r) => f.extend([
                fmt_f64(r.h),
                r.n_dofs.to_string(),
                fmt_f64(r.eps_inf),
                fmt_f64(r.eps_2),
                fmt_f64(r.eps_s),
                fmt_f64(r.kappa1),
            ]),
            None => f.extend(std::iter::repeat_n(fmt_f64(f64::NAN), 6)),
        }
        f
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub mesh_id: String,
    pub family: String,
    pub t: f64,
    pub fit: Option<ConvergenceFit>,
}

impl ConvergenceRow {
    pub fn fields(&self) -> Vec<String> {
        let mut f = vec![self.mesh_id.clone(), self.family.clone(), fmt_f64(self.t)];
        match &self.fit {
            Some(fit) => f.extend([fmt_f64(fit.c), fmt_f64(fit.p), fmt_f64(fit.residual)]),
            None => f.extend(std::iter::repeat_n(fmt_f64(f64::NAN), 3)),
        }
        f
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveOutput {
    pub rows: Vec<SolverRow>,
    pub convergence: Vec<ConvergenceRow>,
    pub failures: Vec<Failure>,
}

/// Problems whose exact solution the method reproduces have no error to fit.
pub fn has_convergence(problem: ModelProblem) -> bool {
    problem == ModelProblem::SinSin
}

fn run(root: &Path, entry: &ManifestEntry, level: usize, problem: ModelProblem) -> Result<SolverReport> {
    let mesh = entry.load_mesh(root, level)?;
    Ok(solver_report(&mesh, problem)?.0)
}

/// Solves `problem` on every level of every entry, in manifest order.
pub fn solve(root: &Path, manifest: &Manifest, problem: ModelProblem) -> Result<SolveOutput> {
    if !manifest.canvas {
        return Err(Error::InvalidParameter("the dataset has no meshes; regenerate it with the canvas".into()));
    }
    let jobs: Vec<(&ManifestEntry, usize)> =
        manifest.entries.iter().flat_map(|e| e.levels.iter().map(move |l| (e, l.level))).collect();
    let results: Vec<Result<SolverReport>> = jobs.par_iter().map(|&(e, l)| run(root, e, l, problem)).collect();

    let mut out = SolveOutput::default();
    for (&(e, level), r) in jobs.iter().zip(results) {
        let report = match r {
            Ok(rep) => Some(rep),
            Err(err) => {
                out.failures.push(Failure::new(&e.mesh_id, Some(level), err));
                None
            }
        };
        out.rows.push(SolverRow { mesh_id: e.mesh_id.clone(), family: e.family.to_string(), t: e.t, level, report });
    }

    if has_convergence(problem) && manifest.levels >= 2 {
        for e in &manifest.entries {
            let samples: Vec<(f64, f64)> = out
                .rows
                .iter()
                .filter(|r| r.mesh_id == e.mesh_id)
                .filter_map(|r| r.report.map(|rep| (rep.h, rep.eps_2)))
                .collect();
            let fit = if samples.len() == e.levels.len() {
                match fit_convergence(&samples) {
                    Ok(fit) => Some(fit),
                    Err(err) => {
                        out.failures.push(Failure::new(&e.mesh_id, None, err));
                        None
                    }
                }
            } else {
                out.failures.push(Failure::new(&e.mesh_id, None, "convergence fit skipped: a level failed"));
                None
            };
            out.convergence.push(ConvergenceRow { mesh_id: e.mesh_id.clone(), family: e.family.to_string(), t: e.t, fit });
        }
    }
    Ok(out)
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn write_solve(root: &Path, out: &SolveOutput, problem: ModelProblem) -> Result<()> {
    let rows: Vec<Vec<String>> = out.rows.iter().map(SolverRow::fields).collect();
    fs::write(root.join(SOLVER_CSV), csv_text(&header(&SOLVER_HEADER), &rows))?;
    if has_convergence(problem) {
        let conv: Vec<Vec<String>> = out.convergence.iter().map(ConvergenceRow::fields).collect();
        fs::write(root.join(CONVERGENCE_CSV), csv_text(&header(&CONVERGENCE_HEADER), &conv))?;
    }
    write_failures(&root.join(FAILURES_CSV), &out.failures)
}
