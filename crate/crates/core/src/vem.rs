//! Lowest-order virtual elements for the Poisson problem `−Δu = f`, `u = g` on the boundary.
//!
//! Degrees of freedom are vertex values; every mesh vertex is one dof, numbered like the vertex.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::geom::{Point2, Polygon2};
use crate::mesh::PolygonMesh;
use crate::metrics::{inscribed_circle, kernel, min_point_distance};
use crate::sparse::{refine, Cholesky, CsrMatrix};
use crate::{Error, Result};

/// `G` is rejected as singular above this condition number.
pub const SINGULAR_G: f64 = 1e14;
/// Relative residual accepted from the linear solve.
pub const SOLVE_TOL: f64 = 1e-10;

/// Shipped test problems on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelProblem {
    /// `u = sin(πx) sin(πy) / (2π²)`, `f = sin(πx) sin(πy)`, `g = 0`.
    SinSin,
    /// `u = 1 + 2x + 3y`, `f = 0`: the patch test.
    Linear,
    /// `u = 1`, `f = 0`.
    Constant,
}

impl ModelProblem {
    pub const ALL: [ModelProblem; 3] = [ModelProblem::SinSin, ModelProblem::Linear, ModelProblem::Constant];

    pub fn name(self) -> &'static str {
        match self {
            ModelProblem::SinSin => "sinsin",
            ModelProblem::Linear => "linear",
            ModelProblem::Constant => "constant",
        }
    }

    pub fn exact(self, p: Point2) -> f64 {
        match self {
            ModelProblem::SinSin => (PI * p.x).sin() * (PI * p.y).sin() / (2.0 * PI * PI),
            ModelProblem::Linear => 1.0 + 2.0 * p.x + 3.0 * p.y,
            ModelProblem::Constant => 1.0,
        }
    }

    pub fn load(self, p: Point2) -> f64 {
        match self {
            ModelProblem::SinSin => (PI * p.x).sin() * (PI * p.y).sin(),
            ModelProblem::Linear | ModelProblem::Constant => 0.0,
        }
    }

    /// Boundary data: the exact solution.
    pub fn dirichlet(self, p: Point2) -> f64 {
        self.exact(p)
    }
}

impl fmt::Display for ModelProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelProblem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown problem `{s}`")))
    }
}

/// Element matrices of one polygon. Monomials are `1, (x − x_K)/h_K, (y − y_K)/h_K`.
#[derive(Debug, Clone)]
pub struct LocalElement {
    pub polygon: Polygon2,
    pub centroid: Point2,
    pub diameter: f64,
    /// Monomial values at the vertices, `n × 3`.
    pub d: DMatrix<f64>,
    /// Projection functionals, `3 × n`.
    pub b: DMatrix<f64>,
    pub g: Matrix3<f64>,
    /// Monomial coefficients of the projection, `3 × n`.
    pub proj_star: DMatrix<f64>,
    /// The projector in the dof basis, `n × n`.
    pub proj: DMatrix<f64>,
}

impl LocalElement {
    pub fn dofs(&self) -> usize {
        self.polygon.len()
    }

    /// Value at `q` of the projection of the local dof vector `v`.
    pub fn eval_projection(&self, v: &[f64], q: Point2) -> f64 {
        let c = &self.proj_star * nalgebra::DVector::from_column_slice(v);
        let h = self.diameter;
        c[0] + c[1] * (q.x - self.centroid.x) / h + c[2] * (q.y - self.centroid.y) / h
    }
}

/// Builds `D`, `B`, `G` and the projectors of `p`.
pub fn local_projector(p: &Polygon2) -> Result<LocalElement> {
    let n = p.len();
    let xk = p.centroid();
    let h = p.diameter();
    let v = p.vertices();
    let d = DMatrix::from_fn(n, 3, |i, a| match a {
        0 => 1.0,
        1 => (v[i].x - xk.x) / h,
        _ => (v[i].y - xk.y) / h,
    });
    // Trapezoid rule on the two edges meeting at vertex i; ∂m/∂n is constant per edge.
    let b = DMatrix::from_fn(3, n, |a, i| {
        let (prev, next) = (v[(i + n - 1) % n], v[(i + 1) % n]);
        match a {
            0 => 1.0 / n as f64,
            1 => (next.y - prev.y) / (2.0 * h),
            _ => (prev.x - next.x) / (2.0 * h),
        }
    });
    let g_dyn = &b * &d;
    let g = Matrix3::from_fn(|r, c| g_dyn[(r, c)]);
    let sv = g.singular_values();
    let condition = sv.max() / sv.min();
    if !condition.is_finite() || condition > SINGULAR_G {
        return Err(Error::SingularG { cell: 0, condition });
    }
    let g_inv = g.try_inverse().ok_or(Error::SingularG { cell: 0, condition })?;
    let g_inv = DMatrix::from_fn(3, 3, |r, c| g_inv[(r, c)]);
    let proj_star = g_inv * &b;
    let proj = &d * &proj_star;
    Ok(LocalElement { polygon: p.clone(), centroid: xk, diameter: h, d, b, g, proj_star, proj })
}

/// Scaling of the dof-dof stabilization.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stabilization {
    /// Unit weight: `(I − Π)ᵀ (I − Π)`.
    #[default]
    Identity,
    /// Weighted by the mean diagonal of the consistency term.
    TraceScaled,
}

/// Consistency plus identity stabilization: `Π*ᵀ G̃ Π* + (I − Π)ᵀ (I − Π)`.
pub fn local_stiffness_of(e: &LocalElement) -> DMatrix<f64> {
    local_stiffness_with(e, Stabilization::Identity)
}

pub fn local_stiffness_with(e: &LocalElement, stab: Stabilization) -> DMatrix<f64> {
    let mut g_tilde = DMatrix::from_fn(3, 3, |r, c| e.g[(r, c)]);
    g_tilde.row_mut(0).fill(0.0);
    g_tilde.column_mut(0).fill(0.0);
    let consistency = e.proj_star.transpose() * g_tilde * &e.proj_star;
    let n = e.dofs();
    let weight = match stab {
        Stabilization::Identity => 1.0,
        Stabilization::TraceScaled => consistency.trace() / n as f64,
    };
    let complement = DMatrix::identity(n, n) - &e.proj;
    let k = consistency + complement.transpose() * complement * weight;
    // Symmetrize away rounding.
    (&k + k.transpose()) * 0.5
}

pub fn local_stiffness(p: &Polygon2) -> Result<DMatrix<f64>> {
    Ok(local_stiffness_of(&local_projector(p)?))
}

/// Assembled Poisson system. Dof `i` is mesh vertex `i`.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    /// Global stiffness before boundary conditions.
    pub stiffness: CsrMatrix,
    pub load: Vec<f64>,
    /// Prescribed value of each boundary dof.
    pub dirichlet: Vec<Option<f64>>,
    /// Free dofs, increasing.
    pub free: Vec<usize>,
    /// Stiffness restricted to the free dofs.
    pub reduced: CsrMatrix,
    /// Load on the free dofs minus the coupling to the prescribed values.
    pub reduced_rhs: Vec<f64>,
    /// The same stiffness applied in double-double arithmetic.
    pub operator: ExtendedOperator,
}

impl LinearSystem {
    pub fn n_dofs(&self) -> usize {
        self.load.len()
    }

    /// The full matrix with Dirichlet rows and columns replaced by identity rows.
    pub fn constrained_matrix(&self) -> CsrMatrix {
        let entries = self
            .stiffness
            .triplets()
            .filter(|&(i, j, _)| self.dirichlet[i].is_none() && self.dirichlet[j].is_none())
            .chain((0..self.n_dofs()).filter(|&i| self.dirichlet[i].is_some()).map(|i| (i, i, 1.0)))
            .collect();
        CsrMatrix::from_triplets(self.n_dofs(), entries)
    }
}

/// Local elements of every cell, in cell order.
pub fn local_elements(mesh: &PolygonMesh) -> Result<Vec<LocalElement>> {
    (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            local_projector(&mesh.cell_polygon(c)).map_err(|e| match e {
                Error::SingularG { condition, .. } => Error::SingularG { cell: c, condition },
                other => other,
            })
        })
        .collect()
}

pub fn assemble(mesh: &PolygonMesh, problem: ModelProblem) -> Result<LinearSystem> {
    assemble_with(mesh, problem, Stabilization::Identity)
}

pub fn assemble_with(mesh: &PolygonMesh, problem: ModelProblem, stab: Stabilization) -> Result<LinearSystem> {
    let elements = local_elements(mesh)?;
    let n = mesh.num_vertices();
    let locals: Vec<DMatrix<f64>> = elements.par_iter().map(|e| local_stiffness_with(e, stab)).collect();
    let mut entries = Vec::with_capacity(locals.iter().map(|k| k.len()).sum());
    let mut load = vec![0.0; n];
    for ((cell, e), k) in mesh.cells.iter().zip(&elements).zip(&locals) {
        for (a, &i) in cell.iter().enumerate() {
            for (b, &j) in cell.iter().enumerate() {
                entries.push((i, j, k[(a, b)]));
            }
        }
        let share = e.polygon.signed_area() * problem.load(e.centroid) / cell.len() as f64;
        for &i in cell {
            load[i] += share;
        }
    }
    let stiffness = CsrMatrix::from_triplets(n, entries);
    let dirichlet: Vec<Option<f64>> = (0..n)
        .map(|i| mesh.boundary[i].then(|| problem.dirichlet(mesh.vertices[i])))
        .collect();
    let free: Vec<usize> = (0..n).filter(|&i| dirichlet[i].is_none()).collect();
    let reduced = stiffness.principal_submatrix(&free);
    let reduced_rhs = free
        .iter()
        .map(|&i| {
            let coupling: f64 = stiffness.row(i).filter_map(|(j, v)| dirichlet[j].map(|g| v * g)).sum();
            load[i] - coupling
        })
        .collect();
    let operator = ExtendedOperator::new(mesh, stab);
    Ok(LinearSystem { stiffness, load, dirichlet, free, reduced, reduced_rhs, operator })
}

/// Solves the reduced system and returns all vertex values.
///
/// The factorization of the rounded stiffness preconditions a refinement whose residuals
/// come from [`ExtendedOperator`], so thin elements do not cost more than the conditioning
/// of the problem itself.
pub fn solve(system: &LinearSystem) -> Result<Vec<f64>> {
    let mut u: Vec<f64> = system.dirichlet.iter().map(|g| g.unwrap_or(0.0)).collect();
    if system.free.is_empty() {
        return Ok(u);
    }
    let chol = Cholesky::factor(&system.reduced)?;
    let prescribed: Vec<TwoFloat> = u.iter().map(|&v| TwoFloat::from(v)).collect();
    let residual = |x: &[TwoFloat]| {
        let mut full = prescribed.clone();
        for (&i, &v) in system.free.iter().zip(x) {
            full[i] = v;
        }
        let y = system.operator.apply(&full);
        system.free.iter().map(|&i| f64::from(TwoFloat::from(system.load[i]) - y[i])).collect::<Vec<f64>>()
    };
    let x = refine(&chol, &system.reduced_rhs, SOLVE_TOL, residual)?;
    for (&i, v) in system.free.iter().zip(x) {
        u[i] = f64::from(v);
    }
    Ok(u)
}

/// Global stiffness as a sum of element operators evaluated from vertex coordinates in
/// double-double arithmetic, without forming `G⁻¹`. With `β = ((y₊ − y₋)/2, (x₋ − x₊)/2)`
/// per vertex and `x̄` the vertex mean, `Πv = mean(v) + (x − x̄)·(βᵀv)/|K|` and the
/// consistency term is `ββᵀ/|K|`.
#[derive(Debug, Clone)]
pub struct ExtendedOperator {
    n: usize,
    elements: Vec<ExtendedElement>,
}

#[derive(Debug, Clone)]
struct ExtendedElement {
    dofs: Vec<usize>,
    bx: Vec<TwoFloat>,
    by: Vec<TwoFloat>,
    dx: Vec<TwoFloat>,
    dy: Vec<TwoFloat>,
    inv_area: TwoFloat,
    weight: TwoFloat,
}

impl ExtendedOperator {
    pub fn new(mesh: &PolygonMesh, stab: Stabilization) -> Self {
        let elements = mesh
            .cells
            .par_iter()
            .map(|cell| ExtendedElement::new(cell, &mesh.vertices, stab))
            .collect();
        Self { n: mesh.num_vertices(), elements }
    }

    /// `S u` for a full vertex vector.
    pub fn apply(&self, u: &[TwoFloat]) -> Vec<TwoFloat> {
        let mut y = vec![TwoFloat::from(0.0); self.n];
        for e in &self.elements {
            e.apply_add(u, &mut y);
        }
        y
    }
}

impl ExtendedElement {
    fn new(cell: &[usize], vertices: &[Point2], stab: Stabilization) -> Self {
        let n = cell.len();
        let v: Vec<Point2> = cell.iter().map(|&i| vertices[i]).collect();
        let half = TwoFloat::from(0.5);
        let bx: Vec<TwoFloat> = (0..n).map(|i| TwoFloat::new_sub(v[(i + 1) % n].y, v[(i + n - 1) % n].y) * half).collect();
        let by: Vec<TwoFloat> = (0..n).map(|i| TwoFloat::new_sub(v[(i + n - 1) % n].x, v[(i + 1) % n].x) * half).collect();
        let nf = TwoFloat::from(n as f64);
        let mean = |f: fn(&Point2) -> f64| v.iter().fold(TwoFloat::from(0.0), |acc, p| acc + f(p)) / nf;
        let (mx, my) = (mean(|p| p.x), mean(|p| p.y));
        let dx = v.iter().map(|p| TwoFloat::from(p.x) - mx).collect();
        let dy = v.iter().map(|p| TwoFloat::from(p.y) - my).collect();
        let area = (0..n).fold(TwoFloat::from(0.0), |acc, i| acc + bx[i] * v[i].x);
        let inv_area = TwoFloat::from(1.0) / area;
        let weight = match stab {
            Stabilization::Identity => TwoFloat::from(1.0),
            Stabilization::TraceScaled => {
                (0..n).fold(TwoFloat::from(0.0), |acc, i| acc + bx[i] * bx[i] + by[i] * by[i]) * inv_area / nf
            }
        };
        Self { dofs: cell.to_vec(), bx, by, dx, dy, inv_area, weight }
    }

    fn apply_add(&self, u: &[TwoFloat], y: &mut [TwoFloat]) {
        let n = self.dofs.len();
        let nf = TwoFloat::from(n as f64);
        let zero = TwoFloat::from(0.0);
        let v: Vec<TwoFloat> = self.dofs.iter().map(|&i| u[i]).collect();
        let dot = |a: &[TwoFloat]| a.iter().zip(&v).fold(zero, |acc, (p, q)| acc + *p * *q);
        let (px, py) = (dot(&self.bx) * self.inv_area, dot(&self.by) * self.inv_area);
        let mean = v.iter().fold(zero, |acc, q| acc + *q) / nf;
        let w: Vec<TwoFloat> = (0..n).map(|i| v[i] - mean - self.dx[i] * px - self.dy[i] * py).collect();
        let sum_w = w.iter().fold(zero, |acc, q| acc + *q) / nf;
        let qx = self.dx.iter().zip(&w).fold(zero, |acc, (a, b)| acc + *a * *b) * self.inv_area;
        let qy = self.dy.iter().zip(&w).fold(zero, |acc, (a, b)| acc + *a * *b) * self.inv_area;
        for i in 0..n {
            let consistency = self.bx[i] * px + self.by[i] * py;
            let stabilization = w[i] - sum_w - self.bx[i] * qx - self.by[i] * qy;
            y[self.dofs[i]] += consistency + self.weight * stabilization;
        }
    }
}

/// Shape-regularity constants of an element: `γ0` is the radius of the largest disk in
/// the kernel over the diameter (0 without a kernel), `γ1` the shortest vertex distance
/// over the diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityDiagnostic {
    pub gamma0: f64,
    pub gamma1: f64,
}

pub fn regularity_diagnostic(p: &Polygon2) -> Result<RegularityDiagnostic> {
    let h = p.diameter();
    let gamma0 = match kernel(p) {
        Some(k) => inscribed_circle(&k)?.radius / h,
        None => 0.0,
    };
    Ok(RegularityDiagnostic { gamma0, gamma1: min_point_distance(p) / h })
}
