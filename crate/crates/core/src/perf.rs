//! Solver performance figures: relative errors, condition number and convergence rate.

use serde::{Deserialize, Serialize};

use crate::geom::{Point2, TriangleQuadrature};
use crate::mesh::PolygonMesh;
use crate::sparse::{Cholesky, CsrMatrix};
use crate::vem::{self, LinearSystem, LocalElement, ModelProblem};
use crate::{Error, Result};

/// Above this many unknowns `‖S⁻¹‖₁` is estimated instead of computed.
pub const EXACT_INVERSE_LIMIT: usize = 20_000;
/// Right-hand sides solved together when forming `S⁻¹` column by column.
const BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub eps_inf: f64,
    pub eps_2: f64,
    pub eps_s: f64,
    pub kappa1: f64,
    /// Largest element diameter.
    pub h: f64,
    /// Number of vertex unknowns, boundary included.
    pub n_dofs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceFit {
    pub c: f64,
    pub p: f64,
    /// Euclidean norm of the log-space residuals.
    pub residual: f64,
}

/// Relative vertex-wise maximum error.
pub fn error_linf(exact: impl Fn(Point2) -> f64, u_h: &[f64], mesh: &PolygonMesh) -> Result<f64> {
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for (p, v) in mesh.vertices.iter().zip(u_h) {
        let u = exact(*p);
        num = num.max((u - v).abs());
        den = den.max(u.abs());
    }
    if den < 1e-300 {
        return Err(Error::ZeroNormalizer);
    }
    Ok(num / den)
}

/// Relative L2 error of the elementwise projection of `u_h`.
pub fn error_l2(
    exact: impl Fn(Point2) -> f64 + Sync,
    u_h: &[f64],
    mesh: &PolygonMesh,
    elements: &[LocalElement],
) -> Result<f64> {
    let quad = TriangleQuadrature::with_order(4);
    let mut num = 0.0;
    let mut den = 0.0;
    for (cell, e) in mesh.cells.iter().zip(elements) {
        let local: Vec<f64> = cell.iter().map(|&i| u_h[i]).collect();
        let coeffs = &e.proj_star * nalgebra::DVector::from_column_slice(&local);
        let (h, xk) = (e.diameter, e.centroid);
        let proj = |q: Point2| coeffs[0] + coeffs[1] * (q.x - xk.x) / h + coeffs[2] * (q.y - xk.y) / h;
        let v = e.polygon.vertices();
        for [a, b, c] in e.polygon.sub_triangulate()? {
            num += quad.integrate(v[a], v[b], v[c], |q| (exact(q) - proj(q)).powi(2));
            den += quad.integrate(v[a], v[b], v[c], |q| exact(q).powi(2));
        }
    }
    if den.sqrt() < 1e-300 {
        return Err(Error::ZeroNormalizer);
    }
    Ok((num / den).sqrt())
}

/// `√(eᵀSe) / √(uᵀSu)` with `e` the nodal error and `S` the stiffness before boundary conditions.
pub fn error_energy(exact: impl Fn(Point2) -> f64, u_h: &[f64], mesh: &PolygonMesh, s: &CsrMatrix) -> Result<f64> {
    let u: Vec<f64> = mesh.vertices.iter().map(|&p| exact(p)).collect();
    let e: Vec<f64> = u.iter().zip(u_h).map(|(a, b)| a - b).collect();
    let ee = s.quadratic_form(&e);
    let e2: f64 = e.iter().map(|v| v * v).sum();
    if ee < -1e-10 * s.norm1() * e2 {
        return Err(Error::NegativeQuadraticForm(ee));
    }
    let uu = s.quadratic_form(&u);
    if uu <= 1e-300 {
        return Err(Error::ZeroNormalizer);
    }
    Ok(ee.max(0.0).sqrt() / uu.sqrt())
}

/// `‖A‖₁ ‖A⁻¹‖₁` of an SPD matrix.
pub fn condition_number_l1(a: &CsrMatrix) -> Result<f64> {
    if a.dim() == 0 {
        return Err(Error::SolveFailed("empty system".into()));
    }
    let chol = Cholesky::factor(a)?;
    let inv = if a.dim() <= EXACT_INVERSE_LIMIT { inverse_norm1_exact(&chol) } else { inverse_norm1_estimate(&chol) };
    if !inv.is_finite() {
        return Err(Error::SolveFailed("non-finite inverse norm".into()));
    }
    Ok(a.norm1() * inv)
}

/// Largest column sum of `|A⁻¹|`, one block of unit vectors at a time.
pub fn inverse_norm1_exact(chol: &Cholesky) -> f64 {
    let n = chol.dim();
    let mut best: f64 = 0.0;
    let mut block = Vec::with_capacity(n * BLOCK);
    for start in (0..n).step_by(BLOCK) {
        let k = BLOCK.min(n - start);
        block.clear();
        block.resize(n * k, 0.0);
        for c in 0..k {
            block[c * n + start + c] = 1.0;
        }
        chol.solve_block_in_place(&mut block);
        for col in block.chunks_exact(n) {
            best = best.max(col.iter().map(|v| v.abs()).sum());
        }
    }
    best
}

/// Hager–Higham lower estimate of `‖A⁻¹‖₁` for symmetric `A`.
pub fn inverse_norm1_estimate(chol: &Cholesky) -> f64 {
    let n = chol.dim();
    let norm1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
    let mut x = vec![1.0 / n as f64; n];
    let mut est = 0.0;
    let mut last_j = usize::MAX;
    for iter in 0..5 {
        let y = chol.solve(&x);
        let new_est = norm1(&y);
        if iter > 0 && new_est <= est {
            break;
        }
        est = new_est;
        let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
        let z = chol.solve(&xi);
        let (j, zmax) = z.iter().enumerate().fold((0, 0.0), |b, (i, v)| if v.abs() > b.1 { (i, v.abs()) } else { b });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
        if zmax <= ztx || j == last_j {
            break;
        }
        last_j = j;
        x = vec![0.0; n];
        x[j] = 1.0;
    }
    // Alternating test vector guards against cancellation in the greedy search.
    let alt: Vec<f64> = (0..n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
        })
        .collect();
    let alt_est = 2.0 * norm1(&chol.solve(&alt)) / (3.0 * n as f64);
    est.max(alt_est)
}

/// Least-squares line through `(log h, log ε)`: `ε ≈ C hᵖ`.
pub fn fit_convergence(samples: &[(f64, f64)]) -> Result<ConvergenceFit> {
    if samples.len() < 2 {
        return Err(Error::InvalidSamples(format!("{} samples, need at least 2", samples.len())));
    }
    if let Some(&(h, e)) = samples.iter().find(|&&(h, e)| !(h > 0.0 && e > 0.0 && h.is_finite() && e.is_finite())) {
        return Err(Error::InvalidSamples(format!("non-positive sample ({h}, {e})")));
    }
    let mut hs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    hs.sort_by(f64::total_cmp);
    if hs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSamples("duplicate mesh size".into()));
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let p = sxy / sxx;
    let intercept = my - p * mx;
    let residual = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - p * x).powi(2)).sum::<f64>().sqrt();
    Ok(ConvergenceFit { c: intercept.exp(), p, residual })
}

/// Assembles, solves and measures one mesh.
pub fn solver_report(mesh: &PolygonMesh, problem: ModelProblem) -> Result<(SolverReport, Vec<f64>)> {
    let system = vem::assemble(mesh, problem)?;
    let u_h = vem::solve(&system)?;
    let report = report_for(mesh, problem, &system, &u_h)?;
    Ok((report, u_h))
}

pub fn report_for(mesh: &PolygonMesh, problem: ModelProblem, system: &LinearSystem, u_h: &[f64]) -> Result<SolverReport> {
    let exact = |p| problem.exact(p);
    let elements = vem::local_elements(mesh)?;
    Ok(SolverReport {
        eps_inf: error_linf(exact, u_h, mesh)?,
        eps_2: error_l2(exact, u_h, mesh, &elements)?,
        eps_s: error_energy(exact, u_h, mesh, &system.stiffness)?,
        kappa1: condition_number_l1(&system.reduced)?,
        h: mesh.mesh_size(),
        n_dofs: system.n_dofs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::tests::square_grid;
    use crate::rng::DetRng;
    use nalgebra::DMatrix;

    #[test]
    fn exact_power_law_is_recovered() {
        let s: Vec<(f64, f64)> = [0.25, 0.125, 0.0625].iter().map(|&h| (h, 3.0 * h * h)).collect();
        let f = fit_convergence(&s).unwrap();
        assert!((f.c - 3.0).abs() < 1e-12);
        assert!((f.p - 2.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn bad_samples_are_rejected() {
        assert!(fit_convergence(&[(0.5, 1.0)]).is_err());
        assert!(fit_convergence(&[(0.5, 1.0), (0.5, 2.0)]).is_err());
        assert!(fit_convergence(&[(0.5, 1.0), (0.25, 0.0)]).is_err());
        assert!(fit_convergence(&[(-0.5, 1.0), (0.25, 1.0)]).is_err());
    }

    #[test]
    fn identity_and_diagonal_condition_numbers() {
        assert!((condition_number_l1(&CsrMatrix::identity(7)).unwrap() - 1.0).abs() < 1e-15);
        let d = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (1, 1, 10.0)]);
        assert!((condition_number_l1(&d).unwrap() - 10.0).abs() < 1e-13);
    }

    fn random_spd(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = DetRng::new(seed);
        let m = DMatrix::from_fn(n, n, |_, _| rng.range(-1.0, 1.0));
        &m * m.transpose() + DMatrix::identity(n, n) * 0.1
    }

    fn to_csr(m: &DMatrix<f64>) -> CsrMatrix {
        let n = m.nrows();
        CsrMatrix::from_triplets(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j, m[(i, j)]))).collect())
    }

    fn dense_norm1(m: &DMatrix<f64>) -> f64 {
        m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    #[test]
    fn dense_spd_matches_explicit_inverse() {
        let m = random_spd(50, 11);
        let oracle = dense_norm1(&m) * dense_norm1(&m.clone().try_inverse().unwrap());
        let k = condition_number_l1(&to_csr(&m)).unwrap();
        assert!((k - oracle).abs() <= 1e-8 * oracle, "{k} vs {oracle}");
    }

    #[test]
    fn estimate_is_a_close_lower_bound() {
        let m = random_spd(40, 5);
        let chol = Cholesky::factor(&to_csr(&m)).unwrap();
        let (exact, est) = (inverse_norm1_exact(&chol), inverse_norm1_estimate(&chol));
        assert!(est <= exact * (1.0 + 1e-12));
        assert!(est >= exact / 3.0);
    }

    #[test]
    fn exact_dofs_give_zero_errors() {
        let mesh = square_grid(4);
        let p = ModelProblem::SinSin;
        let sys = vem::assemble(&mesh, p).unwrap();
        let u: Vec<f64> = mesh.vertices.iter().map(|&q| p.exact(q)).collect();
        assert_eq!(error_linf(|q| p.exact(q), &u, &mesh).unwrap(), 0.0);
        assert_eq!(error_energy(|q| p.exact(q), &u, &mesh, &sys.stiffness).unwrap(), 0.0);
    }

    #[test]
    fn single_vertex_perturbation() {
        let mesh = square_grid(4);
        let p = ModelProblem::SinSin;
        let mut u: Vec<f64> = mesh.vertices.iter().map(|&q| p.exact(q)).collect();
        u[6] += 0.1;
        let max = mesh.vertices.iter().map(|&q| p.exact(q).abs()).fold(0.0, f64::max);
        assert!((error_linf(|q| p.exact(q), &u, &mesh).unwrap() - 0.1 / max).abs() < 1e-15);
    }

    #[test]
    fn constant_error_has_zero_energy() {
        let mesh = square_grid(3);
        let p = ModelProblem::SinSin;
        let sys = vem::assemble(&mesh, p).unwrap();
        let u: Vec<f64> = mesh.vertices.iter().map(|&q| p.exact(q) + 0.5).collect();
        assert!(error_energy(|q| p.exact(q), &u, &mesh, &sys.stiffness).unwrap() < 1e-7);
    }

    #[test]
    fn zero_solution_is_rejected() {
        let mesh = square_grid(2);
        assert!(matches!(error_linf(|_| 0.0, &[0.0; 9], &mesh), Err(Error::ZeroNormalizer)));
    }

    #[test]
    fn quadrature_integrates_one_to_the_area() {
        let mesh = square_grid(3);
        let elements = vem::local_elements(&mesh).unwrap();
        let zero = vec![0.0; mesh.num_vertices()];
        // ‖1 − 0‖ / ‖1‖ = 1 requires both integrals to agree; check the area directly too.
        assert!((error_l2(|_| 1.0, &zero, &mesh, &elements).unwrap() - 1.0).abs() < 1e-12);
        let quad = TriangleQuadrature::with_order(4);
        let total: f64 = elements
            .iter()
            .flat_map(|e| {
                let v = e.polygon.vertices().to_vec();
                e.polygon.sub_triangulate().unwrap().into_iter().map(move |[a, b, c]| (v[a], v[b], v[c]))
            })
            .map(|(a, b, c)| quad.integrate(a, b, c, |_| 1.0))
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn patch_test_errors_vanish() {
        let mesh = square_grid(5);
        let (r, _) = solver_report(&mesh, ModelProblem::Linear).unwrap();
        assert!(r.eps_inf <= 1e-10 && r.eps_2 <= 1e-10 && r.eps_s <= 1e-10);
        assert!(r.kappa1 >= 1.0);
        assert_eq!(r.n_dofs, 36);
    }

    #[test]
    fn sinsin_error_quarters_on_a_refined_grid() {
        let (coarse, _) = solver_report(&square_grid(8), ModelProblem::SinSin).unwrap();
        let (fine, _) = solver_report(&square_grid(16), ModelProblem::SinSin).unwrap();
        let ratio = coarse.eps_2 / fine.eps_2;
        assert!((3.3..=4.7).contains(&ratio), "ratio {ratio}");
        assert!(fine.eps_s < coarse.eps_s);
    }
}
