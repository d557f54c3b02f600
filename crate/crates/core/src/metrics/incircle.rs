//! Largest inscribed circle.
//!
//! The optimum touches three boundary features (edge lines or reflex vertices),
//! or lies on a ridge between two parallel edges whose ends are again
//! three-feature points. We enumerate every feature triple, solve for the
//! equidistant centers, and keep the interior center farthest from the boundary.

use crate::error::{Error, Result};
use crate::geom::{point_in_polygon, Circle, Location, Point2, Polygon2, MIN_AREA};

#[derive(Debug, Clone, Copy)]
enum Feature {
    /// Supporting line `n·x = c` with `n` the unit inward normal.
    Line { n: Point2, c: f64 },
    Point(Point2),
}

fn features(p: &Polygon2) -> Vec<Feature> {
    let mut out = Vec::with_capacity(2 * p.len());
    for (a, b) in p.edges() {
        let d = b - a;
        let len = d.norm();
        let n = Point2::new(-d.y / len, d.x / len);
        out.push(Feature::Line { n, c: n.dot(a) });
    }
    let angles = p.interior_angles();
    for (i, &ang) in angles.iter().enumerate() {
        if ang > std::f64::consts::PI + 1e-12 {
            out.push(Feature::Point(p.vertex(i)));
        }
    }
    out
}

/// Distance from `q` to the polygon boundary.
pub(crate) fn boundary_distance(q: Point2, p: &Polygon2) -> f64 {
    p.edges().map(|(a, b)| q.dist_to_segment(a, b)).fold(f64::INFINITY, f64::min)
}

fn solve2(a11: f64, a12: f64, a21: f64, a22: f64, b1: f64, b2: f64) -> Option<(f64, f64)> {
    let det = a11 * a22 - a12 * a21;
    let scale = (a11.abs() + a12.abs()) * (a21.abs() + a22.abs());
    if det.abs() <= 1e-13 * scale || scale == 0.0 {
        return None;
    }
    Some(((b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det))
}

/// Positive roots of `a r² + b r + c = 0`.
fn positive_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < 1e-14 * (b.abs() + c.abs()) {
        if b != 0.0 {
            let r = -c / b;
            return if r > 0.0 { vec![r] } else { vec![] };
        }
        return vec![];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let sq = disc.sqrt();
    // Numerically stable pair of roots.
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = Vec::with_capacity(2);
    if q != 0.0 {
        roots.push(q / a);
        roots.push(c / q);
    } else {
        roots.push(0.0);
    }
    roots.into_iter().filter(|&r| r > 0.0 && r.is_finite()).collect()
}

/// Centers `x(r) = x0 + r·u` constrained to `|x - p| = r`.
fn on_circle_through(x0: Point2, u: Point2, p: Point2) -> Vec<Point2> {
    let w = x0 - p;
    positive_roots(u.dot(u) - 1.0, 2.0 * u.dot(w), w.dot(w))
        .into_iter()
        .map(|r| x0 + u * r)
        .collect()
}

/// Points `x` with `m1·x = b1 + r·s1`, `m2·x = b2 + r·s2` and `|x - p| = r`.
fn two_linear_one_point(m1: Point2, b1: f64, s1: f64, m2: Point2, b2: f64, s2: f64, p: Point2) -> Vec<Point2> {
    if let (Some(x0), Some(u)) = (
        solve2(m1.x, m1.y, m2.x, m2.y, b1, b2),
        solve2(m1.x, m1.y, m2.x, m2.y, s1, s2),
    ) {
        return on_circle_through(Point2::new(x0.0, x0.1), Point2::new(u.0, u.1), p);
    }
    // Parallel constraints: they pin r, leaving a line of centers.
    let l1 = m1.norm();
    let l2 = m2.norm();
    if l1 == 0.0 || l2 == 0.0 {
        return vec![];
    }
    let sign = m1.dot(m2).signum();
    // m1/l1 = sign·m2/l2 = e  =>  (b1 + r s1)/l1 = sign (b2 + r s2)/l2
    let denom = s1 / l1 - sign * s2 / l2;
    if denom.abs() < 1e-14 {
        return vec![];
    }
    let r = (sign * b2 / l2 - b1 / l1) / denom;
    if !(r > 0.0) {
        return vec![];
    }
    let e = m1 * (1.0 / l1);
    let offset = (b1 + r * s1) / l1;
    // x = t·perp + offset·e with |x - p| = r
    let perp = Point2::new(-e.y, e.x);
    let along = offset - e.dot(p);
    let rem = r * r - along * along;
    if rem < 0.0 {
        return vec![];
    }
    let base = p + e * along;
    let h = rem.sqrt();
    vec![base + perp * h, base - perp * h]
}

fn triple_centers(f: [Feature; 3]) -> Vec<Point2> {
    use Feature::*;
    let mut lines = Vec::new();
    let mut points = Vec::new();
    for x in f {
        match x {
            Line { n, c } => lines.push((n, c)),
            Point(p) => points.push(p),
        }
    }
    match (lines.len(), points.len()) {
        (3, 0) => {
            // n_i·x - r = c_i, eliminate r pairwise.
            let (n1, c1) = lines[0];
            let (n2, c2) = lines[1];
            let (n3, c3) = lines[2];
            let (a, b) = (n1 - n2, n1 - n3);
            solve2(a.x, a.y, b.x, b.y, c1 - c2, c1 - c3)
                .map(|(x, y)| vec![Point2::new(x, y)])
                .unwrap_or_default()
        }
        (2, 1) => {
            let (n1, c1) = lines[0];
            let (n2, c2) = lines[1];
            two_linear_one_point(n1, c1, 1.0, n2, c2, 1.0, points[0])
        }
        (1, 2) => {
            let (n, c) = lines[0];
            let (p, q) = (points[0], points[1]);
            let m = q - p;
            let k = 0.5 * (q.dot(q) - p.dot(p));
            two_linear_one_point(n, c, 1.0, m, k, 0.0, p)
        }
        (0, 3) => crate::geom::circumcenter(points[0], points[1], points[2]).into_iter().collect(),
        _ => unreachable!(),
    }
}

/// Largest circle contained in the polygon.
pub fn inscribed_circle(p: &Polygon2) -> Result<Circle> {
    let area = p.signed_area();
    if area < MIN_AREA {
        return Err(Error::DegenerateGeometry(format!("polygon area {area:.3e}")));
    }
    if p.len() == 3 {
        // Incircle: weighted vertex average by opposite edge lengths.
        let v = p.vertices();
        let (la, lb, lc) = (v[1].dist(v[2]), v[2].dist(v[0]), v[0].dist(v[1]));
        let per = la + lb + lc;
        let center = (v[0] * la + v[1] * lb + v[2] * lc) * (1.0 / per);
        return Ok(Circle::new(center, 2.0 * area / per));
    }
    let feats = features(p);
    let m = feats.len();
    let mut best = Circle::new(p.centroid(), 0.0);
    if point_in_polygon(best.center, p) == Location::Inside {
        best.radius = boundary_distance(best.center, p);
    }
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for c in triple_centers([feats[i], feats[j], feats[k]]) {
                    if !c.is_finite() || point_in_polygon(c, p) != Location::Inside {
                        continue;
                    }
                    let d = boundary_distance(c, p);
                    if d > best.radius {
                        best = Circle::new(c, d);
                    }
                }
            }
        }
    }
    if best.radius <= 0.0 {
        return Err(Error::DegenerateGeometry("no interior inscribed-circle candidate".into()));
    }
    Ok(best)
}
