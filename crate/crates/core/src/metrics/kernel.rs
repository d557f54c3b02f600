//! Polygon kernel as the intersection of the inner half-planes of all edges.

use crate::geom::{Point2, Polygon2, MIN_AREA};

/// Keeps the part of the convex loop `poly` left of the directed line `a → b`.
fn clip_left(poly: &[Point2], a: Point2, b: Point2) -> Vec<Point2> {
    let d = b - a;
    let side = |p: Point2| d.cross(p - a);
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = poly[i];
        let next = poly[(i + 1) % n];
        let (sc, sn) = (side(cur), side(next));
        if sc >= 0.0 {
            out.push(cur);
        }
        if (sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0) {
            let t = sc / (sc - sn);
            out.push(cur.lerp(next, t));
        }
    }
    out
}

fn loop_area(v: &[Point2]) -> f64 {
    if v.len() < 3 {
        return 0.0;
    }
    let o = v[0];
    0.5 * (1..v.len() - 1).map(|i| (v[i] - o).cross(v[i + 1] - o)).sum::<f64>()
}

/// Drops consecutive near-duplicate and collinear vertices of a convex loop.
fn tidy(mut v: Vec<Point2>, eps: f64) -> Vec<Point2> {
    v.dedup_by(|a, b| a.dist(*b) <= eps);
    while v.len() > 1 && v[0].dist(v[v.len() - 1]) <= eps {
        v.pop();
    }
    let mut changed = true;
    while changed && v.len() >= 3 {
        changed = false;
        let n = v.len();
        for i in 0..n {
            let (p, c, q) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            if (c - p).cross(q - c) <= eps * (q - p).norm() {
                v.remove(i);
                changed = true;
                break;
            }
        }
    }
    v
}

pub(crate) fn is_convex(p: &Polygon2) -> bool {
    let n = p.len();
    (0..n).all(|i| {
        let (a, b, c) = (p.vertex(i), p.vertex(i + 1), p.vertex(i + 2));
        crate::geom::predicates::orient(a, b, c) >= 0.0
    })
}

/// Kernel polygon, `None` when the polygon is not star-shaped (or the kernel is negligibly thin).
pub fn kernel(p: &Polygon2) -> Option<Polygon2> {
    if is_convex(p) {
        return Some(p.clone());
    }
    let (lo, hi) = p.bounding_box();
    let mut region = vec![lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)];
    for (a, b) in p.edges() {
        region = clip_left(&region, a, b);
        if region.len() < 3 {
            return None;
        }
    }
    let eps = 1e-14 * p.diameter();
    let region = tidy(region, eps);
    if region.len() < 3 || loop_area(&region) < MIN_AREA {
        return None;
    }
    Polygon2::new(region).ok()
}

/// Kernel area, zero for an empty kernel.
pub fn kernel_area(p: &Polygon2) -> f64 {
    kernel(p).map_or(0.0, |k| k.signed_area())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(f64, f64)]) -> Polygon2 {
        Polygon2::new(c.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn convex_kernel_is_polygon() {
        let p = poly(&[(0.0, 0.0), (2.0, 0.0), (3.0, 1.0), (1.0, 2.0)]);
        assert_eq!(kernel_area(&p), p.signed_area());
    }

    #[test]
    fn l_shape_kernel_is_unit_square() {
        let p = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        let k = kernel(&p).unwrap();
        assert!((k.signed_area() - 1.0).abs() < 1e-12);
        let (lo, hi) = k.bounding_box();
        assert!(lo.dist(Point2::new(0.0, 0.0)) < 1e-12 && hi.dist(Point2::new(1.0, 1.0)) < 1e-12);
    }

    #[test]
    fn deep_u_has_empty_kernel() {
        // Slot walls face each other: x >= 2 and x <= 1 at once.
        let p = poly(&[(0.0, 0.0), (3.0, 0.0), (3.0, 3.0), (2.0, 3.0), (2.0, 1.0), (1.0, 1.0), (1.0, 3.0), (0.0, 3.0)]);
        assert!(kernel(&p).is_none());
    }
}
