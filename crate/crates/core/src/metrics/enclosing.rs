//! Minimum enclosing circle of the vertex cloud (Welzl, iterative form).

use crate::geom::{Circle, Point2, Polygon2};
use crate::rng::DetRng;

const SHUFFLE_SEED: u64 = 0x5EED_C1C1E;

fn covers(c: &Circle, p: Point2, eps: f64) -> bool {
    c.center.dist(p) <= c.radius + eps
}

/// Circle through three points, falling back to the widest pair when collinear.
fn circle3(a: Point2, b: Point2, c: Point2) -> Circle {
    Circle::circumcircle(a, b, c).unwrap_or_else(|| {
        let pairs = [(a, b), (b, c), (a, c)];
        let (p, q) = pairs
            .into_iter()
            .max_by(|x, y| x.0.dist_sq(x.1).total_cmp(&y.0.dist_sq(y.1)))
            .unwrap();
        Circle::from_diameter(p, q)
    })
}

/// Smallest circle containing every point; expected linear time after a fixed-seed shuffle.
pub fn enclosing_circle_of_points(points: &[Point2]) -> Circle {
    assert!(!points.is_empty());
    let mut pts = points.to_vec();
    DetRng::new(SHUFFLE_SEED).shuffle(&mut pts);
    let scale = pts.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max).max(1e-300);
    let eps = 1e-14 * scale;

    let mut c = Circle::new(pts[0], 0.0);
    for i in 1..pts.len() {
        if covers(&c, pts[i], eps) {
            continue;
        }
        c = Circle::new(pts[i], 0.0);
        for j in 0..i {
            if covers(&c, pts[j], eps) {
                continue;
            }
            c = Circle::from_diameter(pts[i], pts[j]);
            for k in 0..j {
                if !covers(&c, pts[k], eps) {
                    c = circle3(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    c
}

/// Minimum enclosing circle of the polygon's vertices.
pub fn min_enclosing_circle(p: &Polygon2) -> Circle {
    enclosing_circle_of_points(p.vertices())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square() {
        let sq = Polygon2::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        let c = min_enclosing_circle(&sq);
        assert!((c.radius - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        assert!(c.center.dist(Point2::new(0.5, 0.5)) < 1e-15);
    }

    #[test]
    fn skinny_obtuse_triangle_uses_longest_edge() {
        let t = Polygon2::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, 0.05)])
            .unwrap();
        let c = min_enclosing_circle(&t);
        assert!((c.radius - 0.5).abs() < 1e-15);
        assert!(c.center.dist(Point2::new(0.5, 0.0)) < 1e-15);
    }

    #[test]
    fn collinear_cloud() {
        let pts: Vec<_> = (0..5).map(|i| Point2::new(i as f64, 2.0 * i as f64)).collect();
        let c = enclosing_circle_of_points(&pts);
        assert!((c.radius - 0.5 * 80f64.sqrt()).abs() < 1e-12);
    }
}
