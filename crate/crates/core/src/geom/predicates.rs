//! Orientation and segment predicates backed by adaptive exact arithmetic.

use super::Point2;

/// Positive when `a, b, c` turn counter-clockwise, negative when clockwise, zero when collinear.
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    robust::orient2d(a.coord(), b.coord(), c.coord())
}

/// Positive when `d` lies strictly inside the circle through the CCW triangle `a, b, c`.
pub fn in_circle(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    robust::incircle(a.coord(), b.coord(), c.coord(), d.coord())
}

/// `p` lies on the closed segment `[a, b]`, given that the three are collinear.
fn on_collinear_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `[a, b]` and `[c, d]` share at least one point.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_collinear_segment(c, d, a))
        || (d2 == 0.0 && on_collinear_segment(c, d, b))
        || (d3 == 0.0 && on_collinear_segment(a, b, c))
        || (d4 == 0.0 && on_collinear_segment(a, b, d))
}

/// Segments cross at a single point interior to both.
pub fn segments_cross_properly(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// `p` lies in the closed triangle `a, b, c` (any orientation).
pub fn in_closed_triangle(a: Point2, b: Point2, c: Point2, p: Point2) -> bool {
    let o1 = orient(a, b, p);
    let o2 = orient(b, c, p);
    let o3 = orient(c, a, p);
    let has_neg = o1 < 0.0 || o2 < 0.0 || o3 < 0.0;
    let has_pos = o1 > 0.0 || o2 > 0.0 || o3 > 0.0;
    !(has_neg && has_pos)
}

/// Intersection point of the lines through `a, b` and `c, d`, if not parallel.
pub fn line_intersection(a: Point2, b: Point2, c: Point2, d: Point2) -> Option<Point2> {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let t = (c - a).cross(s) / denom;
    Some(a + r * t)
}
