use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::predicates::{in_closed_triangle, orient, segments_intersect};
use super::{Point2, BOUNDARY_TOL, MIN_AREA};
use crate::error::{Error, Result};

/// A simple polygon stored as a counter-clockwise vertex loop without a closing duplicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct Polygon2 {
    vertices: Vec<Point2>,
}

impl TryFrom<Vec<Point2>> for Polygon2 {
    type Error = Error;
    fn try_from(vertices: Vec<Point2>) -> Result<Self> {
        Self::new(vertices)
    }
}

impl From<Polygon2> for Vec<Point2> {
    fn from(p: Polygon2) -> Self {
        p.vertices
    }
}

impl Polygon2 {
    /// Validates the loop and normalizes it to counter-clockwise order.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!("{} vertices, need at least 3", vertices.len())));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidPolygon(format!("vertex {i} is not finite")));
        }
        let n = vertices.len();
        if let Some(i) = (0..n).find(|&i| vertices[i] == vertices[(i + 1) % n]) {
            return Err(Error::InvalidPolygon(format!("zero-length edge at vertex {i}")));
        }
        if !is_simple(&vertices) {
            return Err(Error::InvalidPolygon("self-intersecting vertex loop".into()));
        }
        let area = shoelace(&vertices);
        if area == 0.0 {
            return Err(Error::InvalidPolygon("zero signed area".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(Self { vertices })
    }

    /// Wraps a loop already known to be simple and counter-clockwise.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex with cyclic indexing.
    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Directed edges `(v[i], v[i+1])`.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        self.edges().map(|(a, b)| a.dist(b)).collect()
    }

    /// Enclosed area, positive for the stored counter-clockwise loop.
    pub fn signed_area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point2 {
        let o = self.vertices[0];
        let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
        for (a, b) in self.edges() {
            let (a, b) = (a - o, b - o);
            let w = a.cross(b);
            a2 += w;
            cx += (a.x + b.x) * w;
            cy += (a.y + b.y) * w;
        }
        Point2::new(o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2))
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        let mut lo = self.vertices[0];
        let mut hi = lo;
        for v in &self.vertices[1..] {
            lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }

    /// Interior angle at each vertex, in `(0, 2π)`; reflex vertices exceed π.
    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let v = self.vertices[i];
                let prev = self.vertices[(i + n - 1) % n];
                let next = self.vertices[(i + 1) % n];
                let (e1, e2) = (next - v, prev - v);
                let a = e1.cross(e2).atan2(e1.dot(e2));
                if a < 0.0 { a + 2.0 * PI } else { a }
            })
            .collect()
    }

    /// Maximum distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(v[i].dist_sq(v[j]));
            }
        }
        best.sqrt()
    }

    /// Applies a map to every vertex and re-validates; reflections are re-oriented.
    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&p| f(p)).collect())
    }

    /// Same polygon with the vertex list rotated to start at `k`.
    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.vertices.clone();
        let n = v.len();
        v.rotate_left(k % n);
        Self { vertices: v }
    }

    /// Ear-clipping triangulation into vertex-index triples, each counter-clockwise.
    pub fn sub_triangulate(&self) -> Result<Vec<[usize; 3]>> {
        let area = self.signed_area();
        if area < MIN_AREA {
            return Err(Error::DegenerateGeometry(format!("polygon area {area:.3e}")));
        }
        let pts = &self.vertices;
        let mut remaining: Vec<usize> = (0..pts.len()).collect();
        let mut out = Vec::with_capacity(pts.len() - 2);
        while remaining.len() > 3 {
            let m = remaining.len();
            let ear = (0..m).find(|&k| {
                let (ia, ib, ic) = (remaining[(k + m - 1) % m], remaining[k], remaining[(k + 1) % m]);
                let (a, b, c) = (pts[ia], pts[ib], pts[ic]);
                if orient(a, b, c) <= 0.0 {
                    return false;
                }
                remaining.iter().all(|&j| {
                    j == ia || j == ib || j == ic || !in_closed_triangle(a, b, c, pts[j])
                })
            });
            let Some(k) = ear else {
                return Err(Error::DegenerateGeometry("no ear found while clipping".into()));
            };
            let m = remaining.len();
            out.push([remaining[(k + m - 1) % m], remaining[k], remaining[(k + 1) % m]]);
            remaining.remove(k);
        }
        let [a, b, c] = [remaining[0], remaining[1], remaining[2]];
        if orient(pts[a], pts[b], pts[c]) <= 0.0 {
            return Err(Error::DegenerateGeometry("final ear has no area".into()));
        }
        out.push([a, b, c]);
        Ok(out)
    }

    /// Text form: vertex count, then one `x y` line per vertex with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.vertices.len());
        for v in &self.vertices {
            let _ = writeln!(s, "{:.16e} {:.16e}", v.x, v.y);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty polygon file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("vertex count: {e}")))?;
        let mut vertices = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing vertex {i}")))?;
            let mut it = line.split_whitespace().map(str::parse::<f64>);
            match (it.next(), it.next()) {
                (Some(Ok(x)), Some(Ok(y))) => vertices.push(Point2::new(x, y)),
                _ => return Err(Error::Parse(format!("bad vertex line {line:?}"))),
            }
        }
        Self::new(vertices)
    }
}

fn shoelace(v: &[Point2]) -> f64 {
    let o = v[0];
    let n = v.len();
    let mut a2 = 0.0;
    for i in 1..n - 1 {
        a2 += (v[i] - o).cross(v[i + 1] - o);
    }
    0.5 * a2
}

/// True iff no two edges of the closed loop meet except consecutive edges at their shared vertex.
pub fn is_simple(vertices: &[Point2]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    let e = |i: usize| (vertices[i % n], vertices[(i + 1) % n]);
    for i in 0..n {
        let (a, b) = e(i);
        if a == b {
            return false;
        }
        // Consecutive edges must not fold back onto each other.
        let c = vertices[(i + 2) % n];
        if orient(a, b, c) == 0.0 && (b - a).dot(c - b) < 0.0 {
            return false;
        }
    }
    if n == 3 {
        return true;
    }
    for i in 0..n {
        let (a, b) = e(i);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = e(j);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Crossing-number classification with a [`BOUNDARY_TOL`] band around the edges.
pub fn point_in_polygon(q: Point2, p: &Polygon2) -> Location {
    if p.edges().any(|(a, b)| q.dist_to_segment(a, b) <= BOUNDARY_TOL) {
        return Location::Boundary;
    }
    let mut inside = false;
    for (a, b) in p.edges() {
        if (a.y > q.y) != (b.y > q.y) {
            let x = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if q.x < x {
                inside = !inside;
            }
        }
    }
    if inside { Location::Inside } else { Location::Outside }
}
