//! Canvas meshes: a polygon centered in the unit square, surrounded by quality triangles,
//! plus the mirrored refinement hierarchy.

mod cdt;

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::geom::predicates::{orient, segments_intersect};
use crate::geom::{circumcenter, Point2, Polygon2};
use crate::mesh::{CellTag, PolygonMesh, BOUNDARY_EPS};
use crate::{Error, Result};
use cdt::{Cdt, Location, Walk};

/// Side of the central polygon's bounding box, as a fraction of the canvas side.
pub const CANVAS_FILL: f64 = 0.4;
/// Minimum angle targeted by refinement.
pub const MIN_ANGLE_DEG: f64 = 20.0;
/// Largest admissible canvas triangle.
pub const MAX_TRIANGLE_AREA: f64 = 0.01;
/// Steiner point budget before refinement gives up.
pub const MAX_STEINER: usize = 100_000;

/// Scales and translates `p` so its bounding box is centered in the canvas and its
/// longer side spans [`CANVAS_FILL`].
pub fn place_in_canvas(p: &Polygon2) -> Result<Polygon2> {
    let (lo, hi) = p.bounding_box();
    let side = (hi.x - lo.x).max(hi.y - lo.y);
    if !(side > 0.0) || !side.is_finite() {
        return Err(Error::DegenerateGeometry("polygon has an empty bounding box".into()));
    }
    let s = CANVAS_FILL / side;
    let mid = lo.midpoint(hi);
    p.map(|q| Point2::new(0.5 + (q.x - mid.x) * s, 0.5 + (q.y - mid.y) * s))
}

/// Smallest interior angle of a triangle, in radians.
pub fn triangle_min_angle(a: Point2, b: Point2, c: Point2) -> f64 {
    let angle = |p: Point2, q: Point2, r: Point2| {
        let (u, v) = (q - p, r - p);
        u.cross(v).abs().atan2(u.dot(v))
    };
    angle(a, b, c).min(angle(b, c, a)).min(angle(c, a, b))
}

/// Triangulates the unit square around `p` (placed with [`place_in_canvas`]).
///
/// Cell 0 is the polygon; the rest are triangles. Triangles touching a polygon vertex
/// are refined when possible but carry no angle guarantee.
pub fn build_canvas_mesh(p: &Polygon2) -> Result<PolygonMesh> {
    let placed = place_in_canvas(p)?;
    Refiner::new(Some(&placed))?.run()
}

/// Quality triangulation of the empty unit square.
pub fn build_triangle_mesh() -> Result<PolygonMesh> {
    Refiner::new(None)?.run()
}

struct Refiner {
    cdt: Cdt,
    polygon: Vec<usize>,
    outline: Vec<Point2>,
    /// Subsegments of the canvas sides, kept in a stable order.
    sides: Vec<(usize, usize)>,
    inside: Vec<bool>,
    exempt: HashSet<[usize; 3]>,
    steiner: usize,
}


fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn in_diametral_circle(a: Point2, b: Point2, q: Point2) -> bool {
    // Strictly inside: the angle a q b is obtuse.
    (a - q).dot(b - q) < 0.0
}

fn centroid(a: Point2, b: Point2, c: Point2) -> Point2 {
    Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
}

/// `q` sees the segment `a b` under an angle of at least 120 degrees.
fn in_lens(a: Point2, b: Point2, q: Point2) -> bool {
    let (u, v) = (a - q, b - q);
    u.dot(v) <= -0.5 * u.norm() * v.norm()
}

fn in_any_lens(polygon: &[Point2], q: Point2) -> bool {
    let n = polygon.len();
    (0..n).any(|i| in_lens(polygon[i], polygon[(i + 1) % n], q))
}

/// Refinement leaves `a b c` alone because its circumcenter hugs an edge of `polygon`
/// (sees it under 120 degrees or more) or hides behind one. Placing the circumcenter
/// there would need a split of the polygon boundary.
pub fn is_shielded(polygon: &[Point2], a: Point2, b: Point2, c: Point2) -> bool {
    let Some(cc) = circumcenter(a, b, c) else { return true };
    let g = centroid(a, b, c);
    let n = polygon.len();
    in_any_lens(polygon, cc) || (0..n).any(|i| segments_intersect(g, cc, polygon[i], polygon[(i + 1) % n]))
}

impl Refiner {
    fn new(polygon: Option<&Polygon2>) -> Result<Self> {
        let mut cdt = Cdt::unit_square();
        let mut ids = Vec::new();
        if let Some(p) = polygon {
            for &v in p.vertices() {
                if !(v.x > 0.0 && v.x < 1.0 && v.y > 0.0 && v.y < 1.0) {
                    return Err(Error::InvalidParameter("polygon does not fit inside the canvas".into()));
                }
                ids.push(cdt.insert(v, 0)?);
            }
            let distinct: HashSet<usize> = ids.iter().copied().collect();
            if distinct.len() != ids.len() {
                return Err(Error::DegenerateGeometry("polygon vertices coincide".into()));
            }
            for i in 0..ids.len() {
                cdt.insert_segment(ids[i], ids[(i + 1) % ids.len()])?;
            }
        }
        let outline = ids.iter().map(|&i| cdt.pts[i]).collect();
        let mut r = Refiner {
            cdt,
            polygon: ids,
            outline,
            sides: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            inside: Vec::new(),
            exempt: HashSet::new(),
            steiner: 0,
        };
        r.inside = r.flood_inside();
        Ok(r)
    }

    /// Slots of the triangles enclosed by the polygon.
    fn flood_inside(&self) -> Vec<bool> {
        let mut inside = vec![false; self.cdt.num_slots()];
        let n = self.polygon.len();
        let mut queue = VecDeque::new();
        for i in 0..n {
            if let Some(t) = self.cdt.left_of(self.polygon[i], self.polygon[(i + 1) % n]) {
                if !inside[t] {
                    inside[t] = true;
                    queue.push_back(t);
                }
            }
        }
        while let Some(t) = queue.pop_front() {
            let v = self.cdt.tri(t).expect("live triangle");
            for i in 0..3 {
                let (a, b) = (v[i], v[(i + 1) % 3]);
                if self.cdt.is_fixed(a, b) {
                    continue;
                }
                if let Some(u) = self.cdt.left_of(b, a) {
                    if !inside[u] {
                        inside[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        inside
    }

    fn is_inside(&self, t: usize) -> bool {
        self.inside.get(t).copied().unwrap_or(false)
    }

    fn bump(&mut self) -> Result<()> {
        self.steiner += 1;
        if self.steiner > MAX_STEINER {
            return Err(Error::RefinementFailed(format!("more than {MAX_STEINER} Steiner points")));
        }
        Ok(())
    }

    fn split_side(&mut self, i: usize) -> Result<()> {
        self.bump()?;
        let (a, b) = self.sides[i];
        let m = self.cdt.pts[a].midpoint(self.cdt.pts[b]);
        let id = self.cdt.split_edge(a, b, m);
        self.sides[i] = (a, id);
        self.sides.insert(i + 1, (id, b));
        Ok(())
    }

    /// Index of the first canvas subsegment whose diametral circle contains `q`.
    fn encroached_side(&self, q: Point2) -> Option<usize> {
        self.sides
            .iter()
            .position(|&(a, b)| in_diametral_circle(self.cdt.pts[a], self.cdt.pts[b], q))
    }

    /// Splits canvas subsegments until no vertex lies in their diametral circles.
    fn clear_encroached_sides(&mut self) -> Result<()> {
        let mut i = 0;
        while i < self.sides.len() {
            let (a, b) = self.sides[i];
            let (pa, pb) = (self.cdt.pts[a], self.cdt.pts[b]);
            let hit = self
                .cdt
                .pts
                .iter()
                .enumerate()
                .any(|(k, &q)| k != a && k != b && in_diametral_circle(pa, pb, q));
            if hit {
                self.split_side(i)?;
            } else {
                i += 1;
            }
        }
        Ok(())
    }

    fn is_bad(&self, v: [usize; 3]) -> bool {
        let [a, b, c] = v.map(|i| self.cdt.pts[i]);
        let area = 0.5 * orient(a, b, c);
        area > MAX_TRIANGLE_AREA || triangle_min_angle(a, b, c) < MIN_ANGLE_DEG.to_radians()
    }

    fn exempt_key(v: [usize; 3]) -> [usize; 3] {
        let mut k = v;
        k.sort_unstable();
        k
    }

    /// Attempts to improve one bad triangle; returns whether the mesh changed.
    ///
    /// Polygon segments are never split, so shielded triangles (see [`is_shielded`]) are
    /// left as they are.
    fn refine(&mut self, t: usize, v: [usize; 3]) -> Result<bool> {
        let [a, b, c] = v.map(|i| self.cdt.pts[i]);
        let Some(cc) = circumcenter(a, b, c) else {
            return Ok(self.give_up(v));
        };
        if let Some(i) = self.encroached_side(cc) {
            self.split_side(i)?;
            return Ok(true);
        }
        let g = centroid(a, b, c);
        let oversized = 0.5 * orient(a, b, c) > MAX_TRIANGLE_AREA;
        if in_any_lens(&self.outline, cc) {
            return self.fallback(t, v, g, oversized);
        }
        let u = match self.cdt.walk(t, g, cc) {
            Walk::Reached(u) => u,
            Walk::Blocked(p, q) => {
                return match self.sides.iter().position(|&s| key(s.0, s.1) == key(p, q)) {
                    Some(i) => self.split_side(i).map(|_| true),
                    None => self.fallback(t, v, g, oversized),
                };
            }
        };
        if self.is_inside(u) {
            return Ok(self.give_up(v));
        }
        match self.cdt.locate(cc, u) {
            Some(Location::Triangle(_)) => {}
            Some(Location::Edge(p, q)) if !self.cdt.is_fixed(p, q) => {}
            _ => return Ok(self.give_up(v)),
        }
        self.bump()?;
        self.cdt.insert(cc, u)?;
        Ok(true)
    }

    /// A shielded triangle that is too large is split at its centroid instead.
    fn fallback(&mut self, t: usize, v: [usize; 3], g: Point2, oversized: bool) -> Result<bool> {
        if !oversized {
            return Ok(self.give_up(v));
        }
        self.bump()?;
        self.cdt.insert(g, t)?;
        Ok(true)
    }

    fn give_up(&mut self, v: [usize; 3]) -> bool {
        self.exempt.insert(Self::exempt_key(v));
        false
    }

    fn run(mut self) -> Result<PolygonMesh> {
        self.clear_encroached_sides()?;
        loop {
            let bad: Vec<(usize, [usize; 3])> = self
                .cdt
                .live()
                .filter(|&(t, v)| !self.is_inside(t) && !self.exempt.contains(&Self::exempt_key(v)) && self.is_bad(v))
                .collect();
            let mut changed = false;
            for (t, v) in bad {
                if self.cdt.tri(t) != Some(v) {
                    continue;
                }
                changed |= self.refine(t, v)?;
            }
            if !changed {
                break;
            }
        }
        self.finish()
    }

    fn finish(self) -> Result<PolygonMesh> {
        let inside = self.flood_inside();
        let mut cells = Vec::new();
        let mut tags = Vec::new();
        if !self.polygon.is_empty() {
            cells.push(self.polygon.clone());
            tags.push(CellTag::CentralPolygon);
        }
        for (t, v) in self.cdt.live() {
            if !inside.get(t).copied().unwrap_or(false) {
                cells.push(v.to_vec());
                tags.push(CellTag::CanvasTriangle);
            }
        }
        let mesh = PolygonMesh::new(self.cdt.pts, cells, tags);
        mesh.validate()?;
        Ok(mesh)
    }
}

/// Reflects the mesh across `x = 1` and `y = 1` and scales the 2×2 block back to the unit square.
pub fn mirror(mesh: &PolygonMesh) -> PolygonMesh {
    let n = mesh.vertices.len();
    let seam = |v: f64| (v - 1.0).abs() <= BOUNDARY_EPS;
    let mut vertices = Vec::with_capacity(4 * n);
    // index[k][i]: merged id of vertex i in copy k (bit 0 flips x, bit 1 flips y).
    let mut index = vec![vec![usize::MAX; n]; 4];
    for k in 0..4 {
        let (fx, fy) = (k & 1 == 1, k & 2 == 2);
        for (i, &p) in mesh.vertices.iter().enumerate() {
            let mut home = k;
            if fx && seam(p.x) {
                home &= !1;
            }
            if fy && seam(p.y) {
                home &= !2;
            }
            if home != k {
                index[k][i] = index[home][i];
                continue;
            }
            let x = if fx { 2.0 - p.x } else { p.x };
            let y = if fy { 2.0 - p.y } else { p.y };
            index[k][i] = vertices.len();
            vertices.push(Point2::new(0.5 * x, 0.5 * y));
        }
    }
    let mut cells = Vec::with_capacity(4 * mesh.cells.len());
    let mut tags = Vec::with_capacity(4 * mesh.cells.len());
    for (k, map) in index.iter().enumerate() {
        let reflect = (k == 1) || (k == 2);
        for (cell, &tag) in mesh.cells.iter().zip(&mesh.tags) {
            let mut c: Vec<usize> = cell.iter().map(|&i| map[i]).collect();
            if reflect {
                c.reverse();
            }
            cells.push(c);
            tags.push(tag);
        }
    }
    PolygonMesh::new(vertices, cells, tags)
}

/// A base mesh and its successive mirror refinements.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshHierarchy {
    pub levels: Vec<PolygonMesh>,
    /// Mesh size `h` of each level.
    pub level_sizes: Vec<f64>,
}

pub fn build_hierarchy(mesh: PolygonMesh, levels: usize) -> Result<MeshHierarchy> {
    if levels == 0 {
        return Err(Error::InvalidParameter("a hierarchy needs at least one level".into()));
    }
    let mut out = vec![mesh];
    while out.len() < levels {
        let next = mirror(out.last().expect("nonempty"));
        out.push(next);
    }
    let level_sizes = out.iter().map(PolygonMesh::mesh_size).collect();
    Ok(MeshHierarchy { levels: out, level_sizes })
}
