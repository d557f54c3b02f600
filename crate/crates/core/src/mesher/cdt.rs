//! Constrained Delaunay triangulation of the unit square, maintained by edge flips.
//!
//! Triangles are stored CCW; a map from directed edges to the triangle on their left
//! gives adjacency. Dead slots are recycled. Nothing iterates the hash maps, so the
//! result is deterministic.

use std::collections::{HashMap, HashSet};

use crate::geom::predicates::{in_circle, orient, segments_cross_properly, segments_intersect};
use crate::geom::Point2;
use crate::{Error, Result};

const DEAD: [usize; 3] = [usize::MAX; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Location {
    Triangle(usize),
    Edge(usize, usize),
    Vertex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Walk {
    Reached(usize),
    Blocked(usize, usize),
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone)]
pub(crate) struct Cdt {
    pub pts: Vec<Point2>,
    tris: Vec<[usize; 3]>,
    free: Vec<usize>,
    edges: HashMap<(usize, usize), usize>,
    fixed: HashSet<(usize, usize)>,
}

impl Cdt {
    /// Two triangles covering `[0, 1]²`; the four sides are constrained.
    pub fn unit_square() -> Self {
        let mut cdt = Cdt {
            pts: vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)],
            tris: Vec::new(),
            free: Vec::new(),
            edges: HashMap::new(),
            fixed: HashSet::new(),
        };
        cdt.add_tri(0, 1, 2);
        cdt.add_tri(0, 2, 3);
        for i in 0..4 {
            cdt.fixed.insert(key(i, (i + 1) % 4));
        }
        cdt
    }

    pub fn num_slots(&self) -> usize {
        self.tris.len()
    }

    pub fn tri(&self, t: usize) -> Option<[usize; 3]> {
        let v = self.tris[t];
        (v != DEAD).then_some(v)
    }

    pub fn live(&self) -> impl Iterator<Item = (usize, [usize; 3])> + '_ {
        self.tris.iter().enumerate().filter(|(_, v)| **v != DEAD).map(|(t, v)| (t, *v))
    }

    pub fn is_fixed(&self, a: usize, b: usize) -> bool {
        self.fixed.contains(&key(a, b))
    }

    pub fn set_fixed(&mut self, a: usize, b: usize, on: bool) {
        if on {
            self.fixed.insert(key(a, b));
        } else {
            self.fixed.remove(&key(a, b));
        }
    }

    /// Triangle with the directed edge `a → b`.
    pub fn left_of(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.get(&(a, b)).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains_key(&(a, b)) || self.edges.contains_key(&(b, a))
    }

    fn apex(&self, t: usize, a: usize, b: usize) -> usize {
        let v = self.tris[t];
        v.into_iter().find(|&x| x != a && x != b).expect("edge belongs to triangle")
    }

    fn add_tri(&mut self, a: usize, b: usize, c: usize) -> usize {
        let t = match self.free.pop() {
            Some(t) => {
                self.tris[t] = [a, b, c];
                t
            }
            None => {
                self.tris.push([a, b, c]);
                self.tris.len() - 1
            }
        };
        self.edges.insert((a, b), t);
        self.edges.insert((b, c), t);
        self.edges.insert((c, a), t);
        t
    }

    fn kill_tri(&mut self, t: usize) {
        let [a, b, c] = self.tris[t];
        for e in [(a, b), (b, c), (c, a)] {
            if self.edges.get(&e) == Some(&t) {
                self.edges.remove(&e);
            }
        }
        self.tris[t] = DEAD;
        self.free.push(t);
    }

    fn p(&self, i: usize) -> Point2 {
        self.pts[i]
    }

    /// Replaces the diagonal `a b` of the quad formed by its two triangles.
    fn flip(&mut self, a: usize, b: usize) -> (usize, usize) {
        let t1 = self.left_of(a, b).expect("flip edge has a left triangle");
        let t2 = self.left_of(b, a).expect("flip edge has a right triangle");
        let c = self.apex(t1, a, b);
        let d = self.apex(t2, a, b);
        self.kill_tri(t1);
        self.kill_tri(t2);
        self.add_tri(a, d, c);
        self.add_tri(d, b, c);
        (c, d)
    }

    /// Point location by a visibility walk, with an exhaustive fallback.
    pub fn locate(&self, q: Point2, start: usize) -> Option<Location> {
        let mut t = if self.tri(start).is_some() { start } else { self.live().next()?.0 };
        let limit = 4 * self.tris.len() + 16;
        for step in 0..limit {
            let v = self.tris[t];
            let mut moved = false;
            for k in 0..3 {
                // Rotate the starting edge so walks cannot cycle.
                let i = (k + step) % 3;
                let (a, b) = (v[i], v[(i + 1) % 3]);
                if orient(self.p(a), self.p(b), q) < 0.0 {
                    match self.left_of(b, a) {
                        Some(n) => {
                            t = n;
                            moved = true;
                            break;
                        }
                        None => return None,
                    }
                }
            }
            if !moved {
                return Some(self.classify(t, q));
            }
        }
        self.live()
            .find(|(_, [a, b, c])| {
                orient(self.p(*a), self.p(*b), q) >= 0.0
                    && orient(self.p(*b), self.p(*c), q) >= 0.0
                    && orient(self.p(*c), self.p(*a), q) >= 0.0
            })
            .map(|(t, _)| self.classify(t, q))
    }

    fn classify(&self, t: usize, q: Point2) -> Location {
        let v = self.tris[t];
        for &i in &v {
            if self.p(i) == q {
                return Location::Vertex(i);
            }
        }
        for i in 0..3 {
            let (a, b) = (v[i], v[(i + 1) % 3]);
            if orient(self.p(a), self.p(b), q) == 0.0 {
                return Location::Edge(a, b);
            }
        }
        Location::Triangle(t)
    }

    /// Walks the straight segment from `from` (inside triangle `t0`) to `to`, stopping
    /// at the first constrained edge it would cross.
    pub fn walk(&self, t0: usize, from: Point2, to: Point2) -> Walk {
        let mut t = t0;
        let mut came_from: Option<(usize, usize)> = None;
        for _ in 0..4 * self.tris.len() + 16 {
            let v = self.tris[t];
            let inside = (0..3).all(|i| orient(self.p(v[i]), self.p(v[(i + 1) % 3]), to) >= 0.0);
            if inside {
                return Walk::Reached(t);
            }
            let exit = (0..3).map(|i| (v[i], v[(i + 1) % 3])).find(|&(a, b)| {
                Some((b, a)) != came_from
                    && orient(self.p(a), self.p(b), to) < 0.0
                    && segments_intersect(from, to, self.p(a), self.p(b))
            });
            let Some((a, b)) = exit else {
                return Walk::Reached(t);
            };
            if self.is_fixed(a, b) {
                return Walk::Blocked(a, b);
            }
            match self.left_of(b, a) {
                Some(n) => {
                    came_from = Some((a, b));
                    t = n;
                }
                None => return Walk::Blocked(a, b),
            }
        }
        Walk::Reached(t)
    }

    /// Inserts `q` and restores the constrained Delaunay property. A point on a
    /// constrained edge splits it into two constrained halves.
    pub fn insert(&mut self, q: Point2, hint: usize) -> Result<usize> {
        let loc = self
            .locate(q, hint)
            .ok_or_else(|| Error::DegenerateGeometry(format!("point ({}, {}) outside the canvas", q.x, q.y)))?;
        let id = match loc {
            Location::Vertex(v) => return Ok(v),
            Location::Triangle(t) => {
                let id = self.push_point(q);
                let [a, b, c] = self.tris[t];
                self.kill_tri(t);
                self.add_tri(a, b, id);
                self.add_tri(b, c, id);
                self.add_tri(c, a, id);
                self.legalize(id, vec![(a, b), (b, c), (c, a)]);
                id
            }
            Location::Edge(a, b) => self.split_edge(a, b, q),
        };
        Ok(id)
    }

    fn push_point(&mut self, q: Point2) -> usize {
        self.pts.push(q);
        self.pts.len() - 1
    }

    /// Inserts `q`, which lies on the edge `a b`.
    pub fn split_edge(&mut self, a: usize, b: usize, q: Point2) -> usize {
        let id = self.push_point(q);
        let was_fixed = self.is_fixed(a, b);
        let mut outer = Vec::new();
        for (u, v) in [(a, b), (b, a)] {
            if let Some(t) = self.left_of(u, v) {
                let c = self.apex(t, u, v);
                self.kill_tri(t);
                self.add_tri(u, id, c);
                self.add_tri(id, v, c);
                outer.push((v, c));
                outer.push((c, u));
            }
        }
        if was_fixed {
            self.set_fixed(a, b, false);
            self.set_fixed(a, id, true);
            self.set_fixed(id, b, true);
        }
        self.legalize(id, outer);
        id
    }

    /// Lawson flips around the new vertex `q`; each stacked edge `(u, v)` has `q` on its left.
    fn legalize(&mut self, q: usize, mut stack: Vec<(usize, usize)>) {
        while let Some((u, v)) = stack.pop() {
            if self.is_fixed(u, v) {
                continue;
            }
            let Some(t2) = self.left_of(v, u) else { continue };
            let d = self.apex(t2, u, v);
            if in_circle(self.p(u), self.p(v), self.p(q), self.p(d)) > 0.0 {
                self.flip(u, v);
                stack.push((u, d));
                stack.push((d, v));
            }
        }
    }

    /// Forces the segment `a b` into the triangulation (no vertex may lie on its interior).
    pub fn insert_segment(&mut self, a: usize, b: usize) -> Result<()> {
        if self.has_edge(a, b) {
            self.set_fixed(a, b, true);
            return Ok(());
        }
        let (pa, pb) = (self.p(a), self.p(b));
        let mut queue: std::collections::VecDeque<(usize, usize)> = self
            .live()
            .flat_map(|(_, v)| [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])])
            .filter(|&(u, v)| u < v && segments_cross_properly(pa, pb, self.p(u), self.p(v)))
            .collect();
        if queue.iter().any(|&(u, v)| self.is_fixed(u, v)) {
            return Err(Error::DegenerateGeometry("constrained segments cross".into()));
        }
        let mut created = Vec::new();
        let mut stalls = 0usize;
        while let Some((u, v)) = queue.pop_front() {
            let (Some(t1), Some(t2)) = (self.left_of(u, v), self.left_of(v, u)) else {
                return Err(Error::DegenerateGeometry("segment crosses the hull".into()));
            };
            let c = self.apex(t1, u, v);
            let d = self.apex(t2, u, v);
            if !segments_cross_properly(self.p(c), self.p(d), self.p(u), self.p(v)) {
                queue.push_back((u, v));
                stalls += 1;
                if stalls > 4 * queue.len() + 64 {
                    return Err(Error::DegenerateGeometry("segment recovery stalled".into()));
                }
                continue;
            }
            stalls = 0;
            let (c, d) = self.flip(u, v);
            if (c == a && d == b) || (c == b && d == a) {
                continue;
            }
            if segments_cross_properly(pa, pb, self.p(c), self.p(d)) {
                queue.push_back((c, d));
            } else {
                created.push((c, d));
            }
        }
        self.set_fixed(a, b, true);
        // Restore the Delaunay property among the new edges.
        let mut changed = true;
        while changed {
            changed = false;
            let mut i = 0;
            while i < created.len() {
                let (u, v) = created[i];
                i += 1;
                if self.is_fixed(u, v) {
                    continue;
                }
                let (Some(t1), Some(t2)) = (self.left_of(u, v), self.left_of(v, u)) else { continue };
                let c = self.apex(t1, u, v);
                let d = self.apex(t2, u, v);
                if in_circle(self.p(u), self.p(v), self.p(c), self.p(d)) > 0.0 {
                    let (c, d) = self.flip(u, v);
                    created.push((c, d));
                    changed = true;
                }
            }
        }
        Ok(())
    }
}
