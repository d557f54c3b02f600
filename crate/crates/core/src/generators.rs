//! Parametric polygon families and random simple polygons.
//!
//! Every family maps `t ∈ [0, 1]` to a CCW polygon inside `[0, 1]²`. At `t = 0` the
//! polygon is benign (convex or nearly so); increasing `t` drives the metrics listed
//! for the family toward their bad end.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geom::predicates::segments_intersect;
use crate::geom::{Point2, Polygon2};
use crate::rng::DetRng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyId {
    Comb,
    Convexity,
    Isotropy,
    Maze,
    NSided,
    Star,
    ULike,
    Zeta,
    Random,
}

impl FamilyId {
    pub const PARAMETRIC: [FamilyId; 8] = [
        FamilyId::Comb,
        FamilyId::Convexity,
        FamilyId::Isotropy,
        FamilyId::Maze,
        FamilyId::NSided,
        FamilyId::Star,
        FamilyId::ULike,
        FamilyId::Zeta,
    ];

    pub const ALL: [FamilyId; 9] = [
        FamilyId::Comb,
        FamilyId::Convexity,
        FamilyId::Isotropy,
        FamilyId::Maze,
        FamilyId::NSided,
        FamilyId::Star,
        FamilyId::ULike,
        FamilyId::Zeta,
        FamilyId::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Comb => "comb",
            FamilyId::Convexity => "convexity",
            FamilyId::Isotropy => "isotropy",
            FamilyId::Maze => "maze",
            FamilyId::NSided => "nsided",
            FamilyId::Star => "star",
            FamilyId::ULike => "ulike",
            FamilyId::Zeta => "zeta",
            FamilyId::Random => "random",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolygonSpec {
    pub family: FamilyId,
    pub t: f64,
    /// Only read for [`FamilyId::Random`].
    pub seed: u64,
}

impl PolygonSpec {
    pub fn new(family: FamilyId, t: f64) -> Self {
        Self { family, t, seed: 0 }
    }

    pub fn random(seed: u64) -> Self {
        Self { family: FamilyId::Random, t: 0.0, seed }
    }
}

/// Thickness factor of the collapsing families: 1 at `t = 0`, cubic decay, floored.
pub fn shrink(t: f64) -> f64 {
    (1.0 - t).powi(3).max(SHRINK_FLOOR)
}

pub const SHRINK_FLOOR: f64 = 1e-3;

pub fn make_polygon(spec: &PolygonSpec) -> Result<Polygon2> {
    let t = spec.t;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("t = {t} outside [0, 1]")));
    }
    let pts = match spec.family {
        FamilyId::Comb => comb(t),
        FamilyId::Convexity => convexity(t),
        FamilyId::Isotropy => isotropy(t),
        FamilyId::Maze => maze(t),
        FamilyId::NSided => nsided(t),
        FamilyId::Star => star(t),
        FamilyId::ULike => ulike(t),
        FamilyId::Zeta => zeta(t),
        FamilyId::Random => {
            let n = 6 + DetRng::new(spec.seed ^ 0xA5A5_5A5A).below(35);
            return make_random_polygon(n, spec.seed);
        }
    };
    Polygon2::new(pts).map_err(|e| Error::GenerationFailed(format!("{} at t = {t}: {e}", spec.family)))
}

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

/// Rectangle `[0, 0.88] × [0, 1]` cut by three V valleys that deepen while the four teeth
/// between them thin out; the two inner teeth lean right.
fn comb(t: f64) -> Vec<Point2> {
    const W: f64 = 0.88;
    let yb = 0.98 - 0.58 * t;
    let tip = 0.07 - 0.06 * t;
    let shear = 0.2 * t;
    let mut v = vec![p(0.0, 0.0), p(W, 0.0), p(W, 1.0), p(W - tip, 1.0)];
    for i in (1..3).rev() {
        v.push(p(W * (i + 1) as f64 / 4.0, yb));
        let c = W * (i as f64 + 0.5) / 4.0 + shear;
        v.push(p(c + 0.5 * tip, 1.0));
        v.push(p(c - 0.5 * tip, 1.0));
    }
    v.push(p(W / 4.0, yb));
    v.push(p(tip, 1.0));
    v.push(p(0.0, 1.0));
    v
}

/// Diamond whose left vertex slides right through the opposite diagonal, giving a dart.
fn convexity(t: f64) -> Vec<Point2> {
    let x = 1.0 - shrink(t);
    vec![p(0.5, 0.0), p(1.0, 0.5), p(0.5, 1.0), p(x, 0.5)]
}

/// Regular hexagon flattened vertically by `shrink(t)`.
fn isotropy(t: f64) -> Vec<Point2> {
    let s = shrink(t);
    (0..6)
        .map(|k| {
            let a = k as f64 * PI / 3.0;
            p(0.5 + 0.5 * a.cos(), 0.5 + 0.5 * s * a.sin())
        })
        .collect()
}

/// Serpentine: a wide shallow trapezoidal slot from the top and one from the bottom
/// deepen and square off until three corridors of width `0.1·shrink(t)` remain.
fn maze(t: f64) -> Vec<Point2> {
    let s = shrink(t);
    let w = 0.1 * s;
    let depth = (1.0 - w) * (1.0 - 0.97 * s);
    let half_mouth = 0.25 * (1.0 - 3.0 * w);
    let half_floor = half_mouth * (1.0 - 0.7143 * s);
    let (ca, cb) = (0.25 * (1.0 + w), 0.25 * (3.0 - w));
    vec![
        p(0.0, 0.0),
        p(cb - half_mouth, 0.0),
        p(cb - half_floor, depth),
        p(cb + half_floor, depth),
        p(cb + half_mouth, 0.0),
        p(1.0, 0.0),
        p(1.0, 1.0),
        p(ca + half_mouth, 1.0),
        p(ca + half_floor, 1.0 - depth),
        p(ca - half_floor, 1.0 - depth),
        p(ca - half_mouth, 1.0),
        p(0.0, 1.0),
    ]
}

/// Regular `3 + round(57 t)`-gon inscribed in the circle of radius 0.5 about the center.
fn nsided(t: f64) -> Vec<Point2> {
    let n = 3 + (57.0 * t).round() as usize;
    regular(n, 0.5)
}

pub(crate) fn regular(n: usize, r: f64) -> Vec<Point2> {
    let start = -0.5 * PI + PI / n as f64;
    (0..n)
        .map(|k| {
            let a = start + 2.0 * PI * k as f64 / n as f64;
            p(0.5 + r * a.cos(), 0.5 + r * a.sin())
        })
        .collect()
}

/// Ten spikes with truncated tips: a regular 30-gon at `t = 0`; the inner radius drops
/// to 0.05 while each tip closes from 12° to 2° of arc.
fn star(t: f64) -> Vec<Point2> {
    let inner = 0.5 * (1.0 - 0.9 * t);
    let half_tip = (PI / 30.0) * (1.0 - t) + (PI / 180.0) * t;
    let mut v = Vec::with_capacity(30);
    for k in 0..10 {
        let axis = 0.5 * PI + PI * k as f64 / 5.0;
        for (a, r) in [(axis - half_tip, 0.5), (axis + half_tip, 0.5), (axis + PI / 10.0, inner)] {
            v.push(p(0.5 + r * a.cos(), 0.5 + r * a.sin()));
        }
    }
    v
}

/// Square with a trapezoidal notch from the top that grows into a U with thin walls.
fn ulike(t: f64) -> Vec<Point2> {
    let s = shrink(t);
    let a = 0.15 * s;
    let b = (0.5 - a) * (1.0 - 0.7 * s);
    let yb = a + 0.77 * s.powf(4.0 / 3.0);
    vec![
        p(0.0, 0.0),
        p(1.0, 0.0),
        p(1.0, 1.0),
        p(1.0 - a, 1.0),
        p(0.5 + b, yb),
        p(0.5 - b, yb),
        p(a, 1.0),
        p(0.0, 1.0),
    ]
}

/// Square with two point-symmetric wedge notches (from the right, low; from the left,
/// high) that open into a Z of bars of thickness `0.2·shrink(t)` and a thin diagonal band.
fn zeta(t: f64) -> Vec<Point2> {
    let s = shrink(t);
    let tau = 0.2 * s;
    let apex = p(0.95 * s, tau + (0.5 - tau) * s);
    vec![
        p(0.0, 0.0),
        p(1.0, 0.0),
        p(1.0, tau),
        apex,
        p(1.0, 1.0 - tau),
        p(1.0, 1.0),
        p(0.0, 1.0),
        p(0.0, 1.0 - tau),
        p(1.0 - apex.x, 1.0 - apex.y),
        p(0.0, tau),
    ]
}

const MAX_SWAPS: usize = 100_000;
const MAX_RETRIES: u64 = 10;

/// Random simple polygon: `n` uniform points in `[0, 1]²` joined in draw order, then
/// untangled by randomized 2-opt moves.
pub fn make_random_polygon(n: usize, seed: u64) -> Result<Polygon2> {
    if !(6..=40).contains(&n) {
        return Err(Error::InvalidParameter(format!("random polygon size {n} outside 6..=40")));
    }
    for attempt in 0..MAX_RETRIES {
        let mut rng = DetRng::new(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let mut pts: Vec<Point2> = (0..n).map(|_| p(rng.uniform(), rng.uniform())).collect();
        if untangle(&mut pts, &mut rng)
            && let Ok(poly) = Polygon2::new(pts)
        {
            return Ok(poly);
        }
    }
    Err(Error::GenerationFailed(format!(
        "2-opt did not produce a simple {n}-gon for seed {seed} within {MAX_RETRIES} attempts"
    )))
}

fn crossing_pairs(pts: &[Point2]) -> Vec<(usize, usize)> {
    let n = pts.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                out.push((i, j));
            }
        }
    }
    out
}

fn untangle(pts: &mut [Point2], rng: &mut DetRng) -> bool {
    for _ in 0..MAX_SWAPS {
        let pairs = crossing_pairs(pts);
        if pairs.is_empty() {
            return true;
        }
        let (i, j) = pairs[rng.below(pairs.len())];
        pts[i + 1..=j].reverse();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{compute_polygon_metrics, kernel_area};

    #[test]
    fn names_round_trip() {
        for f in FamilyId::ALL {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
        }
        assert!("hexagon".parse::<FamilyId>().is_err());
    }

    #[test]
    fn rejects_t_outside_unit_interval() {
        for t in [-0.1, 1.5, f64::NAN] {
            assert!(matches!(
                make_polygon(&PolygonSpec::new(FamilyId::Star, t)),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn nsided_baseline_is_inscribed_triangle() {
        let tri = make_polygon(&PolygonSpec::new(FamilyId::NSided, 0.0)).unwrap();
        assert_eq!(tri.len(), 3);
        for v in tri.vertices() {
            assert!((v.dist(Point2::new(0.5, 0.5)) - 0.5).abs() < 1e-15);
        }
        assert_eq!(make_polygon(&PolygonSpec::new(FamilyId::NSided, 1.0)).unwrap().len(), 60);
    }

    #[test]
    fn isotropy_area_tracks_shrink_factor() {
        let a0 = make_polygon(&PolygonSpec::new(FamilyId::Isotropy, 0.0)).unwrap().signed_area();
        // Closed form of the regular hexagon with circumradius 1/2.
        assert!((a0 - 3.0 * 3f64.sqrt() / 8.0).abs() < 1e-15);
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            let a = make_polygon(&PolygonSpec::new(FamilyId::Isotropy, t)).unwrap().signed_area();
            assert!((a / a0 - shrink(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn zeta_loses_its_kernel() {
        let z = make_polygon(&PolygonSpec::new(FamilyId::Zeta, 0.9)).unwrap();
        assert_eq!(kernel_area(&z), 0.0);
    }

    #[test]
    fn star_midway_is_strictly_star_shaped() {
        let m = compute_polygon_metrics(&make_polygon(&PolygonSpec::new(FamilyId::Star, 0.5)).unwrap()).unwrap();
        assert!(m.kar > 0.0 && m.kar < 1.0);
    }

    #[test]
    fn random_polygons_are_deterministic_and_simple() {
        let a = make_random_polygon(6, 1).unwrap();
        let b = make_random_polygon(6, 1).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        let c = make_random_polygon(20, 7).unwrap();
        assert_eq!(c.len(), 20);
        assert!(crate::geom::is_simple(c.vertices()));
        assert!(make_random_polygon(5, 0).is_err());
        assert!(make_random_polygon(41, 0).is_err());
    }
}
