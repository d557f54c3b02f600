use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn dist_sq(self, other: Self) -> f64 {
        let d = self - other;
        d.dot(d)
    }

    pub fn midpoint(self, other: Self) -> Self {
        Self::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn lerp(self, other: Self, t: f64) -> Self {
        self + (other - self) * t
    }

    /// Distance from `self` to the closed segment `[a, b]`.
    pub fn dist_to_segment(self, a: Self, b: Self) -> f64 {
        let ab = b - a;
        let len_sq = ab.dot(ab);
        if len_sq == 0.0 {
            return self.dist(a);
        }
        let t = ((self - a).dot(ab) / len_sq).clamp(0.0, 1.0);
        self.dist(a + ab * t)
    }

    pub(crate) fn coord(self) -> robust::Coord<f64> {
        robust::Coord { x: self.x, y: self.y }
    }
}

impl Add for Point2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Self {
        debug_assert!(radius.is_finite() && radius >= 0.0);
        Self { center, radius }
    }

    /// Smallest circle through two points.
    pub fn from_diameter(a: Point2, b: Point2) -> Self {
        Self::new(a.midpoint(b), 0.5 * a.dist(b))
    }

    /// Circle through three points, `None` if they are collinear.
    pub fn circumcircle(a: Point2, b: Point2, c: Point2) -> Option<Self> {
        let center = circumcenter(a, b, c)?;
        // Largest of the three distances so all three points are covered
        // despite rounding in the center.
        let r = center.dist(a).max(center.dist(b)).max(center.dist(c));
        Some(Self::new(center, r))
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.center.dist(p) <= self.radius + tol
    }
}

/// Circumcenter of a triangle, computed relative to `a` for accuracy.
pub fn circumcenter(a: Point2, b: Point2, c: Point2) -> Option<Point2> {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let ab2 = ab.dot(ab);
    let ac2 = ac.dot(ac);
    let ux = (ac.y * ab2 - ab.y * ac2) / d;
    let uy = (ab.x * ac2 - ac.x * ab2) / d;
    let center = Point2::new(a.x + ux, a.y + uy);
    center.is_finite().then_some(center)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circumcircle_of_right_triangle_is_hypotenuse_circle() {
        let c = Circle::circumcircle(Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(0.0, 2.0))
            .unwrap();
        assert!((c.center.x - 1.0).abs() < 1e-15);
        assert!((c.center.y - 1.0).abs() < 1e-15);
        assert!((c.radius - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn collinear_points_have_no_circumcircle() {
        let p = |x: f64| Point2::new(x, 2.0 * x);
        assert!(Circle::circumcircle(p(0.0), p(1.0), p(3.0)).is_none());
    }

    #[test]
    fn segment_distance_clamps_to_endpoints() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        assert_eq!(Point2::new(0.5, 2.0).dist_to_segment(a, b), 2.0);
        assert_eq!(Point2::new(4.0, 4.0).dist_to_segment(a, b), 5.0);
    }
}
