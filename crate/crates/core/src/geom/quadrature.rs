use super::Point2;

/// Symmetric quadrature on triangles, weights normalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleQuadrature {
    pub order: u32,
    pub points: Vec<([f64; 3], f64)>,
}

impl TriangleQuadrature {
    /// Smallest tabulated rule exact for polynomials of degree `order` (supported up to 4).
    pub fn with_order(order: u32) -> Self {
        match order {
            0 | 1 => Self {
                order: 1,
                points: vec![([1.0 / 3.0; 3], 1.0)],
            },
            2 => {
                let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
                Self {
                    order: 2,
                    points: vec![([a, b, b], 1.0 / 3.0), ([b, a, b], 1.0 / 3.0), ([b, b, a], 1.0 / 3.0)],
                }
            }
            3 | 4 => {
                // Six-point degree-4 rule (Dunavant).
                let a1 = 0.445_948_490_915_964_886_318_329_253_883;
                let w1 = 0.223_381_589_678_011_465_944_355_779_101;
                let a2 = 0.091_576_213_509_770_743_459_571_463_402;
                let w2 = 0.109_951_743_655_321_867_388_977_554_233;
                let (b1, b2) = (1.0 - 2.0 * a1, 1.0 - 2.0 * a2);
                Self {
                    order: 4,
                    points: vec![
                        ([b1, a1, a1], w1),
                        ([a1, b1, a1], w1),
                        ([a1, a1, b1], w1),
                        ([b2, a2, a2], w2),
                        ([a2, b2, a2], w2),
                        ([a2, a2, b2], w2),
                    ],
                }
            }
            _ => panic!("no tabulated triangle rule of order {order}"),
        }
    }

    /// Integral of `f` over the triangle `a, b, c`.
    pub fn integrate(&self, a: Point2, b: Point2, c: Point2, f: impl Fn(Point2) -> f64) -> f64 {
        let area = 0.5 * (b - a).cross(c - a).abs();
        let sum: f64 = self
            .points
            .iter()
            .map(|&([l0, l1, l2], w)| {
                let p = Point2::new(l0 * a.x + l1 * b.x + l2 * c.x, l0 * a.y + l1 * b.y + l2 * c.y);
                w * f(p)
            })
            .sum();
        area * sum
    }
}
