//! Planar geometry kernel: points, simple polygons, predicates and quadrature.
//!
//! Every other module builds on these types. All operations are pure.

mod point;
mod polygon;
pub mod predicates;
mod quadrature;

pub use point::{circumcenter, Circle, Point2};
pub use polygon::{is_simple, point_in_polygon, Location, Polygon2};
pub use quadrature::TriangleQuadrature;

/// Boundary classification tolerance for [`point_in_polygon`], in canvas units.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Polygons with less area than this are treated as degenerate.
pub const MIN_AREA: f64 = 1e-14;
