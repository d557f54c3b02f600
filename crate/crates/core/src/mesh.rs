//! Mixed polygon/triangle tessellations of the unit square and their file formats.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point2, Polygon2};

/// Tolerance used to decide whether a vertex lies on the unit-square boundary.
pub const BOUNDARY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellTag {
    CentralPolygon,
    CanvasTriangle,
}

impl CellTag {
    pub fn letter(self) -> char {
        match self {
            CellTag::CentralPolygon => 'P',
            CellTag::CanvasTriangle => 'T',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonMesh {
    pub vertices: Vec<Point2>,
    /// Counter-clockwise vertex-index loops.
    pub cells: Vec<Vec<usize>>,
    pub tags: Vec<CellTag>,
    pub boundary: Vec<bool>,
}

pub fn on_unit_square_boundary(p: Point2) -> bool {
    p.x <= BOUNDARY_EPS || p.x >= 1.0 - BOUNDARY_EPS || p.y <= BOUNDARY_EPS || p.y >= 1.0 - BOUNDARY_EPS
}

impl PolygonMesh {
    /// Builds a mesh and derives the boundary flags from the coordinates.
    pub fn new(vertices: Vec<Point2>, cells: Vec<Vec<usize>>, tags: Vec<CellTag>) -> Self {
        let boundary = vertices.iter().map(|&p| on_unit_square_boundary(p)).collect();
        Self { vertices, cells, tags, boundary }
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn cell_points(&self, c: usize) -> Vec<Point2> {
        self.cells[c].iter().map(|&i| self.vertices[i]).collect()
    }

    /// Cell as a polygon; cells are valid by construction, so no re-validation.
    pub fn cell_polygon(&self, c: usize) -> Polygon2 {
        Polygon2::from_ccw_unchecked(self.cell_points(c))
    }

    pub fn central_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells.len()).filter(|&c| self.tags[c] == CellTag::CentralPolygon)
    }

    /// Triangles sharing at least one vertex with a central polygon.
    pub fn incident_triangles(&self) -> Vec<usize> {
        let mut on_polygon = vec![false; self.vertices.len()];
        for c in self.central_cells() {
            for &v in &self.cells[c] {
                on_polygon[v] = true;
            }
        }
        (0..self.cells.len())
            .filter(|&c| self.tags[c] == CellTag::CanvasTriangle && self.cells[c].iter().any(|&v| on_polygon[v]))
            .collect()
    }

    pub fn total_area(&self) -> f64 {
        (0..self.cells.len()).map(|c| self.cell_polygon(c).signed_area()).sum()
    }

    /// Mesh size: the largest cell diameter.
    pub fn mesh_size(&self) -> f64 {
        (0..self.cells.len()).map(|c| self.cell_polygon(c).diameter()).fold(0.0, f64::max)
    }

    /// Number of cells using each undirected edge.
    pub fn edge_use_counts(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::new();
        for cell in &self.cells {
            let n = cell.len();
            for i in 0..n {
                let (a, b) = (cell[i], cell[(i + 1) % n]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Checks indices, cell validity, area conservation, conformity and boundary flags.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPolygon(msg));
        if self.cells.len() != self.tags.len() || self.boundary.len() != self.vertices.len() {
            return bad("mesh arrays have inconsistent lengths".into());
        }
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.iter().any(|&i| i >= self.vertices.len()) {
                return bad(format!("cell {c} has an out-of-range vertex index"));
            }
            let p = Polygon2::new(self.cell_points(c)).map_err(|e| Error::InvalidPolygon(format!("cell {c}: {e}")))?;
            if p.vertices() != self.cell_points(c).as_slice() {
                return bad(format!("cell {c} is not counter-clockwise"));
            }
        }
        let area = self.total_area();
        if (area - 1.0).abs() > 1e-9 {
            return bad(format!("cells cover area {area}, expected 1"));
        }
        for ((a, b), n) in self.edge_use_counts() {
            let on_boundary = self.boundary[a]
                && self.boundary[b]
                && on_unit_square_boundary(self.vertices[a].midpoint(self.vertices[b]));
            let expected = if on_boundary { 1 } else { 2 };
            if n != expected {
                return bad(format!("edge ({a}, {b}) used by {n} cells, expected {expected}"));
            }
        }
        for (i, &p) in self.vertices.iter().enumerate() {
            if self.boundary[i] != on_unit_square_boundary(p) {
                return bad(format!("vertex {i} has a wrong boundary flag"));
            }
        }
        Ok(())
    }

    /// OFF text: `OFF`, `nv nf 0`, vertex lines `x y 0.0`, face lines `k i1 ... ik`.
    pub fn to_off(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "OFF\n{} {} 0", self.vertices.len(), self.cells.len());
        for v in &self.vertices {
            let _ = writeln!(s, "{:.16e} {:.16e} 0.0", v.x, v.y);
        }
        for cell in &self.cells {
            let _ = write!(s, "{}", cell.len());
            for i in cell {
                let _ = write!(s, " {i}");
            }
            s.push('\n');
        }
        s
    }

    /// Sidecar tag file: one `P` or `T` per cell.
    pub fn tags_text(&self) -> String {
        self.tags.iter().map(|t| format!("{}\n", t.letter())).collect()
    }

    pub fn from_off(off: &str, tags: Option<&str>) -> Result<Self> {
        let mut tokens = off.split_whitespace();
        let mut next = |what: &str| tokens.next().ok_or_else(|| Error::Parse(format!("OFF: missing {what}")));
        if next("header")? != "OFF" {
            return Err(Error::Parse("OFF: bad header".into()));
        }
        let num = |t: &str| t.parse::<usize>().map_err(|e| Error::Parse(format!("OFF: {e}")));
        let real = |t: &str| t.parse::<f64>().map_err(|e| Error::Parse(format!("OFF: {e}")));
        let nv = num(next("vertex count")?)?;
        let nf = num(next("face count")?)?;
        let _ = next("edge count")?;
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let x = real(next("x")?)?;
            let y = real(next("y")?)?;
            let _ = real(next("z")?)?;
            vertices.push(Point2::new(x, y));
        }
        let mut cells = Vec::with_capacity(nf);
        for _ in 0..nf {
            let k = num(next("face size")?)?;
            let cell = (0..k).map(|_| next("face index").and_then(num)).collect::<Result<Vec<_>>>()?;
            cells.push(cell);
        }
        let tags = match tags {
            Some(text) => text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| match l.trim() {
                    "P" => Ok(CellTag::CentralPolygon),
                    "T" => Ok(CellTag::CanvasTriangle),
                    other => Err(Error::Parse(format!("unknown cell tag {other:?}"))),
                })
                .collect::<Result<Vec<_>>>()?,
            None => cells
                .iter()
                .map(|c| if c.len() == 3 { CellTag::CanvasTriangle } else { CellTag::CentralPolygon })
                .collect(),
        };
        if tags.len() != cells.len() {
            return Err(Error::Parse(format!("{} tags for {} cells", tags.len(), cells.len())));
        }
        Ok(Self::new(vertices, cells, tags))
    }
}
