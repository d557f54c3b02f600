use std::collections::HashSet;

use polybench::generators::{make_polygon, FamilyId, PolygonSpec};
use polybench::geom::{Point2, Polygon2};
use polybench::mesh::{CellTag, PolygonMesh};
use polybench::mesher::{
    build_canvas_mesh, build_hierarchy, build_triangle_mesh, is_shielded, mirror, place_in_canvas,
    triangle_min_angle, MAX_TRIANGLE_AREA, MIN_ANGLE_DEG,
};
use polybench::metrics::{aggregate_mesh_metrics, ElementSet, Metric};

fn poly(f: FamilyId, t: f64) -> Polygon2 {
    make_polygon(&PolygonSpec::new(f, t)).unwrap()
}

fn square() -> Polygon2 {
    Polygon2::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)])
        .unwrap()
}

fn corners(m: &PolygonMesh, c: usize) -> [Point2; 3] {
    [0, 1, 2].map(|k| m.vertices[m.cells[c][k]])
}

/// Non-incident triangles below the angle target, split into (shielded, unshielded).
fn angle_violations(m: &PolygonMesh) -> (usize, usize) {
    let incident: HashSet<usize> = m.incident_triangles().into_iter().collect();
    let outline = m.cell_points(0);
    let mut out = (0, 0);
    for c in 1..m.num_cells() {
        let [a, b, d] = corners(m, c);
        if incident.contains(&c) || triangle_min_angle(a, b, d) >= MIN_ANGLE_DEG.to_radians() - 1e-9 {
            continue;
        }
        if is_shielded(&outline, a, b, d) {
            out.0 += 1;
        } else {
            out.1 += 1;
        }
    }
    out
}

#[test]
fn square_polygon_gets_quality_triangles_everywhere_else() {
    let m = build_canvas_mesh(&square()).unwrap();
    m.validate().unwrap();
    assert_eq!(angle_violations(&m), (0, 0));
    for c in 1..m.num_cells() {
        let [a, b, d] = corners(&m, c);
        assert!(polybench::geom::predicates::orient(a, b, d) * 0.5 <= MAX_TRIANGLE_AREA);
    }
}

#[test]
fn central_polygon_is_placed_and_kept_intact() {
    let p = poly(FamilyId::Star, 0.4);
    let m = build_canvas_mesh(&p).unwrap();
    assert_eq!(m.tags[0], CellTag::CentralPolygon);
    assert_eq!(m.cell_points(0), place_in_canvas(&p).unwrap().vertices());
    let (lo, hi) = m.cell_polygon(0).bounding_box();
    assert!(((hi.x - lo.x).max(hi.y - lo.y) - 0.4).abs() < 1e-12);
    assert!((lo.midpoint(hi).dist(Point2::new(0.5, 0.5))) < 1e-12);
}

#[test]
fn every_dataset_mesh_is_valid_with_one_polygon_and_only_shielded_bad_angles() {
    let mut specs: Vec<PolygonSpec> = FamilyId::PARAMETRIC
        .into_iter()
        .flat_map(|f| (0..20).map(move |i| PolygonSpec::new(f, i as f64 / 19.0)))
        .collect();
    specs.extend((0..100).map(PolygonSpec::random));
    for s in specs {
        let m = build_canvas_mesh(&make_polygon(&s).unwrap()).unwrap();
        m.validate().unwrap();
        assert_eq!(m.central_cells().count(), 1, "{s:?}");
        let (_, unshielded) = angle_violations(&m);
        assert_eq!(unshielded, 0, "{s:?}");
    }
}

#[test]
fn sixty_gon_mesh_is_conforming() {
    let m = build_canvas_mesh(&poly(FamilyId::NSided, 1.0)).unwrap();
    assert_eq!(m.cells[0].len(), 60);
    assert!(m.num_cells() >= 61);
    m.validate().unwrap();
}

#[test]
fn meshing_is_deterministic() {
    let p = poly(FamilyId::Zeta, 0.8);
    assert_eq!(build_canvas_mesh(&p).unwrap(), build_canvas_mesh(&p).unwrap());
}

#[test]
fn triangle_only_mesh_is_valid() {
    let m = build_triangle_mesh().unwrap();
    m.validate().unwrap();
    assert!(m.tags.iter().all(|&t| t == CellTag::CanvasTriangle));
}

#[test]
fn mirror_quadruples_cells_and_halves_h() {
    let m = build_canvas_mesh(&poly(FamilyId::Comb, 0.3)).unwrap();
    let r = mirror(&m);
    r.validate().unwrap();
    assert_eq!(r.num_cells(), 4 * m.num_cells());
    assert_eq!(r.central_cells().count(), 4);
    assert!((r.mesh_size() - 0.5 * m.mesh_size()).abs() < 1e-12);
    // Seam vertices are shared: 4V minus the duplicated seam copies.
    let seam_x = m.vertices.iter().filter(|p| (p.x - 1.0).abs() <= 1e-12).count();
    let seam_y = m.vertices.iter().filter(|p| (p.y - 1.0).abs() <= 1e-12).count();
    assert_eq!(r.num_vertices(), 4 * m.num_vertices() - 2 * seam_x - 2 * seam_y + 1);
}

#[test]
fn mirror_preserves_scale_invariant_aggregates() {
    let m = build_canvas_mesh(&poly(FamilyId::ULike, 0.6)).unwrap();
    let r = mirror(&m);
    for set in [ElementSet::All, ElementSet::Polygons, ElementSet::PolygonsWithIncident] {
        let (a, b) = (aggregate_mesh_metrics(&m, set).unwrap(), aggregate_mesh_metrics(&r, set).unwrap());
        for metric in Metric::SCALE_INVARIANT {
            let (sa, sb) = (a.get(metric), b.get(metric));
            for (x, y) in [(sa.min, sb.min), (sa.avg, sb.avg), (sa.max, sb.max)] {
                assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{} {set:?}: {x} vs {y}", metric.abbr());
            }
        }
    }
}

#[test]
fn hierarchy_has_four_times_the_cells_per_level() {
    let m = build_canvas_mesh(&poly(FamilyId::Maze, 0.5)).unwrap();
    let c = m.num_cells();
    let h = build_hierarchy(m, 5).unwrap();
    let counts: Vec<usize> = h.levels.iter().map(PolygonMesh::num_cells).collect();
    assert_eq!(counts, vec![c, 4 * c, 16 * c, 64 * c, 256 * c]);
    for w in h.level_sizes.windows(2) {
        assert!((w[1] - 0.5 * w[0]).abs() < 1e-12);
    }
    h.levels[4].validate().unwrap();
}

#[test]
fn hierarchy_needs_a_level() {
    assert!(build_hierarchy(build_triangle_mesh().unwrap(), 0).is_err());
}
