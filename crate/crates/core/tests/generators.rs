use polybench::generators::{make_polygon, FamilyId, PolygonSpec};
use polybench::geom::is_simple;
use polybench::metrics::{compute_polygon_metrics, Metric};

use Metric::*;

/// Metrics each family is designed to stress.
fn stressed(f: FamilyId) -> &'static [Metric] {
    match f {
        FamilyId::Comb => &[IC, CR, AR, PAR, MA, MPD, NPD],
        FamilyId::Convexity => &[IC, CR, AR, KE, KAR, MA, MPD, NPD],
        FamilyId::Isotropy => &[IC, CR, AR, KE, KAR, SE, ER, MPD, NPD],
        FamilyId::Maze => &[IC, CR, AR, PAR, MA, SE, ER, MPD, NPD],
        FamilyId::NSided => &[SE, MPD, NPD],
        FamilyId::Star => &[AR, KAR, MA, MPD, NPD],
        FamilyId::ULike => &[IC, CR, AR, KE, KAR, PAR, MA, MPD, NPD],
        FamilyId::Zeta => &[IC, CR, AR, KE, KAR, PAR, MA, MPD, NPD],
        FamilyId::Random => &[],
    }
}

fn poly(f: FamilyId, t: f64) -> polybench::geom::Polygon2 {
    make_polygon(&PolygonSpec::new(f, t)).unwrap()
}

#[test]
fn every_family_is_simple_ccw_and_nondegenerate_on_fine_grid() {
    for f in FamilyId::PARAMETRIC {
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let p = poly(f, t);
            assert!(is_simple(p.vertices()), "{f} t={t}");
            assert!(p.signed_area() >= 1e-5, "{f} t={t} area {}", p.signed_area());
            let (lo, hi) = p.bounding_box();
            assert!(lo.x >= 0.0 && lo.y >= 0.0 && hi.x <= 1.0 && hi.y <= 1.0, "{f} t={t}");
        }
    }
}

#[test]
fn stressed_metrics_degrade_monotonically() {
    for f in FamilyId::PARAMETRIC {
        let records: Vec<_> = (0..=10)
            .map(|i| compute_polygon_metrics(&poly(f, i as f64 / 10.0)).unwrap())
            .collect();
        for &m in stressed(f) {
            for (i, w) in records.windows(2).enumerate() {
                let (a, b) = (w[0].get(m), w[1].get(m));
                assert!(
                    b <= a + 1e-9 * a.abs().max(1e-12),
                    "{f}: {} rises from {a} to {b} between t={} and t={}",
                    m.abbr(),
                    i as f64 / 10.0,
                    (i + 1) as f64 / 10.0
                );
            }
        }
        // Point distances are stressed by every family.
        for m in [MPD, NPD] {
            assert!(records[10].get(m) < 0.5 * records[0].get(m), "{f}: {} barely changes", m.abbr());
        }
    }
}

#[test]
fn baselines_are_benign() {
    for f in FamilyId::PARAMETRIC {
        let m = compute_polygon_metrics(&poly(f, 0.0)).unwrap();
        assert!(m.cr >= 0.3, "{f}: CR {}", m.cr);
        assert!(m.kar >= 0.75, "{f}: KAR {}", m.kar);
        assert!(m.ma >= 30f64.to_radians() - 1e-12, "{f}: MA {}", m.ma.to_degrees());
    }
}

#[test]
fn vertices_move_continuously_in_t() {
    let dt = 1e-3;
    for f in FamilyId::PARAMETRIC {
        if f == FamilyId::NSided {
            continue;
        }
        let mut t = 0.0;
        while t + dt <= 1.0 {
            let (a, b) = (poly(f, t), poly(f, t + dt));
            assert_eq!(a.len(), b.len());
            let worst = a.vertices().iter().zip(b.vertices()).map(|(p, q)| p.dist(*q)).fold(0.0, f64::max);
            assert!(worst <= 4.0 * dt, "{f} t={t}: displacement {worst}");
            t += dt;
        }
    }
}

#[test]
fn generation_is_deterministic() {
    for f in FamilyId::PARAMETRIC {
        assert_eq!(poly(f, 0.37).vertices(), poly(f, 0.37).vertices());
    }
    let a = make_polygon(&PolygonSpec::random(11)).unwrap();
    let b = make_polygon(&PolygonSpec::random(11)).unwrap();
    assert_eq!(a.vertices(), b.vertices());
}

#[test]
fn random_polygons_span_convex_to_non_star_shaped() {
    let kars: Vec<f64> = (0..100)
        .map(|seed| {
            let p = make_polygon(&PolygonSpec::random(seed)).unwrap();
            assert!(is_simple(p.vertices()));
            compute_polygon_metrics(&p).unwrap().kar
        })
        .collect();
    assert!(kars.iter().any(|&k| k == 1.0), "no convex random polygon");
    assert!(kars.iter().any(|&k| k < 0.5));
}
