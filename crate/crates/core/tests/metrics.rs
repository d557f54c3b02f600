use std::f64::consts::TAU;

use polybench::generators::make_random_polygon;
use polybench::geom::{Point2, Polygon2};
use polybench::metrics::{compute_polygon_metrics, inscribed_circle, min_enclosing_circle, Metric};
use proptest::prelude::*;

fn similarity(p: &Polygon2, s: f64, theta: f64, shift: Point2) -> Polygon2 {
    let (c, si) = (theta.cos(), theta.sin());
    p.map(|q| Point2::new(s * (c * q.x - si * q.y) + shift.x, s * (si * q.x + c * q.y) + shift.y)).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metrics_follow_similarity_transforms(n in 6usize..16, seed in any::<u64>(), s in 0.05..20.0f64, theta in 0.0..TAU, dx in -3.0..3.0f64, dy in -3.0..3.0f64) {
        let p = make_random_polygon(n, seed).unwrap();
        let q = similarity(&p, s, theta, Point2::new(dx, dy));
        let (a, b) = (compute_polygon_metrics(&p).unwrap(), compute_polygon_metrics(&q).unwrap());
        for m in Metric::SCALE_INVARIANT {
            prop_assert!(close(a.get(m), b.get(m), 1e-9) || (a.get(m) == 0.0 && b.get(m).abs() < 1e-12), "{} {} {}", m.abbr(), a.get(m), b.get(m));
        }
        for m in [Metric::IC, Metric::CC, Metric::SE, Metric::MPD] {
            prop_assert!(close(a.get(m) * s, b.get(m), 1e-9), "{}", m.abbr());
        }
        prop_assert!(close(a.ar * s * s, b.ar, 1e-9));
        prop_assert!((a.ke * s * s - b.ke).abs() <= 1e-9 * b.ar);
    }

    #[test]
    fn metric_ranges_hold(n in 6usize..25, seed in any::<u64>()) {
        let p = make_random_polygon(n, seed).unwrap();
        let r = compute_polygon_metrics(&p).unwrap();
        prop_assert!(r.ic <= r.cc && r.ke <= r.ar * (1.0 + 1e-12) && r.mpd <= r.se * (1.0 + 1e-12));
        prop_assert!(r.cr > 0.0 && r.cr < 1.0);
        prop_assert!((0.0..=1.0).contains(&r.kar));
        prop_assert!(r.er > 0.0 && r.er <= 1.0 && r.npd > 0.0 && r.npd <= 1.0);
    }

    #[test]
    fn circles_contain_what_they_should(n in 6usize..25, seed in any::<u64>()) {
        let p = make_random_polygon(n, seed).unwrap();
        let cc = min_enclosing_circle(&p);
        prop_assert!(p.vertices().iter().all(|v| v.dist(cc.center) <= cc.radius + 1e-12));
        let ic = inscribed_circle(&p).unwrap();
        let clearance = p.edges().map(|(a, b)| ic.center.dist_to_segment(a, b)).fold(f64::INFINITY, f64::min);
        prop_assert!((clearance - ic.radius).abs() < 1e-9 * ic.radius.max(1e-12));
        prop_assert!(ic.radius <= cc.radius);
    }
}
