//! The twelve per-polygon quality metrics and their per-mesh aggregates.
//!
//! | Metric | Meaning                                   | Scale invariant | Better |
//! |--------|-------------------------------------------|-----------------|--------|
//! | IC     | inscribed circle radius                   | no              |        |
//! | CC     | minimum enclosing circle radius           | no              |        |
//! | CR     | IC / CC                                   | yes             | higher |
//! | AR     | area                                      | no              |        |
//! | KE     | kernel area                               | no              |        |
//! | KAR    | KE / AR                                   | yes             | higher |
//! | PAR    | 2π·AR / perimeter²                        | yes             | higher |
//! | MA     | minimum interior angle (radians)          | yes             | higher |
//! | SE     | shortest edge                             | no              |        |
//! | ER     | shortest / longest edge                   | yes             | higher |
//! | MPD    | minimum vertex-to-vertex distance         | no              |        |
//! | NPD    | MPD / (2·CC)                              | yes             | higher |

mod aggregate;
mod enclosing;
mod incircle;
mod kernel;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::Polygon2;

pub use aggregate::{aggregate_mesh_metrics, cell_metrics, ElementSet, MeshMetricsRecord, MetricStats};
pub use enclosing::{enclosing_circle_of_points, min_enclosing_circle};
pub use incircle::inscribed_circle;
pub use kernel::{kernel, kernel_area};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    IC,
    CC,
    CR,
    AR,
    KE,
    KAR,
    PAR,
    MA,
    SE,
    ER,
    MPD,
    NPD,
}

/// Which end of a metric's range is the good one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    HigherIsBetter,
    LowerIsBetter,
    /// Size-like metrics; smaller values are treated as the degenerate end.
    Unranked,
}

impl Metric {
    pub const ALL: [Metric; 12] = [
        Metric::IC,
        Metric::CC,
        Metric::CR,
        Metric::AR,
        Metric::KE,
        Metric::KAR,
        Metric::PAR,
        Metric::MA,
        Metric::SE,
        Metric::ER,
        Metric::MPD,
        Metric::NPD,
    ];

    /// The six metrics used in the correlation studies.
    pub const SCALE_INVARIANT: [Metric; 6] =
        [Metric::CR, Metric::KAR, Metric::PAR, Metric::MA, Metric::ER, Metric::NPD];

    pub fn abbr(self) -> &'static str {
        match self {
            Metric::IC => "IC",
            Metric::CC => "CC",
            Metric::CR => "CR",
            Metric::AR => "AR",
            Metric::KE => "KE",
            Metric::KAR => "KAR",
            Metric::PAR => "PAR",
            Metric::MA => "MA",
            Metric::SE => "SE",
            Metric::ER => "ER",
            Metric::MPD => "MPD",
            Metric::NPD => "NPD",
        }
    }

    pub fn from_abbr(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.abbr().eq_ignore_ascii_case(s))
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn trend(self) -> Trend {
        match self {
            Metric::CR | Metric::KAR | Metric::PAR | Metric::MA | Metric::ER | Metric::NPD => {
                Trend::HigherIsBetter
            }
            _ => Trend::Unranked,
        }
    }

    pub fn is_scale_invariant(self) -> bool {
        Self::SCALE_INVARIANT.contains(&self)
    }

    /// The worse of two values of this metric.
    pub fn worse(self, a: f64, b: f64) -> f64 {
        match self.trend() {
            Trend::LowerIsBetter => a.max(b),
            Trend::HigherIsBetter | Trend::Unranked => a.min(b),
        }
    }
}

/// The twelve metrics of one polygon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub ic: f64,
    pub cc: f64,
    pub cr: f64,
    pub ar: f64,
    pub ke: f64,
    pub kar: f64,
    pub par: f64,
    pub ma: f64,
    pub se: f64,
    pub er: f64,
    pub mpd: f64,
    pub npd: f64,
}

impl MetricsRecord {
    pub fn values(&self) -> [f64; 12] {
        [
            self.ic, self.cc, self.cr, self.ar, self.ke, self.kar, self.par, self.ma, self.se, self.er,
            self.mpd, self.npd,
        ]
    }

    pub fn from_values(v: [f64; 12]) -> Self {
        Self {
            ic: v[0],
            cc: v[1],
            cr: v[2],
            ar: v[3],
            ke: v[4],
            kar: v[5],
            par: v[6],
            ma: v[7],
            se: v[8],
            er: v[9],
            mpd: v[10],
            npd: v[11],
        }
    }

    pub fn get(&self, m: Metric) -> f64 {
        self.values()[m.index()]
    }
}

/// Minimum distance between any two vertices.
pub fn min_point_distance(p: &Polygon2) -> f64 {
    let v = p.vertices();
    let mut best = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.min(v[i].dist_sq(v[j]));
        }
    }
    best.sqrt()
}

/// Evaluates all twelve metrics.
pub fn compute_polygon_metrics(p: &Polygon2) -> Result<MetricsRecord> {
    let ic = inscribed_circle(p)?.radius;
    let cc = min_enclosing_circle(p).radius;
    let ar = p.signed_area();
    let ke = kernel_area(p);
    let perimeter = p.perimeter();
    let ma = p.interior_angles().into_iter().fold(2.0 * PI, f64::min);
    let edges = p.edge_lengths();
    let se = edges.iter().copied().fold(f64::INFINITY, f64::min);
    let le = edges.iter().copied().fold(0.0, f64::max);
    let mpd = min_point_distance(p);
    Ok(MetricsRecord {
        ic,
        cc,
        cr: ic / cc,
        ar,
        ke,
        kar: (ke / ar).min(1.0),
        par: 2.0 * PI * ar / (perimeter * perimeter),
        ma,
        se,
        er: se / le,
        mpd,
        npd: mpd / (2.0 * cc),
    })
}
