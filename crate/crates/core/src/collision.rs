//! Time-to-collision of the vehicle against every obstacle.
//!
//! Everything is expressed in the vehicle frame moving with the vehicle, so
//! obstacles carry relative velocities and the vehicle stands still.

use serde::{Deserialize, Serialize};

use crate::geometry::{Obstacle, Point2, SegmentEdge, VehicleFootprint};
use crate::scenario::{NamedObstacle, Scenario};
use crate::td::{td_edge, td_obstacle, TdValue};

#[derive(Debug, Clone, PartialEq)]
pub struct RelativeScene {
    pub length: f64,
    pub width: f64,
    pub border_points: Vec<Point2>,
    pub obstacles: Vec<NamedObstacle>,
}

impl RelativeScene {
    /// Footprint corners, counter-clockwise.
    pub fn corners(&self) -> [Point2; 4] {
        let (hl, hw) = (self.length / 2.0, self.width / 2.0);
        [
            Point2::new(-hl, -hw),
            Point2::new(hl, -hw),
            Point2::new(hl, hw),
            Point2::new(-hl, hw),
        ]
    }
}

/// How the vehicle border is probed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TtcMethod {
    /// TD of sampled border points only. Can miss an obstacle vertex that
    /// strikes an edge between two samples.
    BorderSamples,
    /// Border samples plus the TD of each obstacle vertex (or circle support
    /// point) against the vehicle edges, which closes that gap.
    #[default]
    WithVertexSweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstacleTtc {
    pub id: String,
    pub ttc: TdValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TtcReport {
    pub ttc: TdValue,
    /// Contact location on the vehicle border, vehicle frame. `None` when
    /// no collision is predicted.
    pub critical_point: Option<Point2>,
    pub per_obstacle: Vec<ObstacleTtc>,
}

/// Default border spacing: a quarter of the shorter footprint side.
pub fn default_border_spacing(footprint: &VehicleFootprint) -> f64 {
    footprint.length.min(footprint.width) / 4.0
}

/// Rectangle perimeter samples in the vehicle frame, corners included, with
/// consecutive points at most `spacing` apart.
pub fn sample_border(footprint: &VehicleFootprint, spacing: f64) -> Vec<Point2> {
    assert!(spacing > 0.0, "border spacing must be positive");
    let corners = footprint.local_corners();
    let mut out = Vec::new();
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        let n = ((b - a).norm() / spacing).ceil().max(1.0) as usize;
        out.extend((0..n).map(|i| a.lerp(b, i as f64 / n as f64)));
    }
    out
}

/// Moves the scenario into the vehicle frame with relative velocities.
pub fn relativize(s: &Scenario) -> RelativeScene {
    relativize_with_spacing(s, default_border_spacing(&s.vehicle))
}

pub fn relativize_with_spacing(s: &Scenario, spacing: f64) -> RelativeScene {
    let frame = s.vehicle.frame();
    let v_vehicle = s.vehicle.velocity();
    let obstacles = s
        .obstacles
        .iter()
        .map(|n| {
            let rel = n.obstacle.with_velocity(n.obstacle.velocity() - v_vehicle);
            NamedObstacle {
                id: n.id.clone(),
                obstacle: rel.to_local(&frame),
            }
        })
        .collect();
    RelativeScene {
        length: s.vehicle.length,
        width: s.vehicle.width,
        border_points: sample_border(&s.vehicle, spacing),
        obstacles,
    }
}

/// Earliest contact of one obstacle, with the contact point on the border.
fn obstacle_ttc(
    scene: &RelativeScene,
    o: &Obstacle,
    method: TtcMethod,
) -> (TdValue, Option<Point2>) {
    let mut best = (TdValue::INFINITY, None);
    for &p in &scene.border_points {
        let t = td_obstacle(p, o);
        if t < best.0 {
            best = (t, Some(p));
        }
    }
    if method == TtcMethod::BorderSamples {
        return best;
    }
    let v = o.velocity();
    let corners = scene.corners();
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        // the vehicle edge moving at -v toward a fixed obstacle point
        let edge = SegmentEdge {
            q_r: a,
            q_l: b,
            velocity: -v,
        };
        let d = b - a;
        let outward = Point2::new(d.y, -d.x) * (1.0 / d.norm());
        let probes: Vec<Point2> = match o {
            Obstacle::Polygon(p) => p.vertices().to_vec(),
            Obstacle::Circle(c) => vec![c.center - outward * c.radius],
        };
        for w in probes {
            let t = td_edge(w, &edge);
            if t < best.0 {
                best = (t, Some(w + v.displacement(t.seconds())));
            }
        }
    }
    best
}

pub fn predict_ttc(scene: &RelativeScene) -> TtcReport {
    predict_ttc_with(scene, TtcMethod::default())
}

pub fn predict_ttc_with(scene: &RelativeScene, method: TtcMethod) -> TtcReport {
    let mut ttc = TdValue::INFINITY;
    let mut critical_point = None;
    let per_obstacle = scene
        .obstacles
        .iter()
        .map(|n| {
            let (t, p) = obstacle_ttc(scene, &n.obstacle, method);
            if t < ttc {
                ttc = t;
                critical_point = p;
            }
            ObstacleTtc {
                id: n.id.clone(),
                ttc: t,
            }
        })
        .collect();
    TtcReport {
        ttc,
        critical_point: if ttc.is_finite() {
            critical_point
        } else {
            None
        },
        per_obstacle,
    }
}

/// TD of every border point against the whole obstacle set.
pub fn border_profile(scene: &RelativeScene) -> Vec<(Point2, TdValue)> {
    scene
        .border_points
        .iter()
        .map(|&p| {
            let t = scene
                .obstacles
                .iter()
                .map(|n| td_obstacle(p, &n.obstacle))
                .min()
                .unwrap_or(TdValue::INFINITY);
            (p, t)
        })
        .collect()
}
