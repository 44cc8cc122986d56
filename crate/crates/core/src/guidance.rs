//! Occupancy (Z∞) fields and the route function that bias the planner.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    edge_normal_angle, segment_props, to_frame, CircleObstacle, ConvexPolygonObstacle, Obstacle,
    Point2, SegmentEdge, Velocity2,
};
use crate::td::TdValue;

/// Two-valued occupancy: zero inside a shape, infinite outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ZInfValue {
    Zero,
    Infinite,
}

impl From<ZInfValue> for TdValue {
    fn from(z: ZInfValue) -> TdValue {
        match z {
            ZInfValue::Zero => TdValue::ZERO,
            ZInfValue::Infinite => TdValue::INFINITY,
        }
    }
}

/// An edge with its outward normal axis resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutwardEdge {
    pub theta_dprime: f64,
    /// Midpoint coordinate along the outward axis.
    pub x_center: f64,
}

impl OutwardEdge {
    pub fn new(e: &SegmentEdge) -> Self {
        let theta_dprime =
            edge_normal_angle(e, true).expect("validated polygons have no degenerate edges");
        let (center, _) = segment_props(e);
        OutwardEdge {
            theta_dprime,
            x_center: to_frame(center, theta_dprime).x,
        }
    }
}

/// Zero on the inner side of the edge line (boundary included), infinite on
/// the outer side.
pub fn zinf_edge(p: Point2, edge: &OutwardEdge) -> ZInfValue {
    let x = to_frame(p, edge.theta_dprime).x;
    if edge.x_center - x >= 0.0 {
        ZInfValue::Zero
    } else {
        ZInfValue::Infinite
    }
}

/// Polygon occupancy as the maximum over its edges.
pub fn zinf_polygon(p: Point2, poly: &ConvexPolygonObstacle) -> ZInfValue {
    zinf_edges(p, &outward_edges(poly))
}

pub fn outward_edges(poly: &ConvexPolygonObstacle) -> Vec<OutwardEdge> {
    poly.edges().iter().map(OutwardEdge::new).collect()
}

pub fn zinf_edges(p: Point2, edges: &[OutwardEdge]) -> ZInfValue {
    if edges.iter().any(|e| zinf_edge(p, e) == ZInfValue::Infinite) {
        ZInfValue::Infinite
    } else {
        ZInfValue::Zero
    }
}

/// Oriented rectangle: `length` along `angle`, `width` across it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub center: Point2,
    pub length: f64,
    pub width: f64,
    pub angle: f64,
}

impl Rect {
    pub fn to_polygon(&self) -> ConvexPolygonObstacle {
        let (hl, hw) = (self.length / 2.0, self.width / 2.0);
        let corners = [(-hl, -hw), (hl, -hw), (hl, hw), (-hl, hw)];
        let (s, c) = self.angle.sin_cos();
        let verts = corners
            .iter()
            .map(|&(x, y)| self.center + Point2::new(x * c - y * s, x * s + y * c))
            .collect();
        ConvexPolygonObstacle::new(verts, Velocity2::ZERO).expect("rectangle with positive sides")
    }
}

/// Rectangle occupancy from the two center-line distances.
pub fn zinf_rect(p: Point2, rect: &Rect) -> ZInfValue {
    // axis along the length is normal to the width sides and vice versa
    let along = to_frame(p, rect.angle);
    let c = to_frame(rect.center, rect.angle);
    let inside_l = rect.length / 2.0 - (along.x - c.x).abs() >= 0.0;
    let inside_w = rect.width / 2.0 - (along.y - c.y).abs() >= 0.0;
    if inside_l && inside_w {
        ZInfValue::Zero
    } else {
        ZInfValue::Infinite
    }
}

pub fn zinf_circle(p: Point2, circle: &CircleObstacle) -> ZInfValue {
    let d = p - circle.center;
    if circle.radius * circle.radius - d.x * d.x - d.y * d.y >= 0.0 {
        ZInfValue::Zero
    } else {
        ZInfValue::Infinite
    }
}

/// Occupancy field of an obstacle with per-edge data computed once.
#[derive(Debug, Clone, PartialEq)]
pub enum ZInfField {
    Polygon {
        edges: Vec<OutwardEdge>,
        lo: Point2,
        hi: Point2,
    },
    Circle(CircleObstacle),
}

impl ZInfField {
    pub fn new(o: &Obstacle) -> Self {
        match o {
            Obstacle::Polygon(p) => {
                let (mut lo, mut hi) = (p.vertices()[0], p.vertices()[0]);
                for v in p.vertices() {
                    lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
                    hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
                }
                ZInfField::Polygon {
                    edges: outward_edges(p),
                    lo,
                    hi,
                }
            }
            Obstacle::Circle(c) => ZInfField::Circle(c.clone()),
        }
    }

    pub fn eval(&self, p: Point2) -> ZInfValue {
        match self {
            ZInfField::Polygon { edges, lo, hi } => {
                // bounding-box reject; a 1e-9 pad keeps edge-line rounding out of it
                let pad = 1e-9 * (1.0 + hi.x.abs().max(hi.y.abs()).max(lo.x.abs()).max(lo.y.abs()));
                if p.x < lo.x - pad || p.x > hi.x + pad || p.y < lo.y - pad || p.y > hi.y + pad {
                    return ZInfValue::Infinite;
                }
                zinf_edges(p, edges)
            }
            ZInfField::Circle(c) => zinf_circle(p, c),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RouteError {
    #[error("T_s must be positive, got {0}")]
    SafetyThreshold(f64),
    #[error("route parameters need 0 < beta, gamma < 1 < alpha (alpha={alpha}, beta={beta}, gamma={gamma})")]
    Shape { alpha: f64, beta: f64, gamma: f64 },
}

/// Route-function parameters. `delta` is the bearing of the goal line in the
/// vehicle frame and is refreshed on every plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteParams {
    pub t_s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    #[serde(default)]
    pub delta: f64,
}

impl RouteParams {
    pub fn new(t_s: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self, RouteError> {
        let p = RouteParams {
            t_s,
            alpha,
            beta,
            gamma,
            delta: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), RouteError> {
        if !(self.t_s > 0.0 && self.t_s.is_finite()) {
            return Err(RouteError::SafetyThreshold(self.t_s));
        }
        let ok = self.alpha > 1.0
            && self.alpha.is_finite()
            && self.beta > 0.0
            && self.beta < 1.0
            && self.gamma > 0.0
            && self.gamma < 1.0;
        if !ok {
            return Err(RouteError::Shape {
                alpha: self.alpha,
                beta: self.beta,
                gamma: self.gamma,
            });
        }
        Ok(())
    }

    pub fn with_delta(self, delta: f64) -> Self {
        RouteParams { delta, ..self }
    }
}

/// Signed distance from the goal line through the origin at bearing `delta`.
pub fn goal_lateral_offset(p: Point2, delta: f64) -> f64 {
    p.y * delta.cos() - p.x * delta.sin()
}

/// `α·T_s − β·|y_g|^γ`, seconds.
pub fn route_value(p: Point2, params: &RouteParams) -> f64 {
    let yg = goal_lateral_offset(p, params.delta);
    params.alpha * params.t_s - params.beta * yg.abs().powf(params.gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfFeasibility {
    pub pass: bool,
    /// `α·T_s − β·y_extent^γ − T_s`, seconds.
    pub margin: f64,
}

/// Whether the route function stays at or above `T_s` for every lateral
/// offset up to `y_extent`.
pub fn rf_feasibility(params: &RouteParams, y_extent: f64) -> RfFeasibility {
    let margin =
        params.alpha * params.t_s - params.beta * y_extent.abs().powf(params.gamma) - params.t_s;
    // inclusive at zero margin up to the rounding of the powf round trip
    let tol = 1e-12 * params.alpha * params.t_s;
    RfFeasibility {
        pass: margin >= -tol,
        margin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn defaults() -> RouteParams {
        RouteParams::new(4.0, 1.1, 0.1, 0.1).unwrap()
    }

    fn unit_square() -> ConvexPolygonObstacle {
        ConvexPolygonObstacle::new(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
            ],
            Velocity2::ZERO,
        )
        .unwrap()
    }

    #[test]
    fn edge_sides() {
        let sq = unit_square();
        let bottom = OutwardEdge::new(&sq.edges()[0]);
        assert_eq!(zinf_edge(Point2::new(0.5, 0.5), &bottom), ZInfValue::Zero);
        assert_eq!(
            zinf_edge(Point2::new(0.5, -1.0), &bottom),
            ZInfValue::Infinite
        );
        assert_eq!(zinf_edge(Point2::new(0.25, 0.0), &bottom), ZInfValue::Zero);
    }

    #[test]
    fn polygon_examples() {
        let sq = unit_square();
        assert_eq!(zinf_polygon(Point2::new(0.5, 0.5), &sq), ZInfValue::Zero);
        assert_eq!(
            zinf_polygon(Point2::new(1.5, 0.5), &sq),
            ZInfValue::Infinite
        );
        assert_eq!(
            zinf_polygon(Point2::new(-0.1, 1.1), &sq),
            ZInfValue::Infinite
        );
        assert_eq!(
            ZInfField::new(&Obstacle::Polygon(sq)).eval(Point2::new(5.0, 5.0)),
            ZInfValue::Infinite
        );
    }

    #[test]
    fn circle_examples() {
        let c = CircleObstacle::new(Point2::new(1.0, 1.0), 2.0, Velocity2::ZERO).unwrap();
        assert_eq!(zinf_circle(Point2::new(1.0, 1.0), &c), ZInfValue::Zero);
        assert_eq!(zinf_circle(Point2::new(4.0, 1.0), &c), ZInfValue::Infinite);
        assert_eq!(zinf_circle(Point2::new(3.0, 1.0), &c), ZInfValue::Zero);
    }

    #[test]
    fn rect_matches_polygon_on_grid() {
        let r = Rect {
            center: Point2::new(0.3, -0.2),
            length: 1.2,
            width: 0.5,
            angle: 0.7,
        };
        let poly = r.to_polygon();
        for i in -30..=30 {
            for j in -30..=30 {
                let p = Point2::new(
                    0.3 + i as f64 * 0.031 + 0.0007,
                    -0.2 + j as f64 * 0.029 + 0.0003,
                );
                assert_eq!(zinf_rect(p, &r), zinf_polygon(p, &poly), "{p:?}");
            }
        }
    }

    #[test]
    fn lateral_offset_examples() {
        for x in [-3.0, 0.0, 7.5] {
            assert_eq!(goal_lateral_offset(Point2::new(x, 3.0), 0.0), 3.0);
        }
        let d: f64 = 0.9;
        assert_abs_diff_eq!(
            goal_lateral_offset(Point2::new(2.0 * d.cos(), 2.0 * d.sin()), d),
            0.0,
            epsilon = 1e-15
        );
        let v = goal_lateral_offset(Point2::new(2.0, 1.0), PI / 6.0);
        assert_abs_diff_eq!(
            v,
            (PI / 6.0).cos() - 2.0 * (PI / 6.0).sin(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(v, -0.1340, epsilon = 1e-4);
    }

    #[test]
    fn route_examples() {
        let p = defaults();
        assert_abs_diff_eq!(route_value(Point2::new(3.0, 0.0), &p), 4.4, epsilon = 1e-12);
        assert_abs_diff_eq!(route_value(Point2::new(0.0, 1.0), &p), 4.3, epsilon = 1e-12);
        let far = route_value(Point2::new(0.0, 100.0), &p);
        assert_abs_diff_eq!(far, 4.4 - 0.1 * 100f64.powf(0.1), epsilon = 1e-12);
        assert_abs_diff_eq!(far, 4.2415, epsilon = 1e-4);
    }

    #[test]
    fn feasibility_examples() {
        let f = rf_feasibility(&defaults(), 1.0);
        assert!(f.pass);
        assert_abs_diff_eq!(f.margin, 0.3, epsilon = 1e-12);
        let flat = RouteParams {
            t_s: 4.0,
            alpha: 1.0,
            beta: 0.1,
            gamma: 0.1,
            delta: 0.0,
        };
        assert!(!rf_feasibility(&flat, 1e-6).pass);
        let p = defaults();
        let edge = ((p.alpha - 1.0) * p.t_s / p.beta).powf(1.0 / p.gamma);
        assert!(rf_feasibility(&p, edge).pass);
        assert!(!rf_feasibility(&p, edge * 1.001).pass);
    }

    #[test]
    fn parameter_validation() {
        assert!(RouteParams::new(0.0, 1.1, 0.1, 0.1).is_err());
        assert!(RouteParams::new(4.0, 0.9, 0.1, 0.1).is_err());
        assert!(RouteParams::new(4.0, 1.1, 1.5, 0.1).is_err());
        assert!(RouteParams::new(4.0, 1.1, 0.1, 1.0).is_err());
    }
}
