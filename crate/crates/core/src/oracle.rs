//! Brute-force references for the analytic routines.
//!
//! Nothing here calls into the TD formulas. Time is stepped on a fixed grid
//! and each step asks whether the shape swept during that step touches the
//! target, so thin contacts between grid instants are not missed. A coarse
//! pass locates the first touching interval and a fine pass at `dt` resolves
//! it; the union of the fine sweeps equals the coarse sweep, so the result is
//! the same as a plain fine scan.

use ordered_float::OrderedFloat;
use pathfinding::prelude::astar;
use thiserror::Error;

use crate::geometry::{inflate, GeometryError, Obstacle, Point2, SegmentEdge, Velocity2};
use crate::scenario::Scenario;
use crate::td::TdValue;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub dt: f64,
    pub horizon: f64,
    /// Fine steps per coarse step.
    pub refine: u32,
}

impl OracleConfig {
    pub fn new(dt: f64, horizon: f64) -> Self {
        OracleConfig {
            dt,
            horizon,
            refine: 500,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("start lies inside an obstacle")]
    StartBlocked,
    #[error("goal lies inside an obstacle")]
    GoalBlocked,
    #[error("cell size must be positive")]
    BadCell,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Inclusive half-plane test against a counter-clockwise convex polygon.
pub fn point_in_convex(poly: &[Point2], p: Point2) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) >= 0.0
    })
}

fn hull(points: &[Point2]) -> Vec<Point2> {
    crate::geometry::convex_hull(points)
}

pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let l2 = d.dot(d);
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Distance from `p` to a convex polygon (0 inside).
pub fn point_polygon_distance(poly: &[Point2], p: Point2) -> f64 {
    if poly.len() >= 3 && point_in_convex(poly, p) {
        return 0.0;
    }
    let n = poly.len();
    (0..n)
        .map(|i| point_segment_distance(p, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// Touch test for the region a point set sweeps. Degenerate hulls (segments)
/// fall back to a distance test.
fn hull_contains(h: &[Point2], p: Point2) -> bool {
    match h.len() {
        0 => false,
        1 => h[0] == p,
        2 => point_segment_distance(p, h[0], h[1]) <= 1e-12 * (1.0 + p.norm()),
        _ => point_in_convex(h, p),
    }
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o = |p: Point2, q: Point2, r: Point2| (q - p).cross(r - p);
    let (d1, d2, d3, d4) = (o(c, d, a), o(c, d, b), o(a, b, c), o(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    point_segment_distance(a, c, d) == 0.0
        || point_segment_distance(b, c, d) == 0.0
        || point_segment_distance(c, a, b) == 0.0
        || point_segment_distance(d, a, b) == 0.0
}

/// Separating-axis overlap test for convex polygons (touching counts).
pub fn convex_overlap(a: &[Point2], b: &[Point2]) -> bool {
    if a.len() < 3 || b.len() < 3 {
        // degenerate: segment or point against the other shape
        let (thin, other) = if a.len() < 3 { (a, b) } else { (b, a) };
        if other.len() < 3 {
            return match (thin.len(), other.len()) {
                (2, 2) => segments_intersect(thin[0], thin[1], other[0], other[1]),
                _ => thin.iter().any(|p| other.contains(p)),
            };
        }
        if thin.iter().any(|&p| point_in_convex(other, p)) {
            return true;
        }
        if thin.len() == 2 {
            let n = other.len();
            return (0..n)
                .any(|i| segments_intersect(thin[0], thin[1], other[i], other[(i + 1) % n]));
        }
        return false;
    }
    for poly in [a, b] {
        let n = poly.len();
        for i in 0..n {
            let e = poly[(i + 1) % n] - poly[i];
            let axis = Point2::new(-e.y, e.x);
            let (amin, amax) = project(a, axis);
            let (bmin, bmax) = project(b, axis);
            if amax < bmin || bmax < amin {
                return false;
            }
        }
    }
    true
}

fn project(poly: &[Point2], axis: Point2) -> (f64, f64) {
    poly.iter()
        .map(|p| p.dot(axis))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

/// Distance between a segment and a convex polygon (0 when they touch).
pub fn segment_polygon_distance(a: Point2, b: Point2, poly: &[Point2]) -> f64 {
    if convex_overlap(&[a, b], poly) {
        return 0.0;
    }
    let n = poly.len();
    let d1 = poly
        .iter()
        .map(|&v| point_segment_distance(v, a, b))
        .fold(f64::INFINITY, f64::min);
    let d2 = (0..n)
        .flat_map(|i| {
            let (c, d) = (poly[i], poly[(i + 1) % n]);
            [
                point_segment_distance(a, c, d),
                point_segment_distance(b, c, d),
            ]
        })
        .fold(f64::INFINITY, f64::min);
    d1.min(d2)
}

pub fn polygon_circle_overlap(poly: &[Point2], center: Point2, radius: f64) -> bool {
    point_polygon_distance(poly, center) <= radius
}

/// Does the obstacle, moving from time `a` to `b`, touch the convex target?
fn sweep_touches(o: &Obstacle, a: f64, b: f64, target: &[Point2]) -> bool {
    match o {
        Obstacle::Polygon(p) => {
            let (da, db) = (p.velocity.displacement(a), p.velocity.displacement(b));
            let pts: Vec<Point2> = p
                .vertices()
                .iter()
                .flat_map(|&v| [v + da, v + db])
                .collect();
            let h = hull(&pts);
            if target.len() == 1 {
                hull_contains(&h, target[0])
            } else {
                convex_overlap(&h, target)
            }
        }
        Obstacle::Circle(c) => {
            let ca = c.center + c.velocity.displacement(a);
            let cb = c.center + c.velocity.displacement(b);
            if target.len() == 1 {
                point_segment_distance(target[0], ca, cb) <= c.radius
            } else {
                segment_polygon_distance(ca, cb, target) <= c.radius
            }
        }
    }
}

fn first_touch(touches: impl Fn(f64, f64) -> bool, cfg: &OracleConfig) -> TdValue {
    if touches(0.0, 0.0) {
        return TdValue::ZERO;
    }
    let coarse = cfg.dt * cfg.refine as f64;
    let n_coarse = (cfg.horizon / coarse).ceil() as u64;
    for k in 0..n_coarse {
        let (a, b) = (
            k as f64 * coarse,
            ((k + 1) as f64 * coarse).min(cfg.horizon),
        );
        if !touches(a, b) {
            continue;
        }
        for j in 0..cfg.refine as u64 {
            let fa = a + j as f64 * cfg.dt;
            let fb = (fa + cfg.dt).min(b);
            if fa >= b {
                break;
            }
            if touches(fa, fb) {
                return TdValue::new(fb).expect("non-negative");
            }
        }
        // rounding at the coarse boundary: the touch is at b itself
        return TdValue::new(b).expect("non-negative");
    }
    TdValue::INFINITY
}

/// First grid time at which the obstacle (with its velocity relative to the
/// point) covers `point`; `+∞` when the horizon passes without contact.
pub fn oracle_td(point: Point2, obstacle: &Obstacle, cfg: &OracleConfig) -> TdValue {
    let target = [point];
    first_touch(|a, b| sweep_touches(obstacle, a, b, &target), cfg)
}

/// Same as [`oracle_td`] for a bare moving segment.
pub fn oracle_td_segment(point: Point2, edge: &SegmentEdge, cfg: &OracleConfig) -> TdValue {
    let v = edge.velocity;
    first_touch(
        |a, b| {
            let (da, db) = (v.displacement(a), v.displacement(b));
            let h = hull(&[edge.q_r + da, edge.q_l + da, edge.q_r + db, edge.q_l + db]);
            hull_contains(&h, point)
        },
        cfg,
    )
}

/// First grid time at which any obstacle overlaps the stationary vehicle
/// polygon. Obstacles carry velocities relative to the vehicle.
pub fn oracle_ttc(vehicle: &[Point2], obstacles: &[Obstacle], cfg: &OracleConfig) -> TdValue {
    obstacles
        .iter()
        .map(|o| first_touch(|a, b| sweep_touches(o, a, b, vehicle), cfg))
        .min()
        .unwrap_or(TdValue::INFINITY)
}

/// Exact overlap of a vehicle polygon and an obstacle at one instant.
pub fn footprint_overlaps(vehicle: &[Point2], obstacle: &Obstacle) -> bool {
    match obstacle {
        Obstacle::Polygon(p) => convex_overlap(vehicle, p.vertices()),
        Obstacle::Circle(c) => polygon_circle_overlap(vehicle, c.center, c.radius),
    }
}

/// 8-connected A* over an occupancy grid anchored at `start`. Cells whose
/// center is inside an (already inflated) obstacle are blocked. Returns the
/// path length including the final hop from the snapped goal cell to `goal`,
/// or `None` when the goal is unreachable inside `bounds`.
pub fn grid_astar(
    start: Point2,
    goal: Point2,
    obstacles: &[Obstacle],
    bounds: (Point2, Point2),
    cell: f64,
) -> Result<Option<f64>, OracleError> {
    if !(cell > 0.0) {
        return Err(OracleError::BadCell);
    }
    if obstacles.iter().any(|o| o.contains(start)) {
        return Err(OracleError::StartBlocked);
    }
    if obstacles.iter().any(|o| o.contains(goal)) {
        return Err(OracleError::GoalBlocked);
    }
    let (lo, hi) = bounds;
    let imin = ((lo.x - start.x) / cell).floor() as i64;
    let imax = ((hi.x - start.x) / cell).ceil() as i64;
    let jmin = ((lo.y - start.y) / cell).floor() as i64;
    let jmax = ((hi.y - start.y) / cell).ceil() as i64;
    let center =
        |(i, j): (i64, i64)| Point2::new(start.x + i as f64 * cell, start.y + j as f64 * cell);
    let free = |c: (i64, i64)| {
        c.0 >= imin && c.0 <= imax && c.1 >= jmin && c.1 <= jmax && {
            let p = center(c);
            !obstacles.iter().any(|o| o.contains(p))
        }
    };
    let target = (
        ((goal.x - start.x) / cell).round() as i64,
        ((goal.y - start.y) / cell).round() as i64,
    );
    if !free(target) {
        return Ok(None);
    }
    let diag = std::f64::consts::SQRT_2 * cell;
    let found = astar(
        &(0i64, 0i64),
        |&(i, j)| {
            let mut out = Vec::with_capacity(8);
            for di in -1..=1 {
                for dj in -1..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let n = (i + di, j + dj);
                    if free(n) {
                        let c = if di != 0 && dj != 0 { diag } else { cell };
                        out.push((n, OrderedFloat(c)));
                    }
                }
            }
            out
        },
        |&(i, j)| {
            // octile distance is admissible for this move set
            let (dx, dy) = ((i - target.0).abs() as f64, (j - target.1).abs() as f64);
            OrderedFloat(cell * (dx.max(dy) - dx.min(dy)) + diag * dx.min(dy))
        },
        |&c| c == target,
    );
    Ok(found.map(|(_, cost)| cost.0 + (center(target) - goal).norm()))
}

/// Grid A* on a scenario's obstacles, inflated as the planner inflates them.
/// Obstacles are taken at their current positions; velocities are ignored.
pub fn grid_astar_scenario(s: &Scenario, cell: f64) -> Result<Option<f64>, OracleError> {
    let r = s.vehicle.inflation_radius();
    let inflated = s
        .obstacles
        .iter()
        .map(|o| inflate(&o.obstacle.with_velocity(Velocity2::ZERO), r))
        .collect::<Result<Vec<_>, _>>()?;
    let start = s.vehicle.position;
    let mut lo = Point2::new(start.x.min(s.goal.x), start.y.min(s.goal.y));
    let mut hi = Point2::new(start.x.max(s.goal.x), start.y.max(s.goal.y));
    for o in &inflated {
        let pts: Vec<Point2> = match o {
            Obstacle::Polygon(p) => p.vertices().to_vec(),
            Obstacle::Circle(c) => vec![
                c.center + Point2::new(c.radius, c.radius),
                c.center - Point2::new(c.radius, c.radius),
            ],
        };
        for p in pts {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
    }
    let margin = 0.1 * (hi - lo).norm() + 2.0 * cell;
    let bounds = (
        lo - Point2::new(margin, margin),
        hi + Point2::new(margin, margin),
    );
    grid_astar(start, s.goal, &inflated, bounds, cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CircleObstacle, ConvexPolygonObstacle};

    fn square(cx: f64, cy: f64, half: f64, v: Velocity2) -> Obstacle {
        Obstacle::Polygon(
            ConvexPolygonObstacle::new(
                vec![
                    Point2::new(cx - half, cy - half),
                    Point2::new(cx + half, cy - half),
                    Point2::new(cx + half, cy + half),
                    Point2::new(cx - half, cy + half),
                ],
                v,
            )
            .unwrap(),
        )
    }

    #[test]
    fn head_on_circle() {
        let cfg = OracleConfig::new(1e-4, 50.0);
        let c = Obstacle::Circle(
            CircleObstacle::new(Point2::new(5.0, 0.0), 1.0, Velocity2::new(-1.0, 0.0)).unwrap(),
        );
        let t = oracle_td(Point2::ORIGIN, &c, &cfg).seconds();
        assert!((t - 4.0).abs() <= 1e-4 + 1e-9, "t = {t}");
    }

    #[test]
    fn receding_is_infinite() {
        let cfg = OracleConfig::new(1e-3, 20.0);
        let c = Obstacle::Circle(
            CircleObstacle::new(Point2::new(5.0, 0.0), 1.0, Velocity2::new(1.0, 0.0)).unwrap(),
        );
        assert_eq!(oracle_td(Point2::ORIGIN, &c, &cfg), TdValue::INFINITY);
    }

    #[test]
    fn segment_hit_between_grid_instants() {
        let cfg = OracleConfig::new(1e-4, 10.0);
        let e = SegmentEdge::new(
            Point2::new(0.0, -1.0),
            Point2::new(0.0, 1.0),
            Velocity2::new(1.0, 0.0),
        )
        .unwrap();
        let t = oracle_td_segment(Point2::new(3.00005, 0.0), &e, &cfg).seconds();
        assert!(t >= 3.00005 && t <= 3.00005 + 1e-4 + 1e-9, "t = {t}");
    }

    #[test]
    fn dt_refinement_moves_answer_by_at_most_dt() {
        let sq = square(4.0, 0.3, 0.5, Velocity2::new(-0.7, 0.2));
        let p = Point2::new(0.2, 0.9);
        let coarse = oracle_td(p, &sq, &OracleConfig::new(2e-3, 20.0)).seconds();
        let fine = oracle_td(p, &sq, &OracleConfig::new(1e-3, 20.0)).seconds();
        assert!(fine.is_finite());
        assert!((coarse - fine).abs() <= 2e-3 + 1e-12);
    }

    #[test]
    fn ttc_head_on_and_parallel() {
        let cfg = OracleConfig::new(1e-3, 30.0);
        let car = [
            Point2::new(-0.5, -0.5),
            Point2::new(0.5, -0.5),
            Point2::new(0.5, 0.5),
            Point2::new(-0.5, 0.5),
        ];
        let head_on = square(6.0, 0.0, 0.5, Velocity2::new(-1.0, 0.0));
        let t = oracle_ttc(&car, &[head_on], &cfg).seconds();
        assert!((t - 5.0).abs() <= 1e-3 + 1e-9);
        let parallel = square(0.0, 3.0, 0.5, Velocity2::new(-1.0, 0.0));
        assert_eq!(oracle_ttc(&car, &[parallel], &cfg), TdValue::INFINITY);
    }

    #[test]
    fn sat_basic() {
        let a = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        let b: Vec<Point2> = a.iter().map(|&p| p + Point2::new(1.0, 0.5)).collect();
        let c: Vec<Point2> = a.iter().map(|&p| p + Point2::new(1.01, 0.0)).collect();
        assert!(convex_overlap(&a, &b));
        assert!(!convex_overlap(&a, &c));
    }

    #[test]
    fn astar_empty_map_diagonal() {
        let len = grid_astar(
            Point2::ORIGIN,
            Point2::new(1.0, 1.0),
            &[],
            (Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)),
            0.01,
        )
        .unwrap()
        .unwrap();
        assert!((len - 2f64.sqrt()).abs() <= 0.01, "len = {len}");
    }

    #[test]
    fn astar_walled_goal_is_blocked() {
        // a ring of four bars around the goal
        let bar = |x0: f64, y0: f64, x1: f64, y1: f64| {
            Obstacle::Polygon(
                ConvexPolygonObstacle::new(
                    vec![
                        Point2::new(x0, y0),
                        Point2::new(x1, y0),
                        Point2::new(x1, y1),
                        Point2::new(x0, y1),
                    ],
                    Velocity2::ZERO,
                )
                .unwrap(),
            )
        };
        let walls = [
            bar(0.6, 0.6, 1.0, 0.7),
            bar(0.6, 0.9, 1.0, 1.0),
            bar(0.6, 0.6, 0.7, 1.0),
            bar(0.9, 0.6, 1.0, 1.0),
        ];
        let r = grid_astar(
            Point2::ORIGIN,
            Point2::new(0.8, 0.8),
            &walls,
            (Point2::ORIGIN, Point2::new(1.2, 1.2)),
            0.01,
        );
        assert_eq!(r, Ok(None));
        let r = grid_astar(
            Point2::new(0.65, 0.65),
            Point2::new(0.8, 0.8),
            &walls,
            (Point2::ORIGIN, Point2::new(1.2, 1.2)),
            0.01,
        );
        assert_eq!(r, Err(OracleError::StartBlocked));
    }
}
