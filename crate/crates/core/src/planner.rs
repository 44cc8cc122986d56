//! Safest-point path planning over sections perpendicular to the heading.
//!
//! On every section the planner maximizes the minimum of the route function,
//! the Z∞ field of each inflated obstacle and, in dynamic mode, the TD field
//! of each obstacle at its future relative location.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    convex_hull, inflate, signed_area, ConvexPolygonObstacle, Frame, GeometryError, Obstacle,
    Point2, VehicleFootprint, Velocity2,
};
use crate::guidance::{
    goal_lateral_offset, rf_feasibility, route_value, RouteError, RouteParams, ZInfField, ZInfValue,
};
use crate::scenario::{NamedObstacle, Scenario};
use crate::td::{section_argmax, SectionProfile, TdField, TdValue, TieRule};

/// Future shapes thinner than this (square meters) are rejected.
pub const MIN_FUTURE_AREA: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Static,
    Dynamic,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Static => "static",
            Mode::Dynamic => "dynamic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    pub mode: Mode,
    /// Route function parameters, including the safety threshold `T_s`.
    pub route: RouteParams,
    /// Section spacing along the heading.
    pub dx: f64,
    /// Lateral sample spacing on a section.
    pub dy: f64,
    pub y_min: f64,
    pub y_max: f64,
    /// Stand-in for vertex crossing times that would be infinite.
    pub t_h: f64,
    pub goal_tolerance: f64,
    /// Circles are replaced by this many-sided circumscribing polygon in
    /// dynamic mode. `None` rejects circles there.
    pub circle_sides: Option<usize>,
    /// Only accept section points reachable from the previous point without
    /// crossing a configuration obstacle. Without it a section may pick a
    /// point on the far side of an obstacle.
    pub link_check: bool,
    /// Sections always extend at least this far ahead, even when the goal
    /// is nearly abeam.
    pub min_reach: f64,
    /// Largest goal bearing the route line may take, radians. A goal
    /// further off the heading is steered toward at this bearing.
    pub max_bearing: f64,
}

impl PlannerConfig {
    /// Defaults sized to the vehicle: sections a quarter of its length apart,
    /// lateral samples a quarter of its width apart, and a lateral window
    /// of `±reach`.
    pub fn for_vehicle(vehicle: &VehicleFootprint, reach: f64) -> Self {
        let reach = reach.max(vehicle.length);
        PlannerConfig {
            mode: Mode::Static,
            route: RouteParams::new(4.0, 1.1, 0.1, 0.1).expect("valid defaults"),
            dx: vehicle.length / 4.0,
            dy: vehicle.width / 4.0,
            y_min: -reach,
            y_max: reach,
            t_h: 10.0,
            goal_tolerance: vehicle.width / 4.0,
            circle_sides: None,
            link_check: true,
            min_reach: vehicle.length,
            max_bearing: 80f64.to_radians(),
        }
    }

    pub fn t_s(&self) -> f64 {
        self.route.t_s
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        self.route.validate()?;
        let bad = |what: &'static str| Err(PlanError::Config(what));
        let finite = [
            self.dx,
            self.dy,
            self.y_min,
            self.y_max,
            self.t_h,
            self.goal_tolerance,
            self.min_reach,
            self.max_bearing,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return bad("planner values must be finite");
        }
        if self.dx <= 0.0 || self.dy <= 0.0 {
            return bad("dx and dy must be positive");
        }
        if self.y_min >= self.y_max {
            return bad("y_min must be below y_max");
        }
        if self.t_h <= self.route.t_s {
            return bad("T_h must exceed T_s");
        }
        if self.goal_tolerance < 0.0 {
            return bad("goal_tolerance must be non-negative");
        }
        if self.min_reach < 0.0 {
            return bad("min_reach must be non-negative");
        }
        if !(self.max_bearing > 0.0 && self.max_bearing < FRAC_PI_2) {
            return bad("max_bearing must lie strictly between 0 and π/2");
        }
        if matches!(self.circle_sides, Some(k) if k < 3) {
            return bad("circle_sides must be at least 3");
        }
        Ok(())
    }

    /// Whether a section value may be appended to the path.
    pub fn admissible(&self, t_p: TdValue) -> bool {
        match self.mode {
            Mode::Static => t_p.seconds() > 0.0,
            Mode::Dynamic => t_p.seconds() >= self.route.t_s,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("invalid planner configuration: {0}")]
    Config(&'static str),
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error("route function drops below T_s inside the lateral window (margin {margin:.3e} s)")]
    InfeasibleRoute { margin: f64 },
    #[error("obstacle `{id}` is a circle; dynamic planning needs polygons (set circle_sides to approximate)")]
    CircleInDynamic { id: String },
    #[error("future relative shape of obstacle `{id}` is degenerate (area {area:.3e} m^2)")]
    DegenerateFuture { id: String, area: f64 },
    #[error("obstacle `{id}`: {source}")]
    Geometry { id: String, source: GeometryError },
}

/// An obstacle moved, vertex by vertex, to where each vertex will be when it
/// reaches the vehicle's lateral axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FutureObstacle {
    pub id: String,
    /// Transformed vertices in source order.
    pub vertices: Vec<Point2>,
    /// Crossing time used for each vertex, seconds.
    pub crossing_times: Vec<f64>,
    /// Convex shape used for the fields. Equals `vertices` unless the
    /// transformed outline lost convexity, in which case it is their hull.
    pub polygon: ConvexPolygonObstacle,
}

/// Time for a point at lateral-axis distance `x` to reach the axis when
/// closing at relative speed `v_x`: zero on the axis, infinite when it
/// recedes or holds.
pub fn axis_crossing_time(x: f64, v_x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let r = x / v_x;
    if r < 0.0 && r.is_finite() {
        -r
    } else {
        f64::INFINITY
    }
}

/// `poly` is in the vehicle frame and carries its absolute velocity
/// expressed along the vehicle axes; `vehicle_velocity` likewise. The
/// returned polygon carries the relative velocity.
pub fn future_relative_geometry(
    id: &str,
    poly: &ConvexPolygonObstacle,
    vehicle_velocity: Velocity2,
    t_h: f64,
) -> Result<FutureObstacle, PlanError> {
    let v_abs = poly.velocity;
    let v_rel = v_abs - vehicle_velocity;
    let mut vertices = Vec::with_capacity(poly.vertices().len());
    let mut crossing_times = Vec::with_capacity(poly.vertices().len());
    for &q in poly.vertices() {
        let t = axis_crossing_time(q.x, v_rel.vx);
        let t = if t.is_finite() { t } else { t_h };
        crossing_times.push(t);
        vertices.push(q + v_abs.displacement(t));
    }
    let degenerate = |area: f64| PlanError::DegenerateFuture {
        id: id.to_string(),
        area,
    };
    let polygon = match ConvexPolygonObstacle::new(vertices.clone(), v_rel) {
        Ok(p) => p,
        Err(_) => {
            let hull = convex_hull(&vertices);
            let area = if hull.len() >= 3 {
                signed_area(&hull).abs()
            } else {
                0.0
            };
            if area < MIN_FUTURE_AREA {
                return Err(degenerate(area));
            }
            ConvexPolygonObstacle::new(hull, v_rel).map_err(|_| degenerate(area))?
        }
    };
    if polygon.area() < MIN_FUTURE_AREA {
        return Err(degenerate(polygon.area()));
    }
    Ok(FutureObstacle {
        id: id.to_string(),
        vertices,
        crossing_times,
        polygon,
    })
}

/// Everything a section query needs, in the vehicle frame.
#[derive(Debug, Clone)]
pub struct PreparedScene {
    pub frame: Frame,
    pub goal: Point2,
    pub route: RouteParams,
    /// Inflated obstacles as used by the fields (future shapes in dynamic
    /// mode), vehicle frame.
    pub shapes: Vec<NamedObstacle>,
    pub futures: Vec<FutureObstacle>,
    zinf: Vec<ZInfField>,
    td: Vec<TdField>,
}

impl PreparedScene {
    pub fn new(
        vehicle: &VehicleFootprint,
        obstacles: &[NamedObstacle],
        goal: Point2,
        config: &PlannerConfig,
    ) -> Result<Self, PlanError> {
        let frame = vehicle.frame();
        let goal_pc = frame.to_local(goal);
        let bearing = goal_pc
            .y
            .atan2(goal_pc.x)
            .clamp(-config.max_bearing, config.max_bearing);
        let route = config.route.with_delta(bearing);
        let r = vehicle.inflation_radius();
        let v_vehicle = Velocity2::new(vehicle.speed, 0.0);
        let mut shapes = Vec::with_capacity(obstacles.len());
        let mut futures = Vec::new();
        let mut zinf = Vec::with_capacity(obstacles.len());
        let mut td = Vec::new();
        for n in obstacles {
            let geo = |source| PlanError::Geometry {
                id: n.id.clone(),
                source,
            };
            let source = match (&n.obstacle, config.mode, config.circle_sides) {
                (Obstacle::Circle(_), Mode::Dynamic, None) => {
                    return Err(PlanError::CircleInDynamic { id: n.id.clone() })
                }
                (Obstacle::Circle(c), Mode::Dynamic, Some(k)) => {
                    Obstacle::Polygon(c.circumscribed_polygon(k).map_err(geo)?)
                }
                (o, _, _) => o.clone(),
            };
            let local = inflate(&source, r).map_err(geo)?.to_local(&frame);
            let shape = match (config.mode, local) {
                (Mode::Static, o) => o,
                (Mode::Dynamic, Obstacle::Polygon(p)) => {
                    let f = future_relative_geometry(&n.id, &p, v_vehicle, config.t_h)?;
                    let o = Obstacle::Polygon(f.polygon.clone());
                    futures.push(f);
                    td.push(TdField::new(&o));
                    o
                }
                (Mode::Dynamic, Obstacle::Circle(_)) => {
                    unreachable!("circles were converted above")
                }
            };
            zinf.push(ZInfField::new(&shape));
            shapes.push(NamedObstacle {
                id: n.id.clone(),
                obstacle: shape,
            });
        }
        Ok(PreparedScene {
            frame,
            goal: goal_pc,
            route,
            shapes,
            futures,
            zinf,
            td,
        })
    }

    /// The composed field: min of the route function, every Z∞ and every TD.
    pub fn value(&self, p: Point2) -> TdValue {
        if self.zinf.iter().any(|z| z.eval(p) == ZInfValue::Zero) {
            return TdValue::ZERO;
        }
        let rf = TdValue::new(route_value(p, &self.route).max(0.0)).expect("finite route value");
        self.td.iter().fold(rf, |acc, f| acc.min(f.eval(p)))
    }

    /// Lateral samples for section `x`: a regular grid plus the goal-line
    /// crossing, ascending.
    pub fn section_ys(&self, x: f64, config: &PlannerConfig) -> Vec<f64> {
        let n = ((config.y_max - config.y_min) / config.dy).floor() as usize;
        let mut ys: Vec<f64> = (0..=n)
            .map(|i| config.y_min + i as f64 * config.dy)
            .collect();
        let on_line = x * self.route.delta.tan();
        if on_line > config.y_min && on_line < config.y_max {
            let at = ys.partition_point(|&y| y < on_line);
            if ys.get(at) != Some(&on_line) {
                ys.insert(at, on_line);
            }
        }
        ys
    }

    pub fn profile(&self, x: f64, config: &PlannerConfig) -> SectionProfile {
        SectionProfile::from_fn(x, self.section_ys(x, config), |y| {
            self.value(Point2::new(x, y))
        })
    }
}

/// Safest value and location on section `x`.
pub fn section_tp(x: f64, scene: &PreparedScene, config: &PlannerConfig) -> (TdValue, f64) {
    let profile = scene.profile(x, config);
    section_argmax(
        &profile,
        TieRule::NearestGoalLine {
            delta: scene.route.delta,
        },
    )
    .expect("section grid is never empty")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub x: f64,
    pub y: f64,
    pub t_p: TdValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ReachedGoalSection,
    SafetyCutoff,
    /// The goal is not ahead of the vehicle, so there are no sections.
    WorkspaceEdge,
}

/// Safest points in the vehicle frame. The vehicle itself (the origin) is
/// implied and not stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPolyline {
    pub frame: Frame,
    pub points: Vec<PathPoint>,
    pub terminated: Termination,
}

impl PathPolyline {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Origin followed by the stored points.
    pub fn vertices(&self) -> Vec<Point2> {
        std::iter::once(Point2::ORIGIN)
            .chain(self.points.iter().map(|p| Point2::new(p.x, p.y)))
            .collect()
    }

    /// Vertices in the parent frame.
    pub fn global_vertices(&self) -> Vec<Point2> {
        self.vertices()
            .into_iter()
            .map(|p| self.frame.to_parent(p))
            .collect()
    }

    /// Polyline length from the vehicle through every point.
    pub fn length(&self) -> f64 {
        self.vertices()
            .windows(2)
            .map(|w| w[0].distance(w[1]))
            .sum()
    }

    pub fn min_tp(&self) -> Option<TdValue> {
        self.points.iter().map(|p| p.t_p).min()
    }
}

/// Section abscissas up to and including the goal's.
fn section_xs(x_goal: f64, dx: f64) -> Vec<f64> {
    let mut xs = Vec::new();
    let mut k = 1;
    // a grid section within a hair of the goal section would repeat it
    while (k as f64) * dx < x_goal - 1e-9 * dx {
        xs.push(k as f64 * dx);
        k += 1;
    }
    xs.push(x_goal);
    xs
}

pub fn plan_path(scenario: &Scenario, config: &PlannerConfig) -> Result<PathPolyline, PlanError> {
    let names: Vec<NamedObstacle> = scenario.obstacles.clone();
    plan_from(&scenario.vehicle, &names, scenario.goal, config)
}

/// Plans from an explicit vehicle state and obstacle set (parent frame).
pub fn plan_from(
    vehicle: &VehicleFootprint,
    obstacles: &[NamedObstacle],
    goal: Point2,
    config: &PlannerConfig,
) -> Result<PathPolyline, PlanError> {
    let scene = PreparedScene::new(vehicle, obstacles, goal, config)?;
    plan_prepared(&scene, config)
}

pub fn plan_prepared(
    scene: &PreparedScene,
    config: &PlannerConfig,
) -> Result<PathPolyline, PlanError> {
    config.validate()?;
    let goal = scene.goal;
    if config.mode == Mode::Dynamic {
        let reach = config.y_min.abs().max(config.y_max.abs()) + goal.norm();
        let f = rf_feasibility(&scene.route, reach);
        if !f.pass {
            return Err(PlanError::InfeasibleRoute { margin: f.margin });
        }
    }
    let reach = goal.x.max(config.min_reach);
    if reach <= 0.0 {
        return Ok(PathPolyline {
            frame: scene.frame,
            points: Vec::new(),
            terminated: Termination::WorkspaceEdge,
        });
    }
    let extended = goal.x < config.min_reach;
    let xs = section_xs(reach, config.dx);
    let profiles: Vec<SectionProfile> = xs.par_iter().map(|&x| scene.profile(x, config)).collect();
    let tie = TieRule::NearestGoalLine {
        delta: scene.route.delta,
    };
    let mut points: Vec<PathPoint> = Vec::with_capacity(xs.len());
    for profile in &profiles {
        let prev = points
            .last()
            .map_or(Point2::ORIGIN, |p| Point2::new(p.x, p.y));
        let pick = if config.link_check {
            pick_reachable(profile, prev, scene, config, tie)
        } else {
            section_argmax(profile, tie).filter(|&(t, _)| config.admissible(t))
        };
        match pick {
            Some((t_p, y)) => points.push(PathPoint {
                x: profile.x,
                y,
                t_p,
            }),
            None => {
                return Ok(PathPolyline {
                    frame: scene.frame,
                    points,
                    terminated: Termination::SafetyCutoff,
                })
            }
        }
    }
    let last = points.last_mut().expect("at least the goal section");
    if !extended && (last.y - goal.y).abs() <= config.goal_tolerance {
        let t_p = scene.value(goal);
        if config.admissible(t_p) {
            *last = PathPoint {
                x: goal.x,
                y: goal.y,
                t_p,
            };
        }
    }
    Ok(PathPolyline {
        frame: scene.frame,
        points,
        terminated: Termination::ReachedGoalSection,
    })
}

/// Whether the vehicle can move from `a` to `b` without entering a
/// configuration obstacle, either straight or by first shifting sideways at
/// `a.x`. A shape that already contains `a` may be left, never crossed: the
/// stretch inside may exceed the shortest way out by at most `slack`.
pub fn reachable(a: Point2, b: Point2, scene: &PreparedScene, slack: f64) -> bool {
    let shapes: Vec<(&Obstacle, f64)> = scene
        .shapes
        .iter()
        .map(|n| (&n.obstacle, n.obstacle.depth(a)))
        .collect();
    let clear = |p: Point2, q: Point2| {
        shapes.iter().all(|&(o, depth)| match o.segment_span(p, q) {
            None => true,
            Some((lo, hi)) => lo == 0.0 && p == a && (hi - lo) * p.distance(q) <= depth + slack,
        })
    };
    let corner = Point2::new(a.x, b.y);
    clear(a, b) || (clear(a, corner) && clear(corner, b))
}

/// Best admissible sample on a section that is reachable from `prev`,
/// scanning samples in max-min order.
fn pick_reachable(
    profile: &SectionProfile,
    prev: Point2,
    scene: &PreparedScene,
    config: &PlannerConfig,
    tie: TieRule,
) -> Option<(TdValue, f64)> {
    let key = |y: f64| match tie {
        TieRule::NearestGoalLine { delta } => {
            goal_lateral_offset(Point2::new(profile.x, y), delta).abs()
        }
        TieRule::SmallestY => 0.0,
    };
    let mut order: Vec<(f64, TdValue)> = profile
        .samples
        .iter()
        .copied()
        .filter(|s| config.admissible(s.1))
        .collect();
    order.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then(key(a.0).total_cmp(&key(b.0)))
            .then(a.0.total_cmp(&b.0))
    });
    order
        .into_iter()
        .find(|&(y, _)| reachable(prev, Point2::new(profile.x, y), scene, config.dx))
        .map(|(y, t)| (t, y))
}

/// Lateral distance of a point from the goal line of a prepared scene.
pub fn goal_offset(scene: &PreparedScene, p: Point2) -> f64 {
    goal_lateral_offset(p, scene.route.delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn robot() -> VehicleFootprint {
        VehicleFootprint {
            length: 0.1,
            width: 0.08,
            position: Point2::ORIGIN,
            heading: 0.0,
            speed: 0.2,
            v_max: 0.2,
            a_n_max: 0.133,
        }
    }

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64, v: Velocity2) -> ConvexPolygonObstacle {
        ConvexPolygonObstacle::new(
            vec![
                Point2::new(x0, y0),
                Point2::new(x1, y0),
                Point2::new(x1, y1),
                Point2::new(x0, y1),
            ],
            v,
        )
        .unwrap()
    }

    fn named(id: &str, p: ConvexPolygonObstacle) -> NamedObstacle {
        NamedObstacle {
            id: id.into(),
            obstacle: Obstacle::Polygon(p),
        }
    }

    #[test]
    fn crossing_time_cases() {
        assert_eq!(axis_crossing_time(2.0, -1.0), 2.0);
        assert_eq!(axis_crossing_time(2.0, 1.0), f64::INFINITY);
        assert_eq!(axis_crossing_time(0.0, 1.0), 0.0);
        assert_eq!(axis_crossing_time(-1.0, 0.5), 2.0);
        assert_eq!(axis_crossing_time(3.0, 0.0), f64::INFINITY);
    }

    #[test]
    fn future_geometry_examples() {
        // stationary in the world: shape is unchanged
        let p = rect(1.0, -0.5, 2.0, 0.5, Velocity2::ZERO);
        let f = future_relative_geometry("a", &p, Velocity2::new(1.0, 0.0), 10.0).unwrap();
        assert_eq!(f.vertices, p.vertices().to_vec());
        assert_eq!(f.polygon.velocity, Velocity2::new(-1.0, 0.0));

        // vertex at (2, -1) moving up at 1 m/s, vehicle at 1 m/s along x
        let p = rect(2.0, -1.0, 3.0, 0.0, Velocity2::new(0.0, 1.0));
        let f = future_relative_geometry("b", &p, Velocity2::new(1.0, 0.0), 10.0).unwrap();
        assert_eq!(f.crossing_times[0], 2.0);
        assert_abs_diff_eq!(f.vertices[0].x, 2.0);
        assert_abs_diff_eq!(f.vertices[0].y, 1.0);
        // the far vertices cross later and rise further: a sheared shape
        assert_eq!(f.crossing_times[1], 3.0);
        assert_abs_diff_eq!(f.vertices[1].y, 2.0);
    }

    #[test]
    fn receding_vertices_use_the_cap() {
        let p = rect(1.0, -0.5, 2.0, 0.5, Velocity2::new(2.0, 0.0));
        let f = future_relative_geometry("r", &p, Velocity2::new(1.0, 0.0), 5.0).unwrap();
        assert!(f.crossing_times.iter().all(|&t| t == 5.0));
        assert_abs_diff_eq!(f.vertices[0].x, 11.0);
    }

    #[test]
    fn empty_world_follows_goal_line() {
        let v = robot();
        let goal = Point2::new(0.6, 0.2);
        let cfg = PlannerConfig::for_vehicle(&v, 1.0);
        let path = plan_from(&v, &[], goal, &cfg).unwrap();
        assert_eq!(path.terminated, Termination::ReachedGoalSection);
        for p in &path.points {
            assert_abs_diff_eq!(p.y, p.x * goal.y / goal.x, epsilon = 1e-12);
        }
        let last = path.points.last().unwrap();
        assert_eq!((last.x, last.y), (goal.x, goal.y));
        let dyn_cfg = PlannerConfig {
            mode: Mode::Dynamic,
            ..cfg
        };
        assert_eq!(
            plan_from(&v, &[], goal, &dyn_cfg).unwrap().points,
            path.points
        );
    }

    #[test]
    fn covered_section_has_zero_value() {
        let v = robot();
        let cfg = PlannerConfig {
            y_min: -0.3,
            y_max: 0.3,
            ..PlannerConfig::for_vehicle(&v, 0.3)
        };
        let wall = named("wall", rect(0.4, -1.0, 0.5, 1.0, Velocity2::ZERO));
        let scene = PreparedScene::new(&v, &[wall], Point2::new(1.0, 0.0), &cfg).unwrap();
        assert_eq!(section_tp(0.45, &scene, &cfg).0, TdValue::ZERO);
        let path = plan_prepared(&scene, &cfg).unwrap();
        assert_eq!(path.terminated, Termination::SafetyCutoff);
        assert!(path.points.iter().all(|p| p.x < 0.4));
    }

    #[test]
    fn threads_a_gap() {
        let v = robot();
        let cfg = PlannerConfig::for_vehicle(&v, 1.0);
        let r = v.inflation_radius();
        let obstacles = [
            named("low", rect(0.4, -1.0, 0.5, 0.1 - r - 0.03, Velocity2::ZERO)),
            named("high", rect(0.4, 0.1 + r + 0.03, 0.5, 1.0, Velocity2::ZERO)),
        ];
        let path = plan_from(&v, &obstacles, Point2::new(1.0, 0.0), &cfg).unwrap();
        assert_eq!(path.terminated, Termination::ReachedGoalSection);
        let scene = PreparedScene::new(&v, &obstacles, Point2::new(1.0, 0.0), &cfg).unwrap();
        for p in &path.points {
            assert!(scene.value(Point2::new(p.x, p.y)).seconds() > 0.0);
            if (0.4..=0.5).contains(&p.x) {
                assert!((p.y - 0.1).abs() < 0.03 + 1e-9);
            }
        }
    }

    #[test]
    fn dynamic_cutoff_before_oncoming_block() {
        let v = robot();
        let cfg = PlannerConfig {
            mode: Mode::Dynamic,
            y_min: -0.2,
            y_max: 0.2,
            ..PlannerConfig::for_vehicle(&v, 0.2)
        };
        // a wide slab closing fast: TD falls below T_s on every sample near it
        let slab = named(
            "slab",
            rect(0.5, -1.0, 0.6, 1.0, Velocity2::new(-0.05, 0.0)),
        );
        let path = plan_from(&v, &[slab], Point2::new(1.0, 0.0), &cfg).unwrap();
        assert_eq!(path.terminated, Termination::SafetyCutoff);
        for p in &path.points {
            assert!(p.t_p.seconds() >= cfg.t_s());
        }
    }

    #[test]
    fn goal_behind_turns_toward_it() {
        let v = robot();
        let cfg = PlannerConfig::for_vehicle(&v, 1.0);
        let path = plan_from(&v, &[], Point2::new(-1.0, -0.2), &cfg).unwrap();
        assert_eq!(path.terminated, Termination::ReachedGoalSection);
        let last = path.points.last().unwrap();
        assert!((last.x - cfg.min_reach).abs() < 1e-12);
        let slope = -cfg.max_bearing.tan();
        for p in &path.points {
            assert!((p.y - slope * p.x).abs() <= cfg.dy, "{p:?}");
        }
    }

    #[test]
    fn nothing_ahead_is_workspace_edge() {
        let v = robot();
        let cfg = PlannerConfig {
            min_reach: 0.0,
            ..PlannerConfig::for_vehicle(&v, 1.0)
        };
        let path = plan_from(&v, &[], Point2::new(-1.0, 0.0), &cfg).unwrap();
        assert!(path.is_empty());
        assert_eq!(path.terminated, Termination::WorkspaceEdge);
    }

    #[test]
    fn deterministic() {
        let v = robot();
        let cfg = PlannerConfig {
            mode: Mode::Dynamic,
            ..PlannerConfig::for_vehicle(&v, 1.0)
        };
        let obs = [named(
            "m",
            rect(0.3, 0.2, 0.4, 0.3, Velocity2::new(0.0, -0.1)),
        )];
        let a = plan_from(&v, &obs, Point2::new(1.0, 0.0), &cfg).unwrap();
        let b = plan_from(&v, &obs, Point2::new(1.0, 0.0), &cfg).unwrap();
        assert_eq!(a, b);
    }
}
