//! Scenarios: the vehicle, its goal, the obstacles and run settings, plus
//! the TOML file format used to store them.
//!
//! Files may declare lengths in `m`, `cm` or `mm` (time is always seconds).
//! Everything is converted to meters on load and written back in meters.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use crate::geometry::{
    CircleObstacle, ConvexPolygonObstacle, GeometryError, Obstacle, Point2, VehicleFootprint,
    Velocity2,
};
use crate::guidance::RouteParams;
use crate::planner::{Mode, PlannerConfig};
use crate::simulator::SimConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedObstacle {
    pub id: String,
    pub obstacle: Obstacle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub vehicle: VehicleFootprint,
    /// Arc length from the vehicle center to the look-ahead point.
    pub lookahead: f64,
    pub goal: Point2,
    pub obstacles: Vec<NamedObstacle>,
    pub planner: PlannerConfig,
    pub sim: SimConfig,
}

impl Scenario {
    /// Vehicle and goal only, with every setting at its default.
    pub fn minimal(vehicle: VehicleFootprint, goal: Point2) -> Self {
        let distance = vehicle.position.distance(goal);
        Scenario {
            vehicle,
            lookahead: 0.75 * vehicle.length,
            goal,
            obstacles: Vec::new(),
            planner: PlannerConfig::for_vehicle(&vehicle, distance),
            sim: SimConfig::for_vehicle(&vehicle, distance),
        }
    }

    pub fn push_obstacle(&mut self, id: &str, obstacle: Obstacle) {
        self.obstacles.push(NamedObstacle {
            id: id.to_string(),
            obstacle,
        });
    }

    pub fn obstacle_shapes(&self) -> Vec<Obstacle> {
        self.obstacles.iter().map(|n| n.obstacle.clone()).collect()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Units { line: usize, message: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("line {line}: obstacle `{id}` is not convex at vertex {index} ({x}, {y})")]
    NonConvex {
        line: usize,
        id: String,
        index: usize,
        x: f64,
        y: f64,
    },
    #[error("line {line}: obstacle `{id}` is a circle but the planner is dynamic; set planner.circle_sides to approximate it")]
    CircleInDynamic { line: usize, id: String },
    #[error("line {line}: duplicate obstacle id `{id}`")]
    DuplicateId { line: usize, id: String },
}

impl ScenarioError {
    pub fn line(&self) -> usize {
        match self {
            ScenarioError::Syntax { line, .. }
            | ScenarioError::Units { line, .. }
            | ScenarioError::Invalid { line, .. }
            | ScenarioError::NonConvex { line, .. }
            | ScenarioError::CircleInDynamic { line, .. }
            | ScenarioError::DuplicateId { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    units: Option<Spanned<RawUnits>>,
    vehicle: Spanned<RawVehicle>,
    goal: Spanned<RawPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    planner: Option<Spanned<RawPlanner>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sim: Option<Spanned<RawSim>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    obstacles: Vec<Spanned<RawObstacle>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnits {
    #[serde(default)]
    length: Option<String>,
    #[serde(default)]
    time: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    x: f64,
    y: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPose {
    x: f64,
    y: f64,
    #[serde(default)]
    heading: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVehicle {
    length: f64,
    width: f64,
    pose: RawPose,
    #[serde(default)]
    speed: f64,
    v_max: f64,
    a_n_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lookahead: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVelocity {
    vx: f64,
    vy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObstacle {
    id: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    velocity: Option<RawVelocity>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlanner {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    #[serde(rename = "T_s", default, skip_serializing_if = "Option::is_none")]
    t_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y_max: Option<f64>,
    #[serde(rename = "T_h", default, skip_serializing_if = "Option::is_none")]
    t_h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    goal_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    circle_sides: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    link_check: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    min_reach: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_bearing: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    replan_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    goal_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    collision_audit: Option<bool>,
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())]
        .bytes()
        .filter(|&b| b == b'\n')
        .count()
        + 1
}

/// Meters per declared length unit.
fn length_scale(unit: &str) -> Option<f64> {
    match unit {
        "m" => Some(1.0),
        "cm" => Some(0.01),
        "mm" => Some(0.001),
        _ => None,
    }
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(1, |s| line_of(text, s.clone()));
        let column = e.span().map_or(1, |s| {
            let start = s.start.min(text.len());
            start - text[..start].rfind('\n').map_or(0, |i| i + 1) + 1
        });
        ScenarioError::Syntax {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let at = |span: Range<usize>| line_of(text, span);

    let mut k = 1.0;
    if let Some(u) = &raw.units {
        let line = at(u.span());
        let u = u.get_ref();
        if let Some(l) = &u.length {
            k = length_scale(l).ok_or_else(|| ScenarioError::Units {
                line,
                message: format!("length unit `{l}` is not one of m, cm, mm"),
            })?;
        }
        if let Some(t) = &u.time {
            if t != "s" {
                return Err(ScenarioError::Units {
                    line,
                    message: format!("time unit `{t}` is not supported; use s"),
                });
            }
        }
    }

    let finite = |line: usize, what: &str, vals: &[f64]| {
        if vals.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(ScenarioError::Invalid {
                line,
                message: format!("{what} must be finite"),
            })
        }
    };

    let vline = at(raw.vehicle.span());
    let rv = raw.vehicle.get_ref();
    finite(
        vline,
        "vehicle values",
        &[
            rv.length,
            rv.width,
            rv.pose.x,
            rv.pose.y,
            rv.pose.heading,
            rv.speed,
            rv.v_max,
            rv.a_n_max,
        ],
    )?;
    let vehicle = VehicleFootprint {
        length: rv.length * k,
        width: rv.width * k,
        position: Point2::new(rv.pose.x * k, rv.pose.y * k),
        heading: rv.pose.heading,
        speed: rv.speed * k,
        v_max: rv.v_max * k,
        a_n_max: rv.a_n_max * k,
    };
    vehicle.validate().map_err(|e| ScenarioError::Invalid {
        line: vline,
        message: e.to_string(),
    })?;
    let lookahead = match rv.lookahead {
        Some(l) if !(l.is_finite() && l > 0.0) => {
            return Err(ScenarioError::Invalid {
                line: vline,
                message: "lookahead must be positive".into(),
            })
        }
        Some(l) => l * k,
        None => 0.75 * vehicle.length,
    };

    let gline = at(raw.goal.span());
    let g = raw.goal.get_ref();
    finite(gline, "goal coordinates", &[g.x, g.y])?;
    let goal = Point2::new(g.x * k, g.y * k);
    let distance = vehicle.position.distance(goal);

    let mut planner = PlannerConfig::for_vehicle(&vehicle, distance);
    if let Some(p) = &raw.planner {
        let pline = at(p.span());
        let p = p.get_ref();
        let rp = RouteParams::new(
            p.t_s.unwrap_or(planner.route.t_s),
            p.alpha.unwrap_or(planner.route.alpha),
            p.beta.unwrap_or(planner.route.beta),
            p.gamma.unwrap_or(planner.route.gamma),
        )
        .map_err(|e| ScenarioError::Invalid {
            line: pline,
            message: e.to_string(),
        })?;
        planner = PlannerConfig {
            mode: p.mode.unwrap_or(planner.mode),
            route: rp,
            dx: p.dx.map_or(planner.dx, |v| v * k),
            dy: p.dy.map_or(planner.dy, |v| v * k),
            y_min: p.y_min.map_or(planner.y_min, |v| v * k),
            y_max: p.y_max.map_or(planner.y_max, |v| v * k),
            t_h: p.t_h.unwrap_or(planner.t_h),
            goal_tolerance: p.goal_tolerance.map_or(planner.goal_tolerance, |v| v * k),
            circle_sides: p.circle_sides.or(planner.circle_sides),
            link_check: p.link_check.unwrap_or(planner.link_check),
            min_reach: p.min_reach.map_or(planner.min_reach, |v| v * k),
            max_bearing: p.max_bearing.unwrap_or(planner.max_bearing),
        };
        planner.validate().map_err(|e| ScenarioError::Invalid {
            line: pline,
            message: e.to_string(),
        })?;
    }

    let mut sim = SimConfig::for_vehicle(&vehicle, distance);
    if let Some(s) = &raw.sim {
        let sline = at(s.span());
        let s = s.get_ref();
        sim = SimConfig {
            replan_fraction: s.replan_fraction.unwrap_or(sim.replan_fraction),
            dt: s.dt.unwrap_or(sim.dt),
            max_time: s.max_time.unwrap_or(sim.max_time),
            collision_audit: s.collision_audit.unwrap_or(sim.collision_audit),
            goal_tolerance: s.goal_tolerance.map_or(sim.goal_tolerance, |v| v * k),
        };
        sim.validate().map_err(|e| ScenarioError::Invalid {
            line: sline,
            message: e.to_string(),
        })?;
    }

    let mut obstacles: Vec<NamedObstacle> = Vec::with_capacity(raw.obstacles.len());
    for spanned in &raw.obstacles {
        let line = at(spanned.span());
        let o = spanned.get_ref();
        if obstacles.iter().any(|n| n.id == o.id) {
            return Err(ScenarioError::DuplicateId {
                line,
                id: o.id.clone(),
            });
        }
        let invalid = |message: String| ScenarioError::Invalid {
            line,
            message: format!("obstacle `{}`: {message}", o.id),
        };
        let velocity = o
            .velocity
            .as_ref()
            .map_or(Velocity2::ZERO, |v| Velocity2::new(v.vx * k, v.vy * k));
        let obstacle = match o.kind.as_str() {
            "polygon" => {
                if o.center.is_some() || o.radius.is_some() {
                    return Err(invalid(
                        "polygons take `vertices`, not `center`/`radius`".into(),
                    ));
                }
                let verts = o
                    .vertices
                    .as_ref()
                    .ok_or_else(|| invalid("missing `vertices`".into()))?;
                let pts: Vec<Point2> = verts
                    .iter()
                    .map(|v| Point2::new(v[0] * k, v[1] * k))
                    .collect();
                match ConvexPolygonObstacle::new(pts.clone(), velocity) {
                    Ok(p) => Obstacle::Polygon(p),
                    Err(GeometryError::NotConvex { index }) => {
                        return Err(ScenarioError::NonConvex {
                            line,
                            id: o.id.clone(),
                            index,
                            x: verts[index][0],
                            y: verts[index][1],
                        })
                    }
                    Err(e) => return Err(invalid(e.to_string())),
                }
            }
            "circle" => {
                if o.vertices.is_some() {
                    return Err(invalid(
                        "circles take `center` and `radius`, not `vertices`".into(),
                    ));
                }
                let c = o.center.ok_or_else(|| invalid("missing `center`".into()))?;
                let r = o.radius.ok_or_else(|| invalid("missing `radius`".into()))?;
                if planner.mode == Mode::Dynamic && planner.circle_sides.is_none() {
                    return Err(ScenarioError::CircleInDynamic {
                        line,
                        id: o.id.clone(),
                    });
                }
                let circle = CircleObstacle::new(Point2::new(c[0] * k, c[1] * k), r * k, velocity)
                    .map_err(|e| invalid(e.to_string()))?;
                Obstacle::Circle(circle)
            }
            other => {
                return Err(invalid(format!(
                    "unknown kind `{other}`; use polygon or circle"
                )))
            }
        };
        obstacles.push(NamedObstacle {
            id: o.id.clone(),
            obstacle,
        });
    }
    Ok(Scenario {
        vehicle,
        lookahead,
        goal,
        obstacles,
        planner,
        sim,
    })
}

fn spanned<T>(v: T) -> Spanned<T> {
    Spanned::new(0..0, v)
}

/// Writes a scenario in meters with every setting spelled out.
pub fn serialize_scenario(s: &Scenario) -> String {
    let v = &s.vehicle;
    let p = &s.planner;
    let raw = RawFile {
        units: Some(spanned(RawUnits {
            length: Some("m".into()),
            time: Some("s".into()),
        })),
        vehicle: spanned(RawVehicle {
            length: v.length,
            width: v.width,
            pose: RawPose {
                x: v.position.x,
                y: v.position.y,
                heading: v.heading,
            },
            speed: v.speed,
            v_max: v.v_max,
            a_n_max: v.a_n_max,
            lookahead: Some(s.lookahead),
        }),
        goal: spanned(RawPoint {
            x: s.goal.x,
            y: s.goal.y,
        }),
        planner: Some(spanned(RawPlanner {
            mode: Some(p.mode),
            t_s: Some(p.route.t_s),
            alpha: Some(p.route.alpha),
            beta: Some(p.route.beta),
            gamma: Some(p.route.gamma),
            dx: Some(p.dx),
            dy: Some(p.dy),
            y_min: Some(p.y_min),
            y_max: Some(p.y_max),
            t_h: Some(p.t_h),
            goal_tolerance: Some(p.goal_tolerance),
            circle_sides: p.circle_sides,
            link_check: Some(p.link_check),
            min_reach: Some(p.min_reach),
            max_bearing: Some(p.max_bearing),
        })),
        sim: Some(spanned(RawSim {
            replan_fraction: Some(s.sim.replan_fraction),
            dt: Some(s.sim.dt),
            max_time: Some(s.sim.max_time),
            goal_tolerance: Some(s.sim.goal_tolerance),
            collision_audit: Some(s.sim.collision_audit),
        })),
        obstacles: s
            .obstacles
            .iter()
            .map(|n| {
                let vel = n.obstacle.velocity();
                let velocity = Some(RawVelocity {
                    vx: vel.vx,
                    vy: vel.vy,
                });
                spanned(match &n.obstacle {
                    Obstacle::Polygon(poly) => RawObstacle {
                        id: n.id.clone(),
                        kind: "polygon".into(),
                        vertices: Some(poly.vertices().iter().map(|q| [q.x, q.y]).collect()),
                        center: None,
                        radius: None,
                        velocity,
                    },
                    Obstacle::Circle(c) => RawObstacle {
                        id: n.id.clone(),
                        kind: "circle".into(),
                        vertices: None,
                        center: Some([c.center.x, c.center.y]),
                        radius: Some(c.radius),
                        velocity,
                    },
                })
            })
            .collect(),
    };
    toml::to_string(&raw).expect("scenario values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[vehicle]
length = 0.3
width = 0.2
pose = { x = 0.0, y = 0.0 }
v_max = 0.2
a_n_max = 0.133

[goal]
x = 2.0
y = 0.5
"#;

    const FULL: &str = r#"
[units]
length = "mm"

[vehicle]
length = 100
width = 80
pose = { x = 0, y = 0, heading = 0.0 }
speed = 15
v_max = 20
a_n_max = 13.3

[goal]
x = 600
y = 150

[planner]
mode = "static"
T_s = 4
alpha = 1.1
beta = 0.1
gamma = 0.1

[[obstacles]]
id = "rect"
kind = "polygon"
vertices = [[200, -50], [300, -50], [300, 120], [200, 120]]

[[obstacles]]
id = "disc"
kind = "circle"
center = [450, 200]
radius = 40
velocity = { vx = 0, vy = -5 }
"#;

    #[test]
    fn minimal_file() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert!(s.obstacles.is_empty());
        assert_eq!(s.goal, Point2::new(2.0, 0.5));
        assert_eq!(s.lookahead, 0.75 * 0.3);
        assert_eq!(s.planner.dx, 0.3 / 4.0);
    }

    #[test]
    fn units_are_converted() {
        let s = parse_scenario(FULL).unwrap();
        assert!((s.vehicle.length - 0.1).abs() < 1e-15);
        assert!((s.vehicle.a_n_max - 0.0133).abs() < 1e-15);
        assert_eq!(
            s.planner.route,
            RouteParams::new(4.0, 1.1, 0.1, 0.1).unwrap()
        );
        match &s.obstacles[1].obstacle {
            Obstacle::Circle(c) => assert!((c.velocity.vy + 0.005).abs() < 1e-15),
            _ => panic!("expected a circle"),
        }
    }

    #[test]
    fn round_trip() {
        for text in [MINIMAL, FULL] {
            let s = parse_scenario(text).unwrap();
            let again = parse_scenario(&serialize_scenario(&s)).unwrap();
            assert_eq!(again, s);
        }
    }

    #[test]
    fn unknown_key_is_anchored() {
        let text = MINIMAL.replace("v_max = 0.2", "v_max = 0.2\nwheels = 4");
        match parse_scenario(&text).unwrap_err() {
            ScenarioError::Syntax { line, message, .. } => {
                assert_eq!(line, 7);
                assert!(message.contains("wheels"), "{message}");
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn bad_units() {
        let text = format!("[units]\nlength = \"ft\"\n{MINIMAL}");
        assert!(matches!(
            parse_scenario(&text),
            Err(ScenarioError::Units { line: 1, .. })
        ));
        let text = format!("[units]\ntime = \"ms\"\n{MINIMAL}");
        assert!(matches!(
            parse_scenario(&text),
            Err(ScenarioError::Units { .. })
        ));
    }

    #[test]
    fn reflex_vertex_is_named() {
        let text = format!(
            "{MINIMAL}\n[[obstacles]]\nid = \"dart\"\nkind = \"polygon\"\nvertices = [[0, 0], [2, 0], [1, 0.5], [1, 2]]\n"
        );
        match parse_scenario(&text).unwrap_err() {
            ScenarioError::NonConvex {
                id,
                index,
                x,
                y,
                line,
            } => {
                assert_eq!((id.as_str(), index, x, y), ("dart", 2, 1.0, 0.5));
                assert_eq!(line, 13);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn circle_needs_opt_in_when_dynamic() {
        let text = FULL.replace("mode = \"static\"", "mode = \"dynamic\"");
        assert!(matches!(
            parse_scenario(&text),
            Err(ScenarioError::CircleInDynamic { .. })
        ));
        let text = text.replace("gamma = 0.1", "gamma = 0.1\ncircle_sides = 12");
        assert_eq!(
            parse_scenario(&text).unwrap().planner.circle_sides,
            Some(12)
        );
    }

    #[test]
    fn duplicate_ids() {
        let text = FULL.replace("id = \"disc\"", "id = \"rect\"");
        assert!(matches!(
            parse_scenario(&text),
            Err(ScenarioError::DuplicateId { .. })
        ));
    }
}
