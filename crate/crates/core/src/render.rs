//! SVG drawings of scenes, plans and simulation logs in world coordinates.

use std::fmt::Write as _;

use crate::geometry::{inflate, Obstacle, Point2, VehicleFootprint};
use crate::planner::PathPolyline;
use crate::scenario::Scenario;
use crate::simulator::SimLog;
use crate::trajectory::Trajectory;

const PX_PER_M: f64 = 800.0;
const MARGIN: f64 = 20.0;

enum Shape {
    Polygon {
        points: Vec<Point2>,
        style: &'static str,
    },
    Circle {
        center: Point2,
        radius: f64,
        style: &'static str,
    },
    Line {
        points: Vec<Point2>,
        style: &'static str,
    },
}

/// Collects world-space shapes, then fits them into a y-up picture.
#[derive(Default)]
pub struct Canvas {
    shapes: Vec<Shape>,
    title: Option<String>,
}

impl Canvas {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn title(&mut self, text: impl Into<String>) -> &mut Self {
        self.title = Some(text.into());
        self
    }

    pub fn obstacle(&mut self, o: &Obstacle, style: &'static str) -> &mut Self {
        self.shapes.push(match o {
            Obstacle::Polygon(p) => Shape::Polygon {
                points: p.vertices().to_vec(),
                style,
            },
            Obstacle::Circle(c) => Shape::Circle {
                center: c.center,
                radius: c.radius,
                style,
            },
        });
        self
    }

    pub fn polygon(&mut self, points: Vec<Point2>, style: &'static str) -> &mut Self {
        self.shapes.push(Shape::Polygon { points, style });
        self
    }

    pub fn polyline(&mut self, points: Vec<Point2>, style: &'static str) -> &mut Self {
        if points.len() > 1 {
            self.shapes.push(Shape::Line { points, style });
        }
        self
    }

    pub fn dot(&mut self, at: Point2, radius: f64, style: &'static str) -> &mut Self {
        self.shapes.push(Shape::Circle {
            center: at,
            radius,
            style,
        });
        self
    }

    pub fn vehicle(&mut self, v: &VehicleFootprint, style: &'static str) -> &mut Self {
        self.polygon(v.corners().to_vec(), style)
    }

    fn bounds(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: Point2, r: f64| {
            lo = Point2::new(lo.x.min(p.x - r), lo.y.min(p.y - r));
            hi = Point2::new(hi.x.max(p.x + r), hi.y.max(p.y + r));
        };
        for s in &self.shapes {
            match s {
                Shape::Polygon { points, .. } | Shape::Line { points, .. } => {
                    points.iter().for_each(|&p| grow(p, 0.0))
                }
                Shape::Circle { center, radius, .. } => grow(*center, *radius),
            }
        }
        if !lo.x.is_finite() {
            return (Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0));
        }
        (lo, hi)
    }

    pub fn to_svg(&self) -> String {
        let (lo, hi) = self.bounds();
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-6);
        let scale = PX_PER_M.min(1600.0 / span);
        let w = (hi.x - lo.x) * scale + 2.0 * MARGIN;
        let h = (hi.y - lo.y) * scale + 2.0 * MARGIN;
        let map = |p: Point2| ((p.x - lo.x) * scale + MARGIN, (hi.y - p.y) * scale + MARGIN);
        let pts = |ps: &[Point2]| {
            ps.iter()
                .map(|&p| {
                    let (x, y) = map(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        if let Some(t) = &self.title {
            let _ = writeln!(out, r#"<title>{}</title>"#, escape(t));
        }
        for s in &self.shapes {
            match s {
                Shape::Polygon { points, style } => {
                    let _ = writeln!(
                        out,
                        r#"<polygon points="{}" style="{style}"/>"#,
                        pts(points)
                    );
                }
                Shape::Line { points, style } => {
                    let _ = writeln!(
                        out,
                        r#"<polyline points="{}" style="fill:none;{style}"/>"#,
                        pts(points)
                    );
                }
                Shape::Circle {
                    center,
                    radius,
                    style,
                } => {
                    let (x, y) = map(*center);
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" style="{style}"/>"#,
                        radius * scale
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub const OBSTACLE: &str = "fill:#9a9a9a;stroke:#303030;stroke-width:1";
pub const INFLATED: &str = "fill:none;stroke:#d08030;stroke-width:1;stroke-dasharray:4 3";
pub const GHOST: &str =
    "fill:#e0a0a0;fill-opacity:0.25;stroke:#c04040;stroke-width:0.8;stroke-dasharray:2 2";
pub const PATH: &str = "stroke:#2050d0;stroke-width:1.5";
pub const OLD_PATH: &str = "stroke:#2050d0;stroke-opacity:0.2;stroke-width:0.8";
pub const TRAJECTORY: &str = "stroke:#d02020;stroke-width:1.5";
pub const TRACK: &str = "stroke:#108040;stroke-width:2";
pub const VEHICLE: &str = "fill:#40a0f0;fill-opacity:0.5;stroke:#103060;stroke-width:1";
pub const GOAL: &str = "fill:#20a020;stroke:black;stroke-width:0.5";

/// Obstacles, their configuration-space outlines, the vehicle and the goal.
pub fn scene(canvas: &mut Canvas, scenario: &Scenario) {
    let r = scenario.vehicle.inflation_radius();
    for n in &scenario.obstacles {
        canvas.obstacle(&n.obstacle, OBSTACLE);
        if let Ok(big) = inflate(&n.obstacle, r) {
            canvas.obstacle(&big, INFLATED);
        }
    }
    canvas.vehicle(&scenario.vehicle, VEHICLE);
    canvas.dot(scenario.goal, scenario.vehicle.width / 6.0, GOAL);
}

/// Scene with one planned path and, optionally, its smoothed segment.
pub fn plan_svg(
    scenario: &Scenario,
    path: &PathPolyline,
    trajectory: Option<&Trajectory>,
) -> String {
    let mut c = Canvas::new();
    c.title(format!(
        "plan ({} points, {:?})",
        path.points.len(),
        path.terminated
    ));
    scene(&mut c, scenario);
    c.polyline(path.global_vertices(), PATH);
    if let Some(tr) = trajectory {
        c.polyline(
            tr.samples
                .iter()
                .map(|s| tr.frame.to_parent(s.position))
                .collect(),
            TRAJECTORY,
        );
    }
    c.to_svg()
}

/// Whole run: start scene, every replanned path faintly, the future-relative
/// ghosts of the first plan, the tracked trajectory, final obstacle
/// positions and the final footprint.
pub fn log_svg(log: &SimLog) -> String {
    let mut c = Canvas::new();
    c.title(format!(
        "{} run: {} after {:.2} s, {:.3} m",
        log.mode, log.outcome, log.duration, log.path_length
    ));
    scene(&mut c, &log.scenario);
    for n in &log.scenario.obstacles {
        if !n.obstacle.velocity().is_zero() {
            c.obstacle(&n.obstacle.advanced(log.duration), GHOST);
        }
    }
    for r in &log.replans {
        c.polyline(r.path.global_vertices(), OLD_PATH);
    }
    if let Some(first) = log.replans.first() {
        for g in &first.ghosts {
            c.polygon(g.clone(), GHOST);
        }
        c.polyline(first.path.global_vertices(), PATH);
    }
    c.polyline(log.positions(), TRACK);
    if let Some(last) = log.samples.last() {
        let v = VehicleFootprint {
            position: last.position,
            heading: last.heading,
            ..log.scenario.vehicle
        };
        c.vehicle(&v, VEHICLE);
    }
    c.to_svg()
}

/// One frame of a run: the world at `log.replans[k].t` with that plan.
pub fn frame_svg(log: &SimLog, k: usize) -> Option<String> {
    let r = log.replans.get(k)?;
    let mut c = Canvas::new();
    c.title(format!("t = {:.2} s", r.t));
    let mut now = log.scenario.clone();
    for n in &mut now.obstacles {
        n.obstacle = n.obstacle.advanced(r.t);
    }
    now.vehicle.position = r.path.frame.origin;
    now.vehicle.heading = r.path.frame.rotation;
    scene(&mut c, &now);
    for g in &r.ghosts {
        c.polygon(g.clone(), GHOST);
    }
    let done: Vec<Point2> = log
        .samples
        .iter()
        .take_while(|s| s.t <= r.t)
        .map(|s| s.position)
        .collect();
    c.polyline(done, TRACK);
    c.polyline(r.path.global_vertices(), PATH);
    c.polyline(
        r.trajectory
            .samples
            .iter()
            .map(|s| r.trajectory.frame.to_parent(s.position))
            .collect(),
        TRAJECTORY,
    );
    Some(c.to_svg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenes::two_obstacle_scene;
    use crate::simulator::plan_once;

    #[test]
    fn plan_drawing_is_stable() {
        let s = two_obstacle_scene();
        let path = plan_once(&s, &s.planner).unwrap();
        let a = plan_svg(&s, &path, None);
        assert_eq!(a, plan_svg(&s, &path, None));
        assert!(a.starts_with("<svg"));
        assert_eq!(a.matches("<polygon").count(), 1 + 1 + 1);
        assert_eq!(a.matches("<circle").count(), 2 + 1);
    }

    #[test]
    fn empty_canvas_still_draws() {
        assert!(Canvas::new().to_svg().contains("</svg>"));
    }
}
