//! Planar primitives, frame rotations and configuration-obstacle inflation.
//!
//! Every other module works on top of these types. Lengths are meters, times
//! seconds, angles radians normalized to `(-π, π]`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest vertex angle for which a miter join is accepted during inflation.
pub const MIN_MITER_ANGLE: f64 = 5.0 * PI / 180.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("zero velocity has no heading")]
    NoHeading,
    #[error("degenerate edge: endpoints coincide at ({x}, {y})")]
    DegenerateEdge { x: f64, y: f64 },
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {index} repeats an earlier vertex")]
    RepeatedVertex { index: usize },
    #[error("polygon is not strictly convex: vertex {index} is reflex or collinear")]
    NotConvex { index: usize },
    #[error("circle radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("negative inflation radius {0}")]
    NegativeInflation(f64),
    #[error("vertex {index} angle {angle_deg:.2} deg is too sharp to inflate; split the obstacle")]
    MiterBlowUp { index: usize, angle_deg: f64 },
    #[error("invalid vehicle footprint: {0}")]
    BadFootprint(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Velocity2 {
    pub vx: f64,
    pub vy: f64,
}

impl Velocity2 {
    pub const ZERO: Velocity2 = Velocity2 { vx: 0.0, vy: 0.0 };

    pub const fn new(vx: f64, vy: f64) -> Self {
        Velocity2 { vx, vy }
    }

    pub fn from_heading(speed: f64, heading: f64) -> Self {
        Velocity2::new(speed * heading.cos(), speed * heading.sin())
    }

    pub fn speed(self) -> f64 {
        self.vx.hypot(self.vy)
    }

    pub fn is_zero(self) -> bool {
        self.vx == 0.0 && self.vy == 0.0
    }

    pub fn as_vector(self) -> Point2 {
        Point2::new(self.vx, self.vy)
    }

    /// Displacement covered in `dt` seconds.
    pub fn displacement(self, dt: f64) -> Point2 {
        Point2::new(self.vx * dt, self.vy * dt)
    }

    pub fn scaled(self, k: f64) -> Velocity2 {
        Velocity2::new(self.vx * k, self.vy * k)
    }
}

impl Sub for Velocity2 {
    type Output = Velocity2;
    fn sub(self, o: Velocity2) -> Velocity2 {
        Velocity2::new(self.vx - o.vx, self.vy - o.vy)
    }
}

impl Add for Velocity2 {
    type Output = Velocity2;
    fn add(self, o: Velocity2) -> Velocity2 {
        Velocity2::new(self.vx + o.vx, self.vy + o.vy)
    }
}

impl Neg for Velocity2 {
    type Output = Velocity2;
    fn neg(self) -> Velocity2 {
        Velocity2::new(-self.vx, -self.vy)
    }
}

/// Normalizes an angle into `(-π, π]`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Coordinates of `p` in a frame rotated by `theta` (same origin).
///
/// `[x'; y'] = [cos θ, sin θ; -sin θ, cos θ] [x; y]`
pub fn to_frame(p: Point2, theta: f64) -> Point2 {
    let (s, c) = theta.sin_cos();
    Point2::new(p.x * c + p.y * s, -p.x * s + p.y * c)
}

/// Inverse of [`to_frame`].
pub fn from_frame(p: Point2, theta: f64) -> Point2 {
    to_frame(p, -theta)
}

pub fn velocity_to_frame(v: Velocity2, theta: f64) -> Velocity2 {
    let p = to_frame(v.as_vector(), theta);
    Velocity2::new(p.x, p.y)
}

/// Direction of motion. The two-argument arctangent covers `vx = 0`, where
/// the single-argument form with sign correction is undefined.
pub fn velocity_heading(v: Velocity2) -> Result<f64, GeometryError> {
    if v.is_zero() {
        return Err(GeometryError::NoHeading);
    }
    Ok(normalize_angle(v.vy.atan2(v.vx)))
}

/// A rigid frame: origin plus x-axis angle, both measured in the parent frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub rotation: f64,
    pub origin: Point2,
}

impl Frame {
    pub fn new(origin: Point2, rotation: f64) -> Self {
        Frame {
            rotation: normalize_angle(rotation),
            origin,
        }
    }

    pub fn to_local(&self, p: Point2) -> Point2 {
        to_frame(p - self.origin, self.rotation)
    }

    pub fn to_parent(&self, p: Point2) -> Point2 {
        from_frame(p, self.rotation) + self.origin
    }

    pub fn velocity_to_local(&self, v: Velocity2) -> Velocity2 {
        velocity_to_frame(v, self.rotation)
    }

    pub fn velocity_to_parent(&self, v: Velocity2) -> Velocity2 {
        velocity_to_frame(v, -self.rotation)
    }
}

/// A moving line segment. Standing at the midpoint facing the outward
/// normal, `q_r` is on the right and `q_l` on the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentEdge {
    pub q_r: Point2,
    pub q_l: Point2,
    pub velocity: Velocity2,
}

impl SegmentEdge {
    pub fn new(q_r: Point2, q_l: Point2, velocity: Velocity2) -> Result<Self, GeometryError> {
        if !(q_r.is_finite() && q_l.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if q_r == q_l {
            return Err(GeometryError::DegenerateEdge { x: q_r.x, y: q_r.y });
        }
        Ok(SegmentEdge { q_r, q_l, velocity })
    }
}

/// Angle of the edge's normal axis x''.
///
/// `outward = false` follows the TD convention `atan(dy/dx) + π/2`, where the
/// orientation of x'' is irrelevant. `outward = true` orients +x'' away from
/// the polygon given the `q_r`/`q_l` ordering.
pub fn edge_normal_angle(e: &SegmentEdge, outward: bool) -> Result<f64, GeometryError> {
    let d = e.q_r - e.q_l;
    if d.x == 0.0 && d.y == 0.0 {
        return Err(GeometryError::DegenerateEdge {
            x: e.q_r.x,
            y: e.q_r.y,
        });
    }
    // atan of the slope, with the dx = 0 limit taken from the sign of dy.
    let slope_angle = if d.x == 0.0 {
        FRAC_PI_2.copysign(d.y)
    } else {
        (d.y / d.x).atan()
    };
    let angle = if outward {
        // sign(sign(dx) + 0.5) is +1 for dx >= 0 and -1 otherwise.
        if d.x >= 0.0 {
            slope_angle + FRAC_PI_2
        } else {
            slope_angle - FRAC_PI_2
        }
    } else {
        slope_angle + FRAC_PI_2
    };
    Ok(normalize_angle(angle))
}

/// Midpoint and length of an edge.
pub fn segment_props(e: &SegmentEdge) -> (Point2, f64) {
    let center = Point2::new((e.q_r.x + e.q_l.x) / 2.0, (e.q_r.y + e.q_l.y) / 2.0);
    let length = ((e.q_r.x - e.q_l.x).powi(2) + (e.q_r.y - e.q_l.y).powi(2)).sqrt();
    (center, length)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygonObstacle {
    vertices: Vec<Point2>,
    pub velocity: Velocity2,
}

impl ConvexPolygonObstacle {
    /// Validates strict convexity. Clockwise input is reversed so vertices
    /// are always stored counter-clockwise.
    pub fn new(mut vertices: Vec<Point2>, velocity: Velocity2) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if vertices.iter().any(|v| !v.is_finite())
            || !(velocity.vx.is_finite() && velocity.vy.is_finite())
        {
            return Err(GeometryError::NonFinite);
        }
        for i in 1..n {
            if vertices[..i].contains(&vertices[i]) {
                return Err(GeometryError::RepeatedVertex { index: i });
            }
        }
        let turn = |i: usize| {
            let a = vertices[(i + n - 1) % n];
            let b = vertices[i];
            let c = vertices[(i + 1) % n];
            (b - a).cross(c - b)
        };
        let orientation = signed_area(&vertices).signum();
        for i in 0..n {
            if turn(i) * orientation <= 0.0 {
                return Err(GeometryError::NotConvex { index: i });
            }
        }
        // a star-shaped vertex ordering passes the turn test but winds twice
        let total: f64 = (0..n)
            .map(|i| {
                let a = vertices[(i + n - 1) % n];
                let b = vertices[i];
                let c = vertices[(i + 1) % n];
                (b - a).cross(c - b).atan2((b - a).dot(c - b))
            })
            .sum();
        if (total.abs() - 2.0 * PI).abs() > 1e-6 {
            return Err(GeometryError::NotConvex { index: 0 });
        }
        if orientation < 0.0 {
            vertices.reverse();
        }
        Ok(ConvexPolygonObstacle { vertices, velocity })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    /// Edges with outward-facing `q_r`/`q_l` ordering: for CCW vertices the
    /// edge from `v[k]` to `v[k+1]` has `q_r = v[k]` and `q_l = v[k+1]`.
    pub fn edges(&self) -> Vec<SegmentEdge> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| SegmentEdge {
                q_r: self.vertices[k],
                q_l: self.vertices[(k + 1) % n],
                velocity: self.velocity,
            })
            .collect()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).abs()
    }

    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len() as f64;
        let s = self.vertices.iter().fold(Point2::ORIGIN, |acc, &v| acc + v);
        s * (1.0 / n)
    }

    pub fn translated(&self, d: Point2) -> Self {
        ConvexPolygonObstacle {
            vertices: self.vertices.iter().map(|&v| v + d).collect(),
            velocity: self.velocity,
        }
    }

    /// Re-expresses vertices and velocity in `frame`.
    pub fn to_local(&self, frame: &Frame) -> Self {
        ConvexPolygonObstacle {
            vertices: self.vertices.iter().map(|&v| frame.to_local(v)).collect(),
            velocity: frame.velocity_to_local(self.velocity),
        }
    }

    pub fn with_velocity(&self, velocity: Velocity2) -> Self {
        ConvexPolygonObstacle {
            vertices: self.vertices.clone(),
            velocity,
        }
    }

    /// Inclusive half-plane containment test.
    pub fn contains(&self, p: Point2) -> bool {
        let n = self.vertices.len();
        (0..n).all(|k| {
            let a = self.vertices[k];
            let b = self.vertices[(k + 1) % n];
            (b - a).cross(p - a) >= 0.0
        })
    }
}

pub(crate) fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleObstacle {
    pub center: Point2,
    pub radius: f64,
    pub velocity: Velocity2,
}

impl CircleObstacle {
    pub fn new(center: Point2, radius: f64, velocity: Velocity2) -> Result<Self, GeometryError> {
        if !center.is_finite()
            || !radius.is_finite()
            || !(velocity.vx.is_finite() && velocity.vy.is_finite())
        {
            return Err(GeometryError::NonFinite);
        }
        if radius <= 0.0 {
            return Err(GeometryError::BadRadius(radius));
        }
        Ok(CircleObstacle {
            center,
            radius,
            velocity,
        })
    }

    /// Polygon with `sides` edges tangent to the circle, so the circle is
    /// contained in it.
    pub fn circumscribed_polygon(
        &self,
        sides: usize,
    ) -> Result<ConvexPolygonObstacle, GeometryError> {
        let sides = sides.max(3);
        let r = self.radius / (PI / sides as f64).cos();
        let vertices = (0..sides)
            .map(|k| {
                let a = 2.0 * PI * (k as f64 + 0.5) / sides as f64;
                self.center + Point2::new(a.cos(), a.sin()) * r
            })
            .collect();
        ConvexPolygonObstacle::new(vertices, self.velocity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstacle {
    Polygon(ConvexPolygonObstacle),
    Circle(CircleObstacle),
}

impl Obstacle {
    pub fn velocity(&self) -> Velocity2 {
        match self {
            Obstacle::Polygon(p) => p.velocity,
            Obstacle::Circle(c) => c.velocity,
        }
    }

    pub fn with_velocity(&self, v: Velocity2) -> Obstacle {
        match self {
            Obstacle::Polygon(p) => Obstacle::Polygon(p.with_velocity(v)),
            Obstacle::Circle(c) => Obstacle::Circle(CircleObstacle {
                velocity: v,
                ..c.clone()
            }),
        }
    }

    pub fn translated(&self, d: Point2) -> Obstacle {
        match self {
            Obstacle::Polygon(p) => Obstacle::Polygon(p.translated(d)),
            Obstacle::Circle(c) => Obstacle::Circle(CircleObstacle {
                center: c.center + d,
                ..c.clone()
            }),
        }
    }

    pub fn to_local(&self, frame: &Frame) -> Obstacle {
        match self {
            Obstacle::Polygon(p) => Obstacle::Polygon(p.to_local(frame)),
            Obstacle::Circle(c) => Obstacle::Circle(CircleObstacle {
                center: frame.to_local(c.center),
                radius: c.radius,
                velocity: frame.velocity_to_local(c.velocity),
            }),
        }
    }

    /// Obstacle advanced by its own velocity for `t` seconds.
    pub fn advanced(&self, t: f64) -> Obstacle {
        self.translated(self.velocity().displacement(t))
    }

    pub fn reference_point(&self) -> Point2 {
        match self {
            Obstacle::Polygon(p) => p.centroid(),
            Obstacle::Circle(c) => c.center,
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        match self {
            Obstacle::Polygon(poly) => poly.contains(p),
            Obstacle::Circle(c) => (p - c.center).norm() <= c.radius,
        }
    }

    /// Whether the closed segment `a`-`b` touches the closed shape.
    pub fn meets_segment(&self, a: Point2, b: Point2) -> bool {
        self.segment_span(a, b).is_some()
    }

    /// Parameter interval `[t0, t1] ⊆ [0, 1]` of `a + t·(b - a)` lying in
    /// the closed shape.
    pub fn segment_span(&self, a: Point2, b: Point2) -> Option<(f64, f64)> {
        match self {
            Obstacle::Polygon(poly) => polygon_segment_span(a, b, poly),
            Obstacle::Circle(c) => {
                let d = b - a;
                let f = a - c.center;
                let (qa, qb, qc) = (d.dot(d), 2.0 * f.dot(d), f.dot(f) - c.radius * c.radius);
                if qa == 0.0 {
                    return (qc <= 0.0).then_some((0.0, 1.0));
                }
                let disc = qb * qb - 4.0 * qa * qc;
                if disc < 0.0 {
                    return None;
                }
                let r = disc.sqrt();
                let (lo, hi) = (
                    ((-qb - r) / (2.0 * qa)).max(0.0),
                    ((-qb + r) / (2.0 * qa)).min(1.0),
                );
                (lo <= hi).then_some((lo, hi))
            }
        }
    }

    /// Distance from `p` to the boundary when `p` is inside, else 0.
    pub fn depth(&self, p: Point2) -> f64 {
        match self {
            Obstacle::Polygon(poly) => {
                let v = poly.vertices();
                let inner = (0..v.len())
                    .map(|k| {
                        let e = v[(k + 1) % v.len()] - v[k];
                        e.cross(p - v[k]) / e.norm()
                    })
                    .fold(f64::INFINITY, f64::min);
                inner.max(0.0)
            }
            Obstacle::Circle(c) => (c.radius - p.distance(c.center)).max(0.0),
        }
    }
}

/// Whether the closed segment `a`-`b` touches the convex polygon.
pub fn segment_meets_polygon(a: Point2, b: Point2, poly: &ConvexPolygonObstacle) -> bool {
    polygon_segment_span(a, b, poly).is_some()
}

/// Parametric clipping of `a + t·(b - a)`, `t ∈ [0, 1]`, against every
/// edge half-plane.
fn polygon_segment_span(a: Point2, b: Point2, poly: &ConvexPolygonObstacle) -> Option<(f64, f64)> {
    let v = poly.vertices();
    let d = b - a;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for k in 0..v.len() {
        let e = v[(k + 1) % v.len()] - v[k];
        let n = Point2::new(e.y, -e.x);
        let num = n.dot(a - v[k]);
        let den = n.dot(d);
        if den == 0.0 {
            if num > 0.0 {
                return None;
            }
        } else if den > 0.0 {
            hi = hi.min(-num / den);
        } else {
            lo = lo.max(-num / den);
        }
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

/// A rectangular vehicle and its kinematic limits. `length` runs along the
/// heading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleFootprint {
    pub length: f64,
    pub width: f64,
    pub position: Point2,
    pub heading: f64,
    pub speed: f64,
    pub v_max: f64,
    pub a_n_max: f64,
}

impl VehicleFootprint {
    pub fn validate(&self) -> Result<(), GeometryError> {
        let finite = [
            self.length,
            self.width,
            self.heading,
            self.speed,
            self.v_max,
            self.a_n_max,
        ]
        .iter()
        .all(|v| v.is_finite())
            && self.position.is_finite();
        if !finite {
            return Err(GeometryError::NonFinite);
        }
        if self.length <= 0.0 || self.width <= 0.0 {
            return Err(GeometryError::BadFootprint(
                "length and width must be positive",
            ));
        }
        if self.v_max <= 0.0 || self.a_n_max <= 0.0 {
            return Err(GeometryError::BadFootprint(
                "v_max and a_n_max must be positive",
            ));
        }
        if self.speed < 0.0 || self.speed > self.v_max {
            return Err(GeometryError::BadFootprint("speed must lie in [0, v_max]"));
        }
        Ok(())
    }

    /// Vehicle-fixed frame: origin at the geometric center, x along heading.
    pub fn frame(&self) -> Frame {
        Frame::new(self.position, self.heading)
    }

    pub fn velocity(&self) -> Velocity2 {
        Velocity2::from_heading(self.speed, self.heading)
    }

    /// Circumscribed-circle radius, used as the configuration-space inflation.
    pub fn inflation_radius(&self) -> f64 {
        0.5 * self.length.hypot(self.width)
    }

    /// Corners in the vehicle frame, counter-clockwise from rear-right.
    pub fn local_corners(&self) -> [Point2; 4] {
        let (hl, hw) = (self.length / 2.0, self.width / 2.0);
        [
            Point2::new(-hl, -hw),
            Point2::new(hl, -hw),
            Point2::new(hl, hw),
            Point2::new(-hl, hw),
        ]
    }

    /// Corners in the parent frame.
    pub fn corners(&self) -> [Point2; 4] {
        let f = self.frame();
        self.local_corners().map(|c| f.to_parent(c))
    }

    pub fn polygon(&self) -> ConvexPolygonObstacle {
        ConvexPolygonObstacle::new(self.corners().to_vec(), self.velocity())
            .expect("validated footprint is a rectangle")
    }
}

/// Intersection of the lines `a + s·da` and `b + t·db`.
fn line_intersection(a: Point2, da: Point2, b: Point2, db: Point2) -> Option<Point2> {
    let den = da.cross(db);
    if den == 0.0 {
        return None;
    }
    let s = (b - a).cross(db) / den;
    Some(a + da * s)
}

/// Grows an obstacle by `r`: circles gain radius, polygon edges move outward
/// by `r` and adjacent offset lines are intersected (miter join).
pub fn inflate(obstacle: &Obstacle, r: f64) -> Result<Obstacle, GeometryError> {
    if !(r >= 0.0) {
        return Err(GeometryError::NegativeInflation(r));
    }
    match obstacle {
        Obstacle::Circle(c) => Ok(Obstacle::Circle(CircleObstacle {
            radius: c.radius + r,
            ..c.clone()
        })),
        Obstacle::Polygon(p) => inflate_polygon(p, r).map(Obstacle::Polygon),
    }
}

pub fn inflate_polygon(
    p: &ConvexPolygonObstacle,
    r: f64,
) -> Result<ConvexPolygonObstacle, GeometryError> {
    if !(r >= 0.0) {
        return Err(GeometryError::NegativeInflation(r));
    }
    let v = p.vertices();
    let n = v.len();
    for i in 0..n {
        let a = v[(i + n - 1) % n] - v[i];
        let b = v[(i + 1) % n] - v[i];
        let angle = a.cross(b).abs().atan2(a.dot(b));
        if angle < MIN_MITER_ANGLE {
            return Err(GeometryError::MiterBlowUp {
                index: i,
                angle_deg: angle.to_degrees(),
            });
        }
    }
    if r == 0.0 {
        return Ok(p.clone());
    }
    // Offset edge k runs from v[k] to v[k+1]; CCW means outward is the right side.
    let offset: Vec<(Point2, Point2)> = (0..n)
        .map(|k| {
            let d = v[(k + 1) % n] - v[k];
            let out = Point2::new(d.y, -d.x) * (1.0 / d.norm());
            (v[k] + out * r, d)
        })
        .collect();
    let vertices = (0..n)
        .map(|i| {
            let (a, da) = offset[(i + n - 1) % n];
            let (b, db) = offset[i];
            line_intersection(a, da, b, db).ok_or(GeometryError::MiterBlowUp {
                index: i,
                angle_deg: 180.0,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    ConvexPolygonObstacle::new(vertices, p.velocity)
}

/// Convex hull (Andrew's monotone chain), counter-clockwise, collinear points dropped.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(pts.len() * 2);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - b) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}
