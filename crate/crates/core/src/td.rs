//! Time Distance fields.
//!
//! A time distance (TD) is the time left until a moving object reaches a
//! location under constant relative velocity, or `+∞` if it never does. The
//! closed forms below are written as explicit branches; the sign-gating
//! factors of the original expressions would otherwise divide by zero.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::geometry::{
    edge_normal_angle, segment_props, to_frame, velocity_heading, CircleObstacle,
    ConvexPolygonObstacle, GeometryError, Obstacle, Point2, SegmentEdge,
};

/// Extended non-negative real: a finite number of seconds or `+∞`.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct TdValue(f64);

impl TdValue {
    pub const ZERO: TdValue = TdValue(0.0);
    pub const INFINITY: TdValue = TdValue(f64::INFINITY);

    /// `None` for negative values and NaN.
    pub fn new(seconds: f64) -> Option<TdValue> {
        if seconds >= 0.0 {
            Some(TdValue(seconds))
        } else {
            None
        }
    }

    pub fn seconds(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn min(self, o: TdValue) -> TdValue {
        if o.0 < self.0 {
            o
        } else {
            self
        }
    }

    pub fn max(self, o: TdValue) -> TdValue {
        if o.0 > self.0 {
            o
        } else {
            self
        }
    }

    /// Multiplies a finite value; `+∞` stays `+∞`. `k` must be positive.
    pub fn scale(self, k: f64) -> TdValue {
        debug_assert!(k > 0.0);
        TdValue(self.0 * k)
    }
}

impl Eq for TdValue {}

impl Ord for TdValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("TdValue is never NaN")
    }
}

impl fmt::Debug for TdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TdValue({})", self)
    }
}

impl fmt::Display for TdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("inf")
        }
    }
}

/// Serialized as a number, or `null` for `+∞`.
impl Serialize for TdValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_finite() {
            s.serialize_some(&self.0)
        } else {
            s.serialize_none()
        }
    }
}

impl<'de> Deserialize<'de> for TdValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Option::<f64>::deserialize(d)? {
            None => Ok(TdValue::INFINITY),
            Some(v) => {
                TdValue::new(v).ok_or_else(|| serde::de::Error::custom("negative time distance"))
            }
        }
    }
}

/// Serde adapter for plain `f64` fields that may be `+∞`, using the same
/// number-or-`null` convention as [`TdValue`].
pub mod extended {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// One-dimensional TD of a point at `y_b`, moving at `v_rel`, to `y_target`.
///
/// | case                                   | value                  |
/// |----------------------------------------|------------------------|
/// | `y_target == y_b`                      | 0                      |
/// | `(y_target - y_b) / v_rel > 0`          | `(y_target - y_b) / v_rel` |
/// | otherwise (receding or `v_rel == 0`)   | `+∞`                   |
pub fn td_point_1d(y_target: f64, y_b: f64, v_rel: f64) -> TdValue {
    if y_target == y_b {
        return TdValue::ZERO;
    }
    if v_rel == 0.0 {
        return TdValue::INFINITY;
    }
    let t = (y_target - y_b) / v_rel;
    if t > 0.0 {
        TdValue(t)
    } else {
        TdValue::INFINITY
    }
}

/// Precomputed frame data for a segment translating with nonzero velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingSegmentTd {
    /// Motion direction.
    pub theta_prime: f64,
    /// Normal axis x''.
    pub theta_dprime: f64,
    /// Initial midpoint expressed in the x''-y'' frame.
    pub center0: Point2,
    pub length: f64,
    /// Velocity component along x''.
    pub v_xdprime: f64,
    /// `tan(θ' - θ'')`, slope of the swept band's center line.
    pub band_slope: f64,
}

impl MovingSegmentTd {
    /// Fails with [`GeometryError::NoHeading`] for a stationary edge.
    pub fn new(e: &SegmentEdge) -> Result<Self, GeometryError> {
        let theta_prime = velocity_heading(e.velocity)?;
        let theta_dprime = edge_normal_angle(e, false)?;
        let (center, length) = segment_props(e);
        let (s, c) = theta_dprime.sin_cos();
        Ok(MovingSegmentTd {
            theta_prime,
            theta_dprime,
            center0: to_frame(center, theta_dprime),
            length,
            v_xdprime: e.velocity.vx * c + e.velocity.vy * s,
            band_slope: (theta_prime - theta_dprime).tan(),
        })
    }

    /// Center of the swept band at normal coordinate `x_dd`.
    fn band_center(&self, x_dd: f64) -> f64 {
        let h = x_dd - self.center0.x;
        // a segment sliding along itself has an unbounded slope; only its own
        // line position h = 0 is meaningful then
        if h == 0.0 {
            self.center0.y
        } else {
            self.center0.y + h * self.band_slope
        }
    }

    /// Band membership (`Q_i = 1`), boundary inclusive.
    pub fn in_band(&self, p: Point2) -> bool {
        let q = to_frame(p, self.theta_dprime);
        (q.y - self.band_center(q.x)).abs() <= self.length / 2.0
    }
}

/// TD of a moving segment at `p`: `+∞` outside the swept band, otherwise the
/// 1D TD along the normal axis.
pub fn td_segment(p: Point2, ctx: &MovingSegmentTd) -> TdValue {
    let q = to_frame(p, ctx.theta_dprime);
    if (q.y - ctx.band_center(q.x)).abs() > ctx.length / 2.0 {
        return TdValue::INFINITY;
    }
    td_point_1d(q.x, ctx.center0.x, ctx.v_xdprime)
}

/// Tolerance for the on-boundary test of stationary obstacles.
const BOUNDARY_EPS: f64 = 1e-12;

fn on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    let d = b - a;
    let len = d.norm();
    let scale = 1.0 + a.norm().max(b.norm()).max(p.norm());
    if (d.cross(p - a) / len).abs() > BOUNDARY_EPS * scale {
        return false;
    }
    let t = d.dot(p - a) / (len * len);
    (-BOUNDARY_EPS..=1.0 + BOUNDARY_EPS).contains(&t)
}

/// TD of any edge, including stationary ones (0 on the segment, `+∞` elsewhere).
pub fn td_edge(p: Point2, e: &SegmentEdge) -> TdValue {
    match MovingSegmentTd::new(e) {
        Ok(ctx) => td_segment(p, &ctx),
        Err(_) => {
            if on_segment(p, e.q_r, e.q_l) {
                TdValue::ZERO
            } else {
                TdValue::INFINITY
            }
        }
    }
}

/// Minimum over the polygon's edges. All edges share the polygon's velocity.
pub fn td_polygon(p: Point2, poly: &ConvexPolygonObstacle) -> TdValue {
    poly.edges()
        .iter()
        .map(|e| td_edge(p, e))
        .min()
        .unwrap_or(TdValue::INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingCircleTd {
    pub theta_prime: f64,
    /// Initial center in the x'-y' (motion) frame.
    pub center0: Point2,
    pub radius: f64,
    pub speed: f64,
}

impl MovingCircleTd {
    pub fn new(c: &CircleObstacle) -> Result<Self, GeometryError> {
        let theta_prime = velocity_heading(c.velocity)?;
        Ok(MovingCircleTd {
            theta_prime,
            center0: to_frame(c.center, theta_prime),
            radius: c.radius,
            speed: c.velocity.vx.hypot(c.velocity.vy),
        })
    }
}

/// Band indicator from the imaginary part of `√(R² - Δy²)`: 1 when the root
/// is real. The radicand is factored so its sign is exact.
pub fn circle_band_indicator_imag(radius: f64, dy: f64) -> u8 {
    let radicand = (radius - dy.abs()) * (radius + dy.abs());
    let im = Complex64::new(radicand, 0.0).sqrt().im;
    if im == 0.0 {
        1
    } else {
        0
    }
}

/// Band indicator `sign(sign(R - |Δy|) + 1)`.
pub fn circle_band_indicator_sign(radius: f64, dy: f64) -> u8 {
    if radius - dy.abs() >= 0.0 {
        1
    } else {
        0
    }
}

/// TD of a moving circle: 1D TD of the point against the circle's leading
/// boundary along the motion axis.
pub fn td_circle(p: Point2, ctx: &MovingCircleTd) -> TdValue {
    let q = to_frame(p, ctx.theta_prime);
    let dy = q.y - ctx.center0.y;
    if circle_band_indicator_sign(ctx.radius, dy) == 0 {
        return TdValue::INFINITY;
    }
    let lead = ctx.center0.x + (ctx.radius * ctx.radius - dy * dy).max(0.0).sqrt();
    td_point_1d(q.x, lead, ctx.speed)
}

fn td_circle_any(p: Point2, c: &CircleObstacle) -> TdValue {
    match MovingCircleTd::new(c) {
        Ok(ctx) => td_circle(p, &ctx),
        Err(_) => {
            let d = (p - c.center).norm();
            if (d - c.radius).abs() <= BOUNDARY_EPS * (1.0 + c.radius) {
                TdValue::ZERO
            } else {
                TdValue::INFINITY
            }
        }
    }
}

/// TD of a single obstacle of any shape.
pub fn td_obstacle(p: Point2, o: &Obstacle) -> TdValue {
    match o {
        Obstacle::Polygon(poly) => td_polygon(p, poly),
        Obstacle::Circle(c) => td_circle_any(p, c),
    }
}

/// TD of a set: minimum over members, `+∞` for the empty set.
pub fn td_set(p: Point2, obstacles: &[Obstacle]) -> TdValue {
    obstacles
        .iter()
        .map(|o| td_obstacle(p, o))
        .min()
        .unwrap_or(TdValue::INFINITY)
}

/// An obstacle with its per-edge contexts computed once, for repeated queries.
#[derive(Debug, Clone, PartialEq)]
pub enum TdField {
    Segments(Vec<MovingSegmentTd>),
    Circle(MovingCircleTd),
    /// Stationary relative to the query frame.
    Stationary(Obstacle),
}

impl TdField {
    pub fn new(o: &Obstacle) -> TdField {
        if o.velocity().is_zero() {
            return TdField::Stationary(o.clone());
        }
        match o {
            Obstacle::Polygon(p) => TdField::Segments(
                p.edges()
                    .iter()
                    .map(|e| MovingSegmentTd::new(e).expect("nonzero velocity"))
                    .collect(),
            ),
            Obstacle::Circle(c) => {
                TdField::Circle(MovingCircleTd::new(c).expect("nonzero velocity"))
            }
        }
    }

    pub fn eval(&self, p: Point2) -> TdValue {
        match self {
            TdField::Segments(s) => s
                .iter()
                .map(|c| td_segment(p, c))
                .min()
                .unwrap_or(TdValue::INFINITY),
            TdField::Circle(c) => td_circle(p, c),
            TdField::Stationary(o) => td_obstacle(p, o),
        }
    }
}

/// Samples of a composed field along one section line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionProfile {
    pub x: f64,
    pub samples: Vec<(f64, TdValue)>,
}

impl SectionProfile {
    pub fn from_fn(x: f64, ys: impl IntoIterator<Item = f64>, f: impl Fn(f64) -> TdValue) -> Self {
        SectionProfile {
            x,
            samples: ys.into_iter().map(|y| (y, f(y))).collect(),
        }
    }
}

/// How a wide maximal plateau is resolved to a single location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TieRule {
    /// Sample closest to the goal line through the origin at bearing `delta`,
    /// then the smaller `y`.
    NearestGoalLine {
        delta: f64,
    },
    SmallestY,
}

impl Default for TieRule {
    fn default() -> Self {
        TieRule::NearestGoalLine { delta: 0.0 }
    }
}

/// Max-min selection on a section: returns the maximal value and the chosen
/// location. `None` for an empty profile.
pub fn section_argmax(profile: &SectionProfile, tie: TieRule) -> Option<(TdValue, f64)> {
    let best = profile.samples.iter().map(|s| s.1).max()?;
    let key = |y: f64| match tie {
        TieRule::NearestGoalLine { delta } => (y * delta.cos() - profile.x * delta.sin()).abs(),
        TieRule::SmallestY => 0.0,
    };
    profile
        .samples
        .iter()
        .filter(|s| s.1 == best)
        .min_by(|a, b| key(a.0).total_cmp(&key(b.0)).then(a.0.total_cmp(&b.0)))
        .map(|s| (best, s.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Velocity2;
    use approx::assert_abs_diff_eq;

    fn seg(a: (f64, f64), b: (f64, f64), v: (f64, f64)) -> SegmentEdge {
        SegmentEdge::new(
            Point2::new(a.0, a.1),
            Point2::new(b.0, b.1),
            Velocity2::new(v.0, v.1),
        )
        .unwrap()
    }

    fn square(cx: f64, cy: f64, half: f64, v: Velocity2) -> ConvexPolygonObstacle {
        ConvexPolygonObstacle::new(
            vec![
                Point2::new(cx - half, cy - half),
                Point2::new(cx + half, cy - half),
                Point2::new(cx + half, cy + half),
                Point2::new(cx - half, cy + half),
            ],
            v,
        )
        .unwrap()
    }

    #[test]
    fn point_1d_examples() {
        assert_eq!(td_point_1d(5.0, 2.0, 1.0), TdValue::new(3.0).unwrap());
        assert_eq!(td_point_1d(5.0, 2.0, -1.0), TdValue::INFINITY);
        assert_eq!(td_point_1d(2.0, 2.0, 0.0), TdValue::ZERO);
        assert_eq!(td_point_1d(3.0, 2.0, 0.0), TdValue::INFINITY);
    }

    #[test]
    fn segment_examples() {
        let ctx = MovingSegmentTd::new(&seg((0.0, -1.0), (0.0, 1.0), (1.0, 0.0))).unwrap();
        assert_abs_diff_eq!(
            td_segment(Point2::new(3.0, 0.0), &ctx).seconds(),
            3.0,
            epsilon = 1e-12
        );
        assert_eq!(td_segment(Point2::new(3.0, 1.5), &ctx), TdValue::INFINITY);
        // band edge is inclusive
        assert!(td_segment(Point2::new(3.0, 1.0), &ctx).is_finite());
        // behind the edge
        assert_eq!(td_segment(Point2::new(-1.0, 0.0), &ctx), TdValue::INFINITY);
    }

    #[test]
    fn sheared_band_segment() {
        // velocity (1, 0.5): center reaches x = 4 at t = 4, at height 2, so
        // the segment then spans y in [1, 3] and (4, 2) is hit at t = 4.
        let ctx = MovingSegmentTd::new(&seg((0.0, -1.0), (0.0, 1.0), (1.0, 0.5))).unwrap();
        assert_abs_diff_eq!(ctx.band_slope.abs(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            td_segment(Point2::new(4.0, 2.0), &ctx).seconds(),
            4.0,
            epsilon = 1e-12
        );
        assert_eq!(td_segment(Point2::new(4.0, 3.5), &ctx), TdValue::INFINITY);
    }

    #[test]
    fn stationary_edge_rule() {
        let e = seg((0.0, -1.0), (0.0, 1.0), (0.0, 0.0));
        assert_eq!(td_edge(Point2::new(0.0, 0.3), &e), TdValue::ZERO);
        assert_eq!(td_edge(Point2::new(0.5, 0.3), &e), TdValue::INFINITY);
    }

    #[test]
    fn polygon_examples() {
        let sq = square(5.0, 0.0, 0.5, Velocity2::new(-1.0, 0.0));
        assert_abs_diff_eq!(
            td_polygon(Point2::ORIGIN, &sq).seconds(),
            4.5,
            epsilon = 1e-12
        );
        assert_eq!(td_polygon(Point2::new(0.0, 3.0), &sq), TdValue::INFINITY);
    }

    #[test]
    fn circle_examples() {
        let c = CircleObstacle::new(Point2::new(5.0, 0.0), 1.0, Velocity2::new(-1.0, 0.0)).unwrap();
        let ctx = MovingCircleTd::new(&c).unwrap();
        assert_abs_diff_eq!(
            td_circle(Point2::ORIGIN, &ctx).seconds(),
            4.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            td_circle(Point2::new(0.0, 0.5), &ctx).seconds(),
            5.0 - 0.75_f64.sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            td_circle(Point2::new(0.0, 0.5), &ctx).seconds(),
            4.1340,
            epsilon = 1e-4
        );
        assert_eq!(td_circle(Point2::new(0.0, 1.5), &ctx), TdValue::INFINITY);
    }

    #[test]
    fn band_indicators_agree_at_boundary() {
        for &(r, dy) in &[
            (1.0, 1.0),
            (1.0, -1.0),
            (2.0, 0.0),
            (0.3, 0.30000000000000004),
            (0.7, 0.6999999999999),
        ] {
            assert_eq!(
                circle_band_indicator_imag(r, dy),
                circle_band_indicator_sign(r, dy),
                "r={r} dy={dy}"
            );
        }
    }

    #[test]
    fn set_examples() {
        assert_eq!(td_set(Point2::ORIGIN, &[]), TdValue::INFINITY);
        let c = Obstacle::Circle(
            CircleObstacle::new(Point2::new(5.0, 0.0), 1.0, Velocity2::new(-1.0, 0.0)).unwrap(),
        );
        let s = Obstacle::Polygon(square(5.0, 0.0, 0.5, Velocity2::new(-1.0, 0.0)));
        assert_abs_diff_eq!(
            td_set(Point2::ORIGIN, &[c.clone(), s.clone()]).seconds(),
            4.0,
            epsilon = 1e-12
        );
        assert_eq!(
            TdField::new(&s).eval(Point2::ORIGIN),
            td_obstacle(Point2::ORIGIN, &s)
        );
    }

    #[test]
    fn argmax_examples() {
        let p = SectionProfile {
            x: 1.0,
            samples: vec![
                (0.8, TdValue::new(2.0).unwrap()),
                (1.2, TdValue::new(6.0).unwrap()),
                (1.6, TdValue::new(3.0).unwrap()),
            ],
        };
        assert_eq!(
            section_argmax(&p, TieRule::default()),
            Some((TdValue::new(6.0).unwrap(), 1.2))
        );

        let flat =
            SectionProfile::from_fn(2.0, (-5..=5).map(|k| k as f64 * 0.5), |_| TdValue::INFINITY);
        assert_eq!(
            section_argmax(&flat, TieRule::default()),
            Some((TdValue::INFINITY, 0.0))
        );
        // tie between +0.5 and -0.5 around an off-grid goal line picks smaller y
        let two = SectionProfile::from_fn(0.0, [-0.5, 0.5], |_| TdValue::ZERO);
        assert_eq!(section_argmax(&two, TieRule::default()).unwrap().1, -0.5);
        assert_eq!(
            section_argmax(
                &SectionProfile {
                    x: 0.0,
                    samples: vec![]
                },
                TieRule::SmallestY
            ),
            None
        );
    }

    #[test]
    fn td_value_ordering_and_serde() {
        let a = TdValue::new(1.5).unwrap();
        assert!(a < TdValue::INFINITY);
        assert_eq!(a.min(TdValue::INFINITY), a);
        assert_eq!(a.max(TdValue::INFINITY), TdValue::INFINITY);
        assert!(TdValue::new(-1.0).is_none());
        assert!(TdValue::new(f64::NAN).is_none());
        let s = serde_json::to_string(&[a, TdValue::INFINITY]).unwrap();
        assert_eq!(s, "[1.5,null]");
        let back: Vec<TdValue> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![a, TdValue::INFINITY]);
    }
}
