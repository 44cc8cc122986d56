//! Look-ahead targeting, quintic smoothing and the curvature speed law.

use nalgebra::{Matrix6, Vector6};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Frame, Point2};
use crate::planner::PathPolyline;

#[derive(Debug, Error, PartialEq)]
pub enum TrajectoryError {
    #[error("look-ahead x must be positive, got {0}")]
    NonPositiveReach(f64),
    #[error("boundary data must be finite")]
    NonFinite,
}

/// Minimum turning radius at full speed: `v_max² / a_n_max`.
pub fn rho_min(v_max: f64, a_n_max: f64) -> f64 {
    v_max * v_max / a_n_max
}

/// Fastest speed that keeps lateral acceleration within `a_n_max` on a
/// curve of radius `rho`, capped at `v_max`.
pub fn desired_speed(rho: f64, v_max: f64, a_n_max: f64) -> f64 {
    v_max.min((a_n_max * rho).sqrt())
}

/// Polyline walk: the point `distance` along the path from the vehicle,
/// or the last point if the path is shorter.
pub fn lookahead_point(path: &PathPolyline, distance: f64) -> Point2 {
    lookahead(path, distance).point
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LookaheadTarget {
    pub point: Point2,
    /// `dy/dx` of the polyline piece holding the point.
    pub slope: f64,
}

pub fn lookahead(path: &PathPolyline, distance: f64) -> LookaheadTarget {
    along_polyline(&path.vertices(), distance)
}

pub(crate) fn along_polyline(v: &[Point2], distance: f64) -> LookaheadTarget {
    let slope = |a: Point2, b: Point2| {
        if b.x != a.x {
            (b.y - a.y) / (b.x - a.x)
        } else {
            0.0
        }
    };
    let mut left = distance.max(0.0);
    for w in v.windows(2) {
        let len = w[0].distance(w[1]);
        if left <= len && len > 0.0 {
            return LookaheadTarget {
                point: w[0].lerp(w[1], left / len),
                slope: slope(w[0], w[1]),
            };
        }
        left -= len;
    }
    let n = v.len();
    match n {
        0 => LookaheadTarget {
            point: Point2::ORIGIN,
            slope: 0.0,
        },
        1 => LookaheadTarget {
            point: v[0],
            slope: 0.0,
        },
        _ => LookaheadTarget {
            point: v[n - 1],
            slope: slope(v[n - 2], v[n - 1]),
        },
    }
}

/// `y(x) = Σ c_k x^k` on `[0, x_l]` in the vehicle frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuinticSegment {
    pub coeffs: [f64; 6],
    pub x_l: f64,
}

/// Boundary data for the fit. The start is the vehicle: `y = y′ = 0` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuinticEnds {
    /// Second derivative carried over from the previous trajectory.
    pub start_ypp: f64,
    pub end: Point2,
    pub end_slope: f64,
}

fn row(x: f64, deriv: usize) -> [f64; 6] {
    let mut r = [0.0; 6];
    for (k, slot) in r.iter_mut().enumerate().skip(deriv) {
        let falling: f64 = (0..deriv).map(|j| (k - j) as f64).product();
        *slot = falling * x.powi((k - deriv) as i32);
    }
    r
}

pub fn fit_quintic(ends: &QuinticEnds) -> Result<QuinticSegment, TrajectoryError> {
    let x_l = ends.end.x;
    if ![x_l, ends.end.y, ends.end_slope, ends.start_ypp]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(TrajectoryError::NonFinite);
    }
    if x_l <= 0.0 {
        return Err(TrajectoryError::NonPositiveReach(x_l));
    }
    let rows = [
        row(0.0, 0),
        row(0.0, 1),
        row(0.0, 2),
        row(x_l, 0),
        row(x_l, 1),
        row(x_l, 2),
    ];
    let a = Matrix6::from_fn(|i, j| rows[i][j]);
    let b = Vector6::new(0.0, 0.0, ends.start_ypp, ends.end.y, ends.end_slope, 0.0);
    let c = a
        .lu()
        .solve(&b)
        .ok_or(TrajectoryError::NonPositiveReach(x_l))?;
    Ok(QuinticSegment {
        coeffs: [c[0], c[1], c[2], c[3], c[4], c[5]],
        x_l,
    })
}

// 5-point Gauss-Legendre nodes and weights on [-1, 1]
const GL_X: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_W: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];
const ARC_PANELS: usize = 16;

impl QuinticSegment {
    fn horner(c: &[f64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
    }

    pub fn y(&self, x: f64) -> f64 {
        Self::horner(&self.coeffs, x)
    }

    pub fn dy(&self, x: f64) -> f64 {
        let c = &self.coeffs;
        Self::horner(&[c[1], 2.0 * c[2], 3.0 * c[3], 4.0 * c[4], 5.0 * c[5]], x)
    }

    pub fn d2y(&self, x: f64) -> f64 {
        let c = &self.coeffs;
        Self::horner(&[2.0 * c[2], 6.0 * c[3], 12.0 * c[4], 20.0 * c[5]], x)
    }

    /// Signed curvature of the graph, 1/m.
    pub fn curvature(&self, x: f64) -> f64 {
        let d = self.dy(x);
        self.d2y(x) / (1.0 + d * d).powf(1.5)
    }

    pub fn heading(&self, x: f64) -> f64 {
        self.dy(x).atan()
    }

    /// Arc length from 0 to `x`.
    pub fn arc_length(&self, x: f64) -> f64 {
        let h = x / ARC_PANELS as f64;
        (0..ARC_PANELS)
            .map(|i| {
                let mid = (i as f64 + 0.5) * h;
                GL_X.iter()
                    .zip(GL_W)
                    .map(|(&t, w)| {
                        let d = self.dy(mid + 0.5 * h * t);
                        w * (1.0 + d * d).sqrt()
                    })
                    .sum::<f64>()
                    * 0.5
                    * h
            })
            .sum()
    }

    pub fn length(&self) -> f64 {
        self.arc_length(self.x_l)
    }

    /// Abscissa at arc length `s`, clamped to the segment.
    pub fn x_at(&self, s: f64) -> f64 {
        let total = self.length();
        if s <= 0.0 {
            return 0.0;
        }
        if s >= total {
            return self.x_l;
        }
        let (mut lo, mut hi) = (0.0, self.x_l);
        let mut x = self.x_l * s / total;
        for _ in 0..60 {
            let f = self.arc_length(x) - s;
            if f.abs() < 1e-13 {
                break;
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = self.dy(x);
            let next = x - f / (1.0 + d * d).sqrt();
            x = if next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    /// Arc length from the trajectory start.
    pub s: f64,
    pub position: Point2,
    pub heading: f64,
    pub curvature: f64,
    /// `1/|κ|`, infinite on straight stretches (serialized as null).
    #[serde(with = "crate::td::extended")]
    pub rho: f64,
    pub v_d: f64,
}

pub fn sample_at(seg: &QuinticSegment, s: f64, v_max: f64, a_n_max: f64) -> TrajectorySample {
    let x = seg.x_at(s);
    let k = seg.curvature(x);
    let rho = if k == 0.0 {
        f64::INFINITY
    } else {
        1.0 / k.abs()
    };
    TrajectorySample {
        s,
        position: Point2::new(x, seg.y(x)),
        heading: seg.heading(x),
        curvature: k,
        rho,
        v_d: desired_speed(rho, v_max, a_n_max),
    }
}

/// Samples every `step` of arc length, both ends included.
pub fn speed_profile(
    seg: &QuinticSegment,
    v_max: f64,
    a_n_max: f64,
    step: f64,
) -> Vec<TrajectorySample> {
    assert!(step > 0.0, "sampling step must be positive");
    let total = seg.length();
    let n = (total / step).ceil().max(1.0) as usize;
    (0..=n)
        .map(|i| sample_at(seg, (i as f64 * step).min(total), v_max, a_n_max))
        .collect()
}

/// A fitted segment anchored at the pose it was planned from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub frame: Frame,
    pub segment: QuinticSegment,
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn length(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.s)
    }

    pub fn global_points(&self) -> Vec<Point2> {
        self.samples
            .iter()
            .map(|s| self.frame.to_parent(s.position))
            .collect()
    }
}

/// Largest end slope, relative to the chord slope `y_l / x_l`, for which the
/// quintic with zero start curvature never crosses to the far side of the
/// axis. Steeper polyline jumps are clipped to it.
pub const MAX_END_SLOPE_RATIO: f64 = 2.5;

/// Clips a polyline slope for use as the quintic end condition.
pub fn end_slope_limit(target: Point2, slope: f64) -> f64 {
    let m = MAX_END_SLOPE_RATIO * (target.y / target.x).abs();
    slope.clamp(-m, m)
}

/// Fits the look-ahead segment for `path` and samples it at
/// `distance / 50` spacing.
pub fn plan_trajectory(
    path: &PathPolyline,
    distance: f64,
    start_curvature: f64,
    v_max: f64,
    a_n_max: f64,
) -> Result<Trajectory, TrajectoryError> {
    let target = lookahead(path, distance);
    let end_slope = end_slope_limit(target.point, target.slope);
    let segment = fit_quintic(&QuinticEnds {
        start_ypp: start_curvature,
        end: target.point,
        end_slope,
    })?;
    let samples = speed_profile(&segment, v_max, a_n_max, distance / 50.0);
    Ok(Trajectory {
        frame: path.frame,
        segment,
        samples,
    })
}
