use proptest::prelude::*;

use timedist_core::collision::{predict_ttc, predict_ttc_with, relativize, TtcMethod};
use timedist_core::geometry::{
    from_frame, inflate, to_frame, CircleObstacle, Frame, Obstacle, Point2, SegmentEdge, Velocity2,
};
use timedist_core::guidance::{zinf_polygon, ZInfValue};
use timedist_core::oracle::{oracle_td, oracle_td_segment, OracleConfig};
use timedist_core::scenes::{random_convex_polygon, rng, ttc_scene};
use timedist_core::td::{
    section_argmax, td_edge, td_obstacle, td_polygon, td_set, SectionProfile, TdValue, TieRule,
};
use timedist_core::trajectory::{fit_quintic, speed_profile, QuinticEnds};

fn point(range: f64) -> impl Strategy<Value = Point2> {
    (-range..range, -range..range).prop_map(|(x, y)| Point2::new(x, y))
}

fn velocity() -> impl Strategy<Value = Velocity2> {
    (0.05f64..3.0, -3.2f64..3.2).prop_map(|(s, a)| Velocity2::from_heading(s, a))
}

fn polygon() -> impl Strategy<Value = Obstacle> {
    (any::<u64>(), point(2.0), 0.1f64..1.5, velocity()).prop_map(|(seed, c, r, v)| {
        Obstacle::Polygon(random_convex_polygon(&mut rng(seed), c, r, v))
    })
}

fn circle() -> impl Strategy<Value = Obstacle> {
    (point(2.0), 0.05f64..1.5, velocity())
        .prop_map(|(c, r, v)| Obstacle::Circle(CircleObstacle::new(c, r, v).unwrap()))
}

fn obstacle() -> impl Strategy<Value = Obstacle> {
    prop_oneof![polygon(), circle()]
}

fn close(a: TdValue, b: TdValue, tol: f64) -> bool {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => (a.seconds() - b.seconds()).abs() <= tol * (1.0 + a.seconds()),
        (false, false) => true,
        _ => false,
    }
}

/// Away from the band edges, where a rounding error may flip `+∞`.
fn well_inside_or_outside(o: &Obstacle, p: Point2) -> bool {
    let probe = |q: Point2| td_obstacle(q, o).is_finite();
    let here = probe(p);
    let v = o.velocity().as_vector();
    let side = v.perp() * (1e-6 / v.norm());
    probe(p + side) == here && probe(p - side) == here
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn frame_round_trip(p in point(100.0), theta in -10.0f64..10.0, origin in point(10.0)) {
        let back = from_frame(to_frame(p, theta), theta);
        prop_assert!((back - p).norm() <= 1e-12 * (1.0 + p.norm()));
        let f = Frame::new(origin, theta);
        prop_assert!((f.to_parent(f.to_local(p)) - p).norm() <= 1e-12 * (1.0 + p.norm() + origin.norm()));
        let v = Velocity2::new(p.x, p.y);
        let w = f.velocity_to_parent(f.velocity_to_local(v));
        prop_assert!((w.vx - v.vx).abs() + (w.vy - v.vy).abs() <= 1e-12 * (1.0 + p.norm()));
    }

    #[test]
    fn td_is_a_nonnegative_time_or_infinite(o in obstacle(), p in point(6.0)) {
        let t = td_obstacle(p, &o);
        prop_assert!(t.is_infinite() || (t.seconds() >= 0.0 && t.seconds().is_finite()));
    }

    #[test]
    fn speeding_up_divides_td(o in obstacle(), p in point(6.0), k in 0.2f64..5.0) {
        prop_assume!(well_inside_or_outside(&o, p));
        let fast = o.with_velocity(o.velocity().scaled(k));
        let slow = td_obstacle(p, &o);
        let t = td_obstacle(p, &fast);
        if slow.is_finite() {
            prop_assert!(close(t, TdValue::new(slow.seconds() / k).unwrap(), 1e-9), "{slow} / {k} vs {t}");
        } else {
            prop_assert!(t.is_infinite());
        }
    }

    #[test]
    fn rigid_motion_leaves_td_unchanged(o in obstacle(), p in point(6.0), d in point(5.0), theta in -3.2f64..3.2) {
        prop_assume!(well_inside_or_outside(&o, p));
        let frame = Frame::new(d, theta);
        let moved = o.to_local(&frame);
        prop_assert!(close(td_obstacle(p, &o), td_obstacle(frame.to_local(p), &moved), 1e-9));
    }

    #[test]
    fn adding_an_obstacle_never_raises_td_set(a in obstacle(), b in obstacle(), p in point(6.0)) {
        let one = td_set(p, std::slice::from_ref(&a));
        let two = td_set(p, &[a.clone(), b.clone()]);
        prop_assert!(two <= one);
        prop_assert_eq!(two, td_obstacle(p, &a).min(td_obstacle(p, &b)));
        prop_assert_eq!(td_set(p, &[]), TdValue::INFINITY);
    }

    #[test]
    fn polygon_td_is_its_smallest_edge(o in polygon(), p in point(6.0)) {
        let Obstacle::Polygon(poly) = &o else { unreachable!() };
        let t = td_polygon(p, poly);
        let edges: Vec<TdValue> = poly.edges().iter().map(|e| td_edge(p, e)).collect();
        prop_assert!(edges.iter().all(|&e| t <= e));
        prop_assert!(edges.contains(&t));
    }

    #[test]
    fn inflation_is_monotone(o in obstacle(), p in point(4.0), r1 in 0.0f64..0.3, extra in 0.0f64..0.3) {
        let small = inflate(&o, r1).unwrap();
        let big = inflate(&o, r1 + extra).unwrap();
        if o.contains(p) {
            prop_assert!(small.contains(p));
        }
        if small.contains(p) {
            prop_assert!(big.contains(p));
        }
    }

    #[test]
    fn zinf_polygon_is_zero_exactly_on_the_closed_shape(o in polygon(), p in point(3.0)) {
        let Obstacle::Polygon(poly) = &o else { unreachable!() };
        prop_assert_eq!(zinf_polygon(p, poly) == ZInfValue::Zero, poly.contains(p));
    }

    #[test]
    fn section_argmax_matches_a_linear_scan(values in prop::collection::vec(prop::option::of(0.0f64..10.0), 1..60)) {
        let samples: Vec<(f64, TdValue)> = values
            .iter()
            .enumerate()
            .map(|(i, v)| (i as f64 * 0.1 - 2.0, v.map_or(TdValue::INFINITY, |s| TdValue::new(s).unwrap())))
            .collect();
        let profile = SectionProfile { x: 1.0, samples: samples.clone() };
        let (best, y) = section_argmax(&profile, TieRule::SmallestY).unwrap();
        let mut dense = samples[0];
        for &s in &samples[1..] {
            if s.1 > dense.1 {
                dense = s;
            }
        }
        prop_assert_eq!(best, dense.1);
        prop_assert_eq!(y, dense.0);
    }

    #[test]
    fn quintic_meets_its_boundary_conditions(
        end in (0.05f64..2.0, -1.0f64..1.0),
        slope in -3.0f64..3.0,
        ypp in -5.0f64..5.0,
    ) {
        let ends = QuinticEnds { start_ypp: ypp, end: Point2::new(end.0, end.1), end_slope: slope };
        let q = fit_quintic(&ends).unwrap();
        let scale = 1.0 + end.1.abs() + slope.abs() + ypp.abs();
        prop_assert!(q.y(0.0).abs() < 1e-9 * scale && q.dy(0.0).abs() < 1e-9 * scale);
        prop_assert!((q.d2y(0.0) - ypp).abs() < 1e-7 * scale);
        prop_assert!((q.y(end.0) - end.1).abs() < 1e-9 * scale);
        prop_assert!((q.dy(end.0) - slope).abs() < 1e-7 * scale);
        prop_assert!(q.d2y(end.0).abs() < 1e-6 * scale / end.0);
        let profile = speed_profile(&q, 0.2, 0.133, q.length() / 50.0);
        prop_assert!(profile.windows(2).all(|w| w[1].s > w[0].s || w[1].s == q.length()));
        for s in &profile {
            prop_assert!(s.v_d <= 0.2 && s.v_d * s.v_d <= 0.133 * s.rho + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn ttc_is_the_smallest_obstacle_value(seed in any::<u64>()) {
        let s = ttc_scene(seed);
        let scene = relativize(&s);
        let full = predict_ttc(&scene);
        let sampled = predict_ttc_with(&scene, TtcMethod::BorderSamples);
        let per = full.per_obstacle.iter().map(|o| o.ttc).min().unwrap();
        prop_assert_eq!(full.ttc, per);
        prop_assert!(full.ttc <= sampled.ttc);
        let shapes: Vec<Obstacle> = scene.obstacles.iter().map(|n| n.obstacle.clone()).collect();
        let border = scene.border_points.iter().map(|&p| td_set(p, &shapes)).min().unwrap();
        prop_assert_eq!(sampled.ttc, border);
        prop_assert_eq!(full.critical_point.is_some(), full.ttc.is_finite());
    }

    #[test]
    fn segment_td_bounds_the_oracle(a in point(2.0), b in point(2.0), v in velocity(), p in point(4.0)) {
        let Ok(e) = SegmentEdge::new(a, b, v) else { return Ok(()) };
        let cfg = OracleConfig::new(1e-3, 20.0);
        let t = td_edge(p, &e);
        let o = oracle_td_segment(p, &e, &cfg);
        if t.is_finite() && t.seconds() < 20.0 - 1e-3 {
            prop_assert!(o.is_finite() && (o.seconds() - t.seconds()).abs() <= 2e-3, "{t} vs {o}");
        } else if t.is_infinite() {
            prop_assert!(o.is_infinite());
        }
    }

    #[test]
    fn circle_td_bounds_the_oracle(o in circle(), p in point(5.0)) {
        prop_assume!(!o.contains(p));
        let cfg = OracleConfig::new(1e-3, 20.0);
        let t = td_obstacle(p, &o);
        let brute = oracle_td(p, &o, &cfg);
        if t.is_finite() && t.seconds() < 20.0 - 1e-3 {
            prop_assert!(brute.is_finite() && (brute.seconds() - t.seconds()).abs() <= 2e-3);
        } else if t.is_infinite() {
            prop_assert!(brute.is_infinite());
        }
    }
}
