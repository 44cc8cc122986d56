//! Reproducible scene generators: hand-built demonstration scenes and
//! seeded random families used by the acceptance runs and the CLI.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{
    inflate, CircleObstacle, ConvexPolygonObstacle, Obstacle, Point2, VehicleFootprint, Velocity2,
};
use crate::planner::Mode;
use crate::scenario::Scenario;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// 100 mm × 80 mm indoor robot creeping at 15 mm/s.
pub fn small_robot() -> VehicleFootprint {
    VehicleFootprint {
        length: 0.1,
        width: 0.08,
        position: Point2::ORIGIN,
        heading: 0.0,
        speed: 0.015,
        v_max: 0.015,
        a_n_max: 0.0045,
    }
}

/// 30 cm × 20 cm robot, 20 cm/s top speed, 13.3 cm/s² lateral limit.
pub fn mid_robot() -> VehicleFootprint {
    VehicleFootprint {
        length: 0.3,
        width: 0.2,
        position: Point2::ORIGIN,
        heading: 0.0,
        speed: 0.2,
        v_max: 0.2,
        a_n_max: 0.133,
    }
}

/// Convex polygon with `5..=7` vertices jittered around a circle. Interior
/// angles stay above roughly 80°, so mitered inflation stays compact.
pub fn random_convex_polygon(
    rng: &mut impl Rng,
    center: Point2,
    radius: f64,
    velocity: Velocity2,
) -> ConvexPolygonObstacle {
    let n = rng.random_range(5..=7);
    let step = 2.0 * PI / n as f64;
    let phase = rng.random_range(0.0..2.0 * PI);
    let vertices = (0..n)
        .map(|k| {
            let a = phase + k as f64 * step + rng.random_range(-0.2..0.2) * step;
            center + Point2::new(a.cos(), a.sin()) * radius
        })
        .collect();
    ConvexPolygonObstacle::new(vertices, velocity).expect("jittered cyclic polygon is convex")
}

pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolygonObstacle {
    ConvexPolygonObstacle::new(
        vec![
            Point2::new(x0, y0),
            Point2::new(x1, y0),
            Point2::new(x1, y1),
            Point2::new(x0, y1),
        ],
        Velocity2::ZERO,
    )
    .expect("axis-aligned rectangle")
}

fn facing(mut v: VehicleFootprint, goal: Point2) -> VehicleFootprint {
    v.heading = (goal.y - v.position.y).atan2(goal.x - v.position.x);
    v
}

/// Bounding radius of an obstacle about its reference point.
pub fn reach(o: &Obstacle) -> f64 {
    match o {
        Obstacle::Polygon(p) => {
            let c = p.centroid();
            p.vertices()
                .iter()
                .map(|v| v.distance(c))
                .fold(0.0, f64::max)
        }
        Obstacle::Circle(c) => c.radius,
    }
}

/// Two static obstacles, a tall rectangle across the goal line and a disc
/// beyond it, between a small robot and its goal.
pub fn two_obstacle_scene() -> Scenario {
    let goal = Point2::new(0.6, 0.15);
    let mut s = Scenario::minimal(facing(small_robot(), goal), goal);
    s.push_obstacle("rect", Obstacle::Polygon(rect(0.16, -0.08, 0.24, 0.1)));
    let disc =
        CircleObstacle::new(Point2::new(0.44, 0.27), 0.04, Velocity2::ZERO).expect("valid disc");
    s.push_obstacle("disc", Obstacle::Circle(disc));
    s.planner.circle_sides = Some(12);
    s
}

/// A mid-size robot crossing the path of two moving blocks.
pub fn crossing_scene() -> Scenario {
    let goal = Point2::new(2.0, 0.4);
    let mut s = Scenario::minimal(mid_robot(), goal);
    s.planner.mode = Mode::Dynamic;
    let a = random_convex_polygon(
        &mut rng(27),
        Point2::new(0.9, 0.9),
        0.12,
        Velocity2::new(0.0, -0.08),
    );
    s.push_obstacle("a", Obstacle::Polygon(a));
    let b = ConvexPolygonObstacle::new(
        vec![
            Point2::new(1.4, -0.7),
            Point2::new(1.6, -0.7),
            Point2::new(1.6, -0.5),
            Point2::new(1.4, -0.5),
        ],
        Velocity2::new(-0.02, 0.06),
    )
    .expect("square");
    s.push_obstacle("b", Obstacle::Polygon(b));
    s
}

/// Places obstacles from `make` until `count` fit. Configuration outlines
/// (inflated by the vehicle) keep at least `gap` meters between their
/// bounding discs and stay clear of start and goal. Returns `None` if
/// placement keeps failing.
fn place(
    rng: &mut ChaCha8Rng,
    s: &mut Scenario,
    count: usize,
    gap: f64,
    mut make: impl FnMut(&mut ChaCha8Rng) -> Obstacle,
) -> Option<()> {
    let start = s.vehicle.position;
    let r = s.vehicle.inflation_radius();
    let outline = |o: &Obstacle| {
        let c = o.reference_point();
        let big = inflate(o, r).expect("generated shapes inflate");
        let far = match &big {
            Obstacle::Polygon(p) => p
                .vertices()
                .iter()
                .map(|v| v.distance(c))
                .fold(0.0, f64::max),
            Obstacle::Circle(k) => k.radius,
        };
        (c, far)
    };
    let mut placed: Vec<(Point2, f64)> = s.obstacles.iter().map(|n| outline(&n.obstacle)).collect();
    let mut tries = 0;
    while s.obstacles.len() < count {
        tries += 1;
        if tries > 20_000 {
            return None;
        }
        let o = make(rng);
        let (c, far) = outline(&o);
        if c.distance(start) < far + gap || c.distance(s.goal) < far + gap {
            continue;
        }
        if placed
            .iter()
            .all(|&(c2, far2)| c.distance(c2) >= far + far2 + gap)
        {
            let id = format!("o{}", s.obstacles.len());
            s.push_obstacle(&id, o);
            placed.push((c, far));
        }
    }
    Some(())
}

/// Two to four static obstacles near the straight line to a goal 0.6 to
/// 0.9 m away, with corridors between configuration outlines no narrower
/// than the distance the robot covers in `T_s`.
pub fn sparse_static_scene(seed: u64) -> Scenario {
    let mut rng = rng(seed);
    loop {
        let len = rng.random_range(0.6..0.9);
        let goal = Point2::new(len, rng.random_range(-0.2..0.2));
        let mut s = Scenario::minimal(facing(small_robot(), goal), goal);
        s.planner.circle_sides = Some(12);
        let n = rng.random_range(2..=4);
        // corridors at least as wide as the robot travels in T_s
        let gap = s.vehicle.v_max * s.planner.route.t_s;
        let ok = place(&mut rng, &mut s, n, gap, |rng| {
            let t = rng.random_range(0.2..0.8);
            let c = goal * t + goal.perp() * (rng.random_range(-0.25..0.25) / goal.norm());
            if rng.random_bool(0.3) {
                Obstacle::Circle(
                    CircleObstacle::new(c, rng.random_range(0.03..0.06), Velocity2::ZERO).unwrap(),
                )
            } else {
                Obstacle::Polygon({
                    let r = rng.random_range(0.04..0.08);
                    random_convex_polygon(rng, c, r, Velocity2::ZERO)
                })
            }
        });
        if ok.is_some() {
            return s;
        }
    }
}

/// Twenty static obstacles on a 1.5 m square map, every pair separated by
/// more than two inflation radii; the robot starts at the origin and the
/// goal is the far corner.
pub fn cluttered_scene(seed: u64) -> Scenario {
    let mut rng = rng(seed);
    loop {
        let goal = Point2::new(1.5, 1.5);
        let mut s = Scenario::minimal(facing(small_robot(), goal), goal);
        s.planner.y_min = -1.2;
        s.planner.y_max = 1.2;
        s.sim.max_time *= 2.0;
        let ok = place(&mut rng, &mut s, 20, 0.01, |rng| {
            let c = Point2::new(rng.random_range(0.1..1.4), rng.random_range(0.1..1.4));
            Obstacle::Polygon({
                let r = rng.random_range(0.03..0.07);
                random_convex_polygon(rng, c, r, Velocity2::ZERO)
            })
        });
        if ok.is_some() {
            return s;
        }
    }
}

/// A mid-size robot heading for a goal 2 m away while one to three
/// polygons cross its way at up to 10 cm/s; some scenes add a parked one.
pub fn dynamic_scene(seed: u64) -> Scenario {
    let mut rng = rng(seed);
    loop {
        let goal = Point2::new(2.0, rng.random_range(-0.3..0.3));
        let mut s = Scenario::minimal(mid_robot(), goal);
        s.planner.mode = Mode::Dynamic;
        let movers = rng.random_range(1..=3);
        let parked = usize::from(rng.random_bool(0.3));
        let clear = 0.05;
        let ok = place(&mut rng, &mut s, movers, clear, |rng| {
            let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let c = Point2::new(
                rng.random_range(0.7..1.7),
                side * rng.random_range(0.6..1.1),
            );
            let v = Velocity2::new(
                rng.random_range(-0.03..0.03),
                -side * rng.random_range(0.03..0.1),
            );
            Obstacle::Polygon({
                let r = rng.random_range(0.08..0.15);
                random_convex_polygon(rng, c, r, v)
            })
        });
        let ok = ok.and_then(|_| {
            place(&mut rng, &mut s, movers + parked, clear, |rng| {
                let c = Point2::new(rng.random_range(0.6..1.6), rng.random_range(-0.4..0.4));
                Obstacle::Polygon({
                    let r = rng.random_range(0.06..0.12);
                    random_convex_polygon(rng, c, r, Velocity2::ZERO)
                })
            })
        });
        if ok.is_some() {
            return s;
        }
    }
}

/// Vehicle of random size, pose and speed with four moving obstacles, half
/// of them aimed roughly at it. No obstacle touches the vehicle at `t = 0`.
pub fn ttc_scene(seed: u64) -> Scenario {
    let mut rng = rng(seed);
    let vehicle = VehicleFootprint {
        length: rng.random_range(0.3..0.8),
        width: rng.random_range(0.15..0.4),
        position: Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        heading: rng.random_range(-PI..PI),
        speed: rng.random_range(0.0..1.0),
        v_max: 1.0,
        a_n_max: 1.0,
    };
    let mut s = Scenario::minimal(vehicle, vehicle.position + Point2::new(10.0, 0.0));
    while s.obstacles.len() < 4 {
        let bearing = rng.random_range(-PI..PI);
        let dist = rng.random_range(1.2..5.0);
        let c = vehicle.position + Point2::new(bearing.cos(), bearing.sin()) * dist;
        let aim = if rng.random_bool(0.5) {
            (vehicle.position - c).y.atan2((vehicle.position - c).x)
                + rng.random_range(-FRAC_PI_4..FRAC_PI_4) / 2.0
        } else {
            rng.random_range(-PI..PI)
        };
        let v = Velocity2::from_heading(rng.random_range(0.1..1.5), aim);
        let o = if rng.random_bool(0.3) {
            Obstacle::Circle(CircleObstacle::new(c, rng.random_range(0.1..0.4), v).unwrap())
        } else {
            Obstacle::Polygon({
                let r = rng.random_range(0.15..0.5);
                random_convex_polygon(&mut rng, c, r, v)
            })
        };
        if c.distance(vehicle.position) > reach(&o) + vehicle.inflation_radius() + 0.05 {
            let id = format!("o{}", s.obstacles.len());
            s.push_obstacle(&id, o);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_reproducible() {
        assert_eq!(sparse_static_scene(3), sparse_static_scene(3));
        assert_eq!(cluttered_scene(1), cluttered_scene(1));
        assert_eq!(dynamic_scene(5), dynamic_scene(5));
        assert_eq!(ttc_scene(9), ttc_scene(9));
        assert_ne!(ttc_scene(9), ttc_scene(10));
    }

    #[test]
    fn cluttered_keeps_corridors() {
        let s = cluttered_scene(0);
        assert_eq!(s.obstacles.len(), 20);
        let r = s.vehicle.inflation_radius();
        let big: Vec<Obstacle> = s
            .obstacles
            .iter()
            .map(|n| inflate(&n.obstacle, r).unwrap())
            .collect();
        for (i, a) in big.iter().enumerate() {
            for b in &big[i + 1..] {
                let gap = a.reference_point().distance(b.reference_point()) - reach(a) - reach(b);
                assert!(gap > 0.0);
            }
        }
    }
}
