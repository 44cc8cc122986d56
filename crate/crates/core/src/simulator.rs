//! Closed-loop replanning: plan, smooth, track a fraction of the smoothed
//! segment, advance the world, repeat.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{normalize_angle, GeometryError, Point2, VehicleFootprint};
use crate::oracle::footprint_overlaps;
use crate::planner::{plan_from, Mode, PathPolyline, PlanError, PlannerConfig, PreparedScene};
use crate::scenario::{NamedObstacle, Scenario};
use crate::td::TdValue;
use crate::trajectory::{plan_trajectory, sample_at, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Share of each smoothed segment's arc length tracked before replanning.
    pub replan_fraction: f64,
    pub dt: f64,
    pub max_time: f64,
    pub collision_audit: bool,
    /// Distance from the goal at which the run counts as arrived.
    pub goal_tolerance: f64,
}

impl SimConfig {
    /// Defaults for a run of roughly `distance` meters.
    pub fn for_vehicle(vehicle: &VehicleFootprint, distance: f64) -> Self {
        SimConfig {
            replan_fraction: 0.1,
            dt: 0.01,
            max_time: 10.0 + 5.0 * distance / vehicle.v_max,
            collision_audit: true,
            goal_tolerance: vehicle.width / 2.0,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.replan_fraction > 0.0 && self.replan_fraction <= 1.0) {
            return Err(SimError::Config("replan_fraction must lie in (0, 1]"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SimError::Config("dt must be positive"));
        }
        if !(self.max_time > 0.0) {
            return Err(SimError::Config("max_time must be positive"));
        }
        if !(self.goal_tolerance >= 0.0 && self.goal_tolerance.is_finite()) {
            return Err(SimError::Config("goal_tolerance must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("invalid simulation configuration: {0}")]
    Config(&'static str),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("vehicle: {0}")]
    Vehicle(#[from] GeometryError),
}

/// Obstacles at a moment in time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub t: f64,
    pub obstacles: Vec<NamedObstacle>,
}

/// Translates every obstacle by its velocity times `dt`.
pub fn step_world(state: &WorldState, dt: f64) -> WorldState {
    WorldState {
        t: state.t + dt,
        obstacles: state
            .obstacles
            .iter()
            .map(|n| NamedObstacle {
                id: n.id.clone(),
                obstacle: n.obstacle.advanced(dt),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    GoalReached,
    Collision,
    NoPath,
    Timeout,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::GoalReached => "goal-reached",
            Outcome::Collision => "collision",
            Outcome::NoPath => "no-path",
            Outcome::Timeout => "timeout",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogSample {
    pub t: f64,
    pub position: Point2,
    pub heading: f64,
    pub speed: f64,
    #[serde(with = "crate::td::extended")]
    pub rho: f64,
    /// Smallest section value of the plan being tracked.
    pub t_p: TdValue,
    /// Reference point of every obstacle, in scenario order.
    pub obstacles: Vec<Point2>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplanSnapshot {
    pub t: f64,
    pub path: PathPolyline,
    pub trajectory: Trajectory,
    /// Future relative outlines in world coordinates (dynamic mode).
    pub ghosts: Vec<Vec<Point2>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimLog {
    pub scenario: Scenario,
    pub mode: Mode,
    pub samples: Vec<LogSample>,
    pub replans: Vec<ReplanSnapshot>,
    pub outcome: Outcome,
    /// Sum of distances between consecutive logged positions.
    pub path_length: f64,
    pub duration: f64,
    pub note: Option<String>,
}

impl SimLog {
    /// Tracked length plus the straight gap still left to the goal, for
    /// comparing against paths that end exactly on it.
    pub fn length_to_goal(&self) -> f64 {
        let end = self
            .samples
            .last()
            .map_or(self.scenario.vehicle.position, |s| s.position);
        self.path_length + end.distance(self.scenario.goal)
    }

    pub fn positions(&self) -> Vec<Point2> {
        self.samples.iter().map(|s| s.position).collect()
    }
}

fn obstacles_at(initial: &[NamedObstacle], t: f64) -> Vec<NamedObstacle> {
    initial
        .iter()
        .map(|n| NamedObstacle {
            id: n.id.clone(),
            obstacle: n.obstacle.advanced(t),
        })
        .collect()
}

fn collides(vehicle: &VehicleFootprint, obstacles: &[NamedObstacle]) -> Option<String> {
    let body = vehicle.corners();
    obstacles
        .iter()
        .find(|n| footprint_overlaps(&body, &n.obstacle))
        .map(|n| n.id.clone())
}

pub fn run(
    scenario: &Scenario,
    planner: &PlannerConfig,
    sim: &SimConfig,
) -> Result<SimLog, SimError> {
    planner.validate()?;
    sim.validate()?;
    scenario.vehicle.validate()?;
    let goal = scenario.goal;
    let v_max = scenario.vehicle.v_max;
    let a_n_max = scenario.vehicle.a_n_max;
    let initial = &scenario.obstacles;

    let mut vehicle = scenario.vehicle;
    let mut t = 0.0;
    let mut curvature = 0.0;
    let mut samples = Vec::new();
    let mut replans = Vec::new();
    let mut note = None;
    let refs = |obs: &[NamedObstacle]| {
        obs.iter()
            .map(|n| n.obstacle.reference_point())
            .collect::<Vec<_>>()
    };
    let push =
        |samples: &mut Vec<LogSample>, v: &VehicleFootprint, t: f64, rho: f64, t_p: TdValue| {
            samples.push(LogSample {
                t,
                position: v.position,
                heading: v.heading,
                speed: v.speed,
                rho,
                t_p,
                obstacles: refs(&obstacles_at(initial, t)),
            })
        };
    push(&mut samples, &vehicle, t, f64::INFINITY, TdValue::INFINITY);

    let outcome = 'sim: loop {
        if sim.collision_audit {
            if let Some(id) = collides(&vehicle, &obstacles_at(initial, t)) {
                note = Some(format!(
                    "footprint overlaps obstacle `{id}` at t = {t:.3} s"
                ));
                break Outcome::Collision;
            }
        }
        if vehicle.position.distance(goal) <= sim.goal_tolerance {
            break Outcome::GoalReached;
        }
        if t >= sim.max_time {
            break Outcome::Timeout;
        }
        let now = obstacles_at(initial, t);
        let scene = match PreparedScene::new(&vehicle, &now, goal, planner) {
            Ok(s) => s,
            Err(e @ PlanError::DegenerateFuture { .. }) => {
                note = Some(e.to_string());
                break Outcome::NoPath;
            }
            Err(e) => return Err(e.into()),
        };
        let path = crate::planner::plan_prepared(&scene, planner)?;
        if path.is_empty() {
            note = Some(format!("no admissible section ({:?})", path.terminated));
            break Outcome::NoPath;
        }
        let trajectory = match plan_trajectory(&path, scenario.lookahead, curvature, v_max, a_n_max)
        {
            Ok(tr) => tr,
            Err(e) => {
                note = Some(e.to_string());
                break Outcome::NoPath;
            }
        };
        let t_p = path.min_tp().unwrap_or(TdValue::INFINITY);
        let ghosts = scene
            .futures
            .iter()
            .map(|f| {
                f.polygon
                    .vertices()
                    .iter()
                    .map(|&p| scene.frame.to_parent(p))
                    .collect()
            })
            .collect();
        let seg = trajectory.segment;
        let frame = trajectory.frame;
        let total = seg.length();
        let budget = sim.replan_fraction * total;
        let mut s = 0.0;
        let mut here = sample_at(&seg, 0.0, v_max, a_n_max);
        replans.push(ReplanSnapshot {
            t,
            path,
            trajectory,
            ghosts,
        });
        loop {
            let ds = here.v_d * sim.dt;
            let s_next = (s + ds).min(total);
            let step_t = if s_next - s < ds {
                (s_next - s) / here.v_d
            } else {
                sim.dt
            };
            if step_t <= 0.0 {
                break;
            }
            s = s_next;
            t += step_t;
            here = sample_at(&seg, s, v_max, a_n_max);
            vehicle.position = frame.to_parent(here.position);
            vehicle.heading = normalize_angle(frame.rotation + here.heading);
            vehicle.speed = here.v_d;
            curvature = here.curvature;
            push(&mut samples, &vehicle, t, here.rho, t_p);
            if sim.collision_audit {
                if let Some(id) = collides(&vehicle, &obstacles_at(initial, t)) {
                    note = Some(format!(
                        "footprint overlaps obstacle `{id}` at t = {t:.3} s"
                    ));
                    break 'sim Outcome::Collision;
                }
            }
            if vehicle.position.distance(goal) <= sim.goal_tolerance {
                break 'sim Outcome::GoalReached;
            }
            if s >= budget || s >= total || t >= sim.max_time {
                break;
            }
        }
    };

    let path_length = samples
        .windows(2)
        .map(|w| w[0].position.distance(w[1].position))
        .sum();
    Ok(SimLog {
        scenario: scenario.clone(),
        mode: planner.mode,
        samples,
        replans,
        outcome,
        path_length,
        duration: t,
        note,
    })
}

/// Plans once from the scenario's initial state.
pub fn plan_once(scenario: &Scenario, planner: &PlannerConfig) -> Result<PathPolyline, PlanError> {
    plan_from(
        &scenario.vehicle,
        &scenario.obstacles,
        scenario.goal,
        planner,
    )
}

/// Runs with the planner and simulation settings stored in the scenario.
pub fn run_scenario(scenario: &Scenario) -> Result<SimLog, SimError> {
    run(scenario, &scenario.planner, &scenario.sim)
}
