//! Time Distance (TD) collision prediction and path planning for a
//! rectangular vehicle among constant-velocity convex obstacles.
//!
//! - [`td`]: closed-form TD fields for points, segments, polygons and circles
//! - [`collision`]: time to collision with per-obstacle attribution
//! - [`guidance`]: Z∞ occupancy fields and the route function
//! - [`planner`]: static and dynamic safest-point planners
//! - [`trajectory`]: look-ahead quintic smoothing and the curvature speed law
//! - [`simulator`]: closed-loop replanning with a per-step collision audit
//! - [`oracle`]: brute-force references used for testing and comparison

pub mod collision;
pub mod geometry;
pub mod guidance;
pub mod oracle;
pub mod planner;
pub mod render;
pub mod scenario;
pub mod scenes;
pub mod simulator;
pub mod td;
pub mod trajectory;

pub use collision::{predict_ttc, relativize, sample_border, RelativeScene, TtcReport};
pub use geometry::{
    CircleObstacle, ConvexPolygonObstacle, Obstacle, Point2, VehicleFootprint, Velocity2,
};
pub use planner::{plan_path, Mode, PathPolyline, PlannerConfig};
pub use scenario::{parse_scenario, serialize_scenario, NamedObstacle, Scenario, ScenarioError};
pub use simulator::{run, Outcome, SimConfig, SimLog};
pub use td::TdValue;
