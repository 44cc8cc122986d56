//! Python bindings: scenarios, TTC prediction, planning, simulation and the
//! scalar fields behind them.

use std::fmt::Display;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use timedist_core::collision::{predict_ttc, relativize};
use timedist_core::geometry::{CircleObstacle, ConvexPolygonObstacle, Obstacle, Point2, Velocity2};
use timedist_core::guidance::{route_value as rf, zinf_polygon as zinf, RouteParams, ZInfValue};
use timedist_core::oracle::{grid_astar_scenario, oracle_td as brute_td, OracleConfig};
use timedist_core::planner::{plan_path, PathPolyline};
use timedist_core::render::{log_svg, plan_svg};
use timedist_core::simulator::run;
use timedist_core::{scenes, td, trajectory, Mode, TdValue};

fn value_error(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pt((x, y): (f64, f64)) -> Point2 {
    Point2::new(x, y)
}

fn vel((vx, vy): (f64, f64)) -> Velocity2 {
    Velocity2::new(vx, vy)
}

fn polygon(vertices: Vec<(f64, f64)>, velocity: (f64, f64)) -> PyResult<ConvexPolygonObstacle> {
    ConvexPolygonObstacle::new(vertices.into_iter().map(pt).collect(), vel(velocity))
        .map_err(value_error)
}

fn circle(center: (f64, f64), radius: f64, velocity: (f64, f64)) -> PyResult<CircleObstacle> {
    CircleObstacle::new(pt(center), radius, vel(velocity)).map_err(value_error)
}

fn secs(t: TdValue) -> f64 {
    t.seconds()
}

/// Vehicle, goal, obstacles and every planner and simulation setting.
#[pyclass(name = "Scenario", module = "timedist")]
struct PyScenario {
    inner: timedist_core::Scenario,
}

#[pymethods]
impl PyScenario {
    /// Parses a scenario document (TOML).
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        timedist_core::parse_scenario(text)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| value_error(format!("{path}: {e}")))?;
        Self::from_toml(&text)
    }

    fn to_toml(&self) -> String {
        timedist_core::serialize_scenario(&self.inner)
    }

    #[staticmethod]
    fn two_obstacle() -> Self {
        Self {
            inner: scenes::two_obstacle_scene(),
        }
    }

    #[staticmethod]
    fn crossing() -> Self {
        Self {
            inner: scenes::crossing_scene(),
        }
    }

    #[staticmethod]
    fn sparse(seed: u64) -> Self {
        Self {
            inner: scenes::sparse_static_scene(seed),
        }
    }

    #[staticmethod]
    fn cluttered(seed: u64) -> Self {
        Self {
            inner: scenes::cluttered_scene(seed),
        }
    }

    #[staticmethod]
    fn dynamic(seed: u64) -> Self {
        Self {
            inner: scenes::dynamic_scene(seed),
        }
    }

    #[getter]
    fn goal(&self) -> (f64, f64) {
        (self.inner.goal.x, self.inner.goal.y)
    }

    /// `"static"` or `"dynamic"`.
    #[getter]
    fn mode(&self) -> String {
        self.inner.planner.mode.to_string()
    }

    #[setter]
    fn set_mode(&mut self, mode: &str) -> PyResult<()> {
        self.inner.planner.mode = match mode {
            "static" => Mode::Static,
            "dynamic" => Mode::Dynamic,
            other => return Err(value_error(format!("unknown mode `{other}`"))),
        };
        Ok(())
    }

    #[getter]
    fn obstacle_ids(&self) -> Vec<String> {
        self.inner.obstacles.iter().map(|n| n.id.clone()).collect()
    }

    #[pyo3(signature = (id, vertices, velocity = (0.0, 0.0)))]
    fn add_polygon(
        &mut self,
        id: &str,
        vertices: Vec<(f64, f64)>,
        velocity: (f64, f64),
    ) -> PyResult<()> {
        let p = polygon(vertices, velocity)?;
        self.inner.push_obstacle(id, Obstacle::Polygon(p));
        Ok(())
    }

    #[pyo3(signature = (id, center, radius, velocity = (0.0, 0.0)))]
    fn add_circle(
        &mut self,
        id: &str,
        center: (f64, f64),
        radius: f64,
        velocity: (f64, f64),
    ) -> PyResult<()> {
        let c = circle(center, radius, velocity)?;
        self.inner.push_obstacle(id, Obstacle::Circle(c));
        Ok(())
    }

    /// `(ttc, [(id, ttc), ...])` in seconds; `inf` when nothing hits.
    fn predict(&self) -> (f64, Vec<(String, f64)>) {
        let r = predict_ttc(&relativize(&self.inner));
        (
            secs(r.ttc),
            r.per_obstacle
                .into_iter()
                .map(|o| (o.id, secs(o.ttc)))
                .collect(),
        )
    }

    fn plan(&self) -> PyResult<PyPath> {
        plan_path(&self.inner, &self.inner.planner)
            .map(|inner| PyPath { inner })
            .map_err(value_error)
    }

    fn simulate(&self) -> PyResult<PySimLog> {
        run(&self.inner, &self.inner.planner, &self.inner.sim)
            .map(|inner| PySimLog { inner })
            .map_err(value_error)
    }

    /// Grid A* length over the inflated obstacles, `None` when blocked.
    /// `cell` defaults to the planner's lateral spacing.
    #[pyo3(signature = (cell = None))]
    fn astar_length(&self, cell: Option<f64>) -> PyResult<Option<f64>> {
        grid_astar_scenario(&self.inner, cell.unwrap_or(self.inner.planner.dy)).map_err(value_error)
    }

    fn plan_svg(&self, path: &PyPath) -> String {
        plan_svg(&self.inner, &path.inner, None)
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(goal=({}, {}), obstacles={}, mode={})",
            self.inner.goal.x,
            self.inner.goal.y,
            self.inner.obstacles.len(),
            self.inner.planner.mode
        )
    }
}

/// Safest-point polyline in the vehicle frame at planning time.
#[pyclass(name = "Path", module = "timedist")]
struct PyPath {
    inner: PathPolyline,
}

#[pymethods]
impl PyPath {
    /// `(x, y, T_p)` per section, vehicle frame.
    #[getter]
    fn points(&self) -> Vec<(f64, f64, f64)> {
        self.inner
            .points
            .iter()
            .map(|p| (p.x, p.y, secs(p.t_p)))
            .collect()
    }

    /// Vertices in world coordinates, starting at the vehicle.
    #[getter]
    fn world_points(&self) -> Vec<(f64, f64)> {
        self.inner
            .global_vertices()
            .into_iter()
            .map(|p| (p.x, p.y))
            .collect()
    }

    #[getter]
    fn length(&self) -> f64 {
        self.inner.length()
    }

    #[getter]
    fn terminated(&self) -> String {
        format!("{:?}", self.inner.terminated)
    }

    fn __len__(&self) -> usize {
        self.inner.points.len()
    }
}

#[pyclass(name = "SimLog", module = "timedist")]
struct PySimLog {
    inner: timedist_core::SimLog,
}

#[pymethods]
impl PySimLog {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("log types serialize")
    }

    /// `"goal-reached"`, `"collision"`, `"no-path"` or `"timeout"`.
    #[getter]
    fn outcome(&self) -> String {
        self.inner.outcome.to_string()
    }

    #[getter]
    fn path_length(&self) -> f64 {
        self.inner.path_length
    }

    #[getter]
    fn length_to_goal(&self) -> f64 {
        self.inner.length_to_goal()
    }

    #[getter]
    fn duration(&self) -> f64 {
        self.inner.duration
    }

    #[getter]
    fn replans(&self) -> usize {
        self.inner.replans.len()
    }

    /// `(t, x, y, heading, v, T_p)` per step.
    #[getter]
    fn samples(&self) -> Vec<(f64, f64, f64, f64, f64, f64)> {
        self.inner
            .samples
            .iter()
            .map(|s| {
                (
                    s.t,
                    s.position.x,
                    s.position.y,
                    s.heading,
                    s.speed,
                    secs(s.t_p),
                )
            })
            .collect()
    }

    fn svg(&self) -> String {
        log_svg(&self.inner)
    }
}

/// One-dimensional TD of a point at `y_b` moving at `v_rel` to `y_target`.
#[pyfunction]
fn td_point_1d(y_target: f64, y_b: f64, v_rel: f64) -> f64 {
    secs(td::td_point_1d(y_target, y_b, v_rel))
}

/// TD of a convex polygon (counter-clockwise vertices) at `point`.
#[pyfunction]
#[pyo3(signature = (point, vertices, velocity))]
fn td_polygon(point: (f64, f64), vertices: Vec<(f64, f64)>, velocity: (f64, f64)) -> PyResult<f64> {
    Ok(secs(td::td_polygon(
        pt(point),
        &polygon(vertices, velocity)?,
    )))
}

#[pyfunction]
fn td_circle(
    point: (f64, f64),
    center: (f64, f64),
    radius: f64,
    velocity: (f64, f64),
) -> PyResult<f64> {
    let c = Obstacle::Circle(circle(center, radius, velocity)?);
    Ok(secs(td::td_obstacle(pt(point), &c)))
}

/// Brute-force stepped reference for [`td_polygon`].
#[pyfunction]
#[pyo3(signature = (point, vertices, velocity, dt = 1e-4, horizon = 50.0))]
fn oracle_td(
    point: (f64, f64),
    vertices: Vec<(f64, f64)>,
    velocity: (f64, f64),
    dt: f64,
    horizon: f64,
) -> PyResult<f64> {
    let o = Obstacle::Polygon(polygon(vertices, velocity)?);
    Ok(secs(brute_td(
        pt(point),
        &o,
        &OracleConfig::new(dt, horizon),
    )))
}

/// 0 on the closed polygon, `inf` outside.
#[pyfunction]
fn zinf_polygon(point: (f64, f64), vertices: Vec<(f64, f64)>) -> PyResult<f64> {
    let p = polygon(vertices, (0.0, 0.0))?;
    Ok(match zinf(pt(point), &p) {
        ZInfValue::Zero => 0.0,
        ZInfValue::Infinite => f64::INFINITY,
    })
}

#[pyfunction]
#[pyo3(signature = (point, delta = 0.0, t_s = 4.0, alpha = 1.1, beta = 0.1, gamma = 0.1))]
fn route_value(
    point: (f64, f64),
    delta: f64,
    t_s: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> PyResult<f64> {
    let params = RouteParams::new(t_s, alpha, beta, gamma)
        .map_err(value_error)?
        .with_delta(delta);
    Ok(rf(pt(point), &params))
}

/// Minimum turning radius at full speed.
#[pyfunction]
fn rho_min(v_max: f64, a_n_max: f64) -> f64 {
    trajectory::rho_min(v_max, a_n_max)
}

#[pymodule]
fn timedist(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyPath>()?;
    m.add_class::<PySimLog>()?;
    m.add_function(wrap_pyfunction!(td_point_1d, m)?)?;
    m.add_function(wrap_pyfunction!(td_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(td_circle, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_td, m)?)?;
    m.add_function(wrap_pyfunction!(zinf_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(route_value, m)?)?;
    m.add_function(wrap_pyfunction!(rho_min, m)?)?;
    Ok(())
}
