use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use timedist_core::collision::{predict_ttc, relativize};
use timedist_core::oracle::{grid_astar_scenario, OracleError};
use timedist_core::planner::{PlanError, PlannerConfig, PreparedScene, Termination};
use timedist_core::render::{frame_svg, log_svg, plan_svg};
use timedist_core::scenes::{dynamic_scene, sparse_static_scene};
use timedist_core::simulator::{plan_once, run, SimError};
use timedist_core::{parse_scenario, Mode, Outcome, Scenario, ScenarioError, SimLog};

use crate::output::{field_csv, path_csv, trajectory_csv};

pub struct Options {
    pub file: PathBuf,
    pub out: PathBuf,
    pub mode: Option<Mode>,
    pub field_dump: bool,
    pub seed: Option<u64>,
    pub frames: bool,
}

/// A finished command: what to print and the process exit code.
pub struct Done {
    pub summary: String,
    pub code: u8,
}

pub const NO_PATH: u8 = 3;
pub const COLLISION: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Scenario {
        path: PathBuf,
        source: ScenarioError,
    },
    #[error("{path}: not a simulation log: {source}")]
    Log {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("grid A*: {0}")]
    Oracle(#[from] OracleError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Plan(PlanError::DegenerateFuture { .. })
            | CliError::Sim(SimError::Plan(PlanError::DegenerateFuture { .. })) => NO_PATH,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("log types serialize");
    s.push('\n');
    s
}

/// The scenario after `--seed` and `--mode` are applied.
fn load(opts: &Options) -> Result<Scenario, CliError> {
    let text = read(&opts.file)?;
    let mut s = parse_scenario(&text).map_err(|source| CliError::Scenario {
        path: opts.file.clone(),
        source,
    })?;
    if let Some(seed) = opts.seed {
        s = match opts.mode.unwrap_or(s.planner.mode) {
            Mode::Static => sparse_static_scene(seed),
            Mode::Dynamic => dynamic_scene(seed),
        };
    }
    if let Some(mode) = opts.mode {
        s.planner.mode = mode;
    }
    Ok(s)
}

pub fn predict(opts: &Options) -> Result<Done, CliError> {
    let s = load(opts)?;
    let report = predict_ttc(&relativize(&s));
    write(&opts.out, "ttc.json", &json(&report))?;
    let mut summary = format!("ttc {} s\n", report.ttc);
    if let Some(p) = report.critical_point {
        let _ = writeln!(
            summary,
            "contact at ({}, {}) in the vehicle frame",
            p.x, p.y
        );
    }
    for o in &report.per_obstacle {
        let _ = writeln!(summary, "  {}: {} s", o.id, o.ttc);
    }
    Ok(Done { summary, code: 0 })
}

pub fn plan(opts: &Options) -> Result<Done, CliError> {
    let s = load(opts)?;
    let path = plan_once(&s, &s.planner)?;
    write(&opts.out, "path.csv", &path_csv(&path, s.vehicle.v_max))?;
    write(&opts.out, "plan.svg", &plan_svg(&s, &path, None))?;
    if opts.field_dump {
        let scene = PreparedScene::new(&s.vehicle, &s.obstacles, s.goal, &s.planner)?;
        write(&opts.out, "field.csv", &field_csv(&scene, &s.planner))?;
    }
    let summary = format!(
        "{} plan: {} points, {:.4} m, {:?}, min T_p {}\n",
        s.planner.mode,
        path.points.len(),
        path.length(),
        path.terminated,
        path.min_tp().map_or("-".to_string(), |t| t.to_string())
    );
    let code = if path.terminated == Termination::ReachedGoalSection {
        0
    } else {
        NO_PATH
    };
    Ok(Done { summary, code })
}

fn outcome_code(o: Outcome) -> u8 {
    match o {
        Outcome::GoalReached => 0,
        Outcome::Collision => COLLISION,
        Outcome::NoPath | Outcome::Timeout => NO_PATH,
    }
}

fn write_frames(opts: &Options, log: &SimLog) -> Result<(), CliError> {
    if opts.frames {
        let dir = opts.out.join("frames");
        for k in 0..log.replans.len() {
            let svg = frame_svg(log, k).expect("index within replans");
            write(&dir, &format!("frame_{k:04}.svg"), &svg)?;
        }
    }
    Ok(())
}

pub fn simulate(opts: &Options) -> Result<Done, CliError> {
    let s = load(opts)?;
    let log = run(&s, &s.planner, &s.sim)?;
    write(&opts.out, "log.json", &json(&log))?;
    write(&opts.out, "trajectory.csv", &trajectory_csv(&log))?;
    write(&opts.out, "run.svg", &log_svg(&log))?;
    write_frames(opts, &log)?;
    let mut summary = format!(
        "{} run: {} after {:.2} s, {:.4} m, {} replans\n",
        log.mode,
        log.outcome,
        log.duration,
        log.path_length,
        log.replans.len()
    );
    if let Some(note) = &log.note {
        let _ = writeln!(summary, "{note}");
    }
    Ok(Done {
        summary,
        code: outcome_code(log.outcome),
    })
}

pub fn compare(opts: &Options) -> Result<Done, CliError> {
    let s = load(opts)?;
    let astar = grid_astar_scenario(&s, s.planner.dy)?;
    let mut table = String::from("mode,outcome,td_length_m,astar_length_m,ratio\n");
    for mode in [Mode::Static, Mode::Dynamic] {
        let cfg = PlannerConfig { mode, ..s.planner };
        let log = run(&s, &cfg, &s.sim)?;
        let (a, ratio) = match astar {
            Some(a) => (
                format!("{a:.6}"),
                format!("{:.4}", log.length_to_goal() / a),
            ),
            None => ("blocked".to_string(), "-".to_string()),
        };
        let _ = writeln!(
            table,
            "{mode},{},{:.6},{a},{ratio}",
            log.outcome,
            log.length_to_goal()
        );
    }
    write(&opts.out, "compare.csv", &table)?;
    Ok(Done {
        summary: table,
        code: 0,
    })
}

pub fn render(opts: &Options) -> Result<Done, CliError> {
    let text = read(&opts.file)?;
    let log: SimLog = serde_json::from_str(&text).map_err(|source| CliError::Log {
        path: opts.file.clone(),
        source,
    })?;
    let path = write(&opts.out, "run.svg", &log_svg(&log))?;
    write_frames(opts, &log)?;
    Ok(Done {
        summary: format!("wrote {}\n", path.display()),
        code: 0,
    })
}
