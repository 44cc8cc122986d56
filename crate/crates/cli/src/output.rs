//! CSV writers. Numbers use Rust's shortest round-trip form, so identical
//! inputs give identical bytes.

use std::fmt::Write as _;

use timedist_core::planner::{PathPolyline, PlannerConfig, PreparedScene};
use timedist_core::simulator::SimLog;
use timedist_core::TdValue;

pub const HEADER: &str = "t,x,y,heading,v,T_p";

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "inf".to_string()
    }
}

fn td(v: TdValue) -> String {
    num(v.seconds())
}

/// Planned vertices in world coordinates. A plan carries no timing, so `t`
/// is the nominal time at `v_max` and `v` is `v_max`; `heading` is the
/// direction of the segment arriving at the vertex.
pub fn path_csv(path: &PathPolyline, v_max: f64) -> String {
    let mut out = format!("{HEADER}\n");
    let pts = path.global_vertices();
    let mut s = 0.0;
    let mut heading = path.frame.rotation;
    for (k, p) in pts.iter().enumerate() {
        let t_p = match k {
            0 => String::new(),
            _ => td(path.points[k - 1].t_p),
        };
        if k > 0 {
            let d = *p - pts[k - 1];
            s += d.norm();
            heading = d.y.atan2(d.x);
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(s / v_max),
            num(p.x),
            num(p.y),
            num(heading),
            num(v_max),
            t_p
        );
    }
    out
}

/// Every logged simulation step.
pub fn trajectory_csv(log: &SimLog) -> String {
    let mut out = format!("{HEADER}\n");
    for s in &log.samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(s.t),
            num(s.position.x),
            num(s.position.y),
            num(s.heading),
            num(s.speed),
            td(s.t_p)
        );
    }
    out
}

/// The composed field on the planner's section grid, in both frames.
pub fn field_csv(scene: &PreparedScene, config: &PlannerConfig) -> String {
    let mut out = String::from("x_pc,y_pc,x,y,value\n");
    let reach = scene.goal.x.max(config.min_reach);
    let n = (reach / config.dx).ceil() as usize;
    for k in 1..=n {
        let x = (k as f64 * config.dx).min(reach);
        for y in scene.section_ys(x, config) {
            let p = timedist_core::Point2::new(x, y);
            let g = scene.frame.to_parent(p);
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                num(x),
                num(y),
                num(g.x),
                num(g.y),
                td(scene.value(p))
            );
        }
    }
    out
}
