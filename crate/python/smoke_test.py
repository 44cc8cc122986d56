"""Smoke test for the `timedist` extension module.

Build and install first:

    cd crates/py && maturin build --release -o /tmp/wheels
    pip install --no-build-isolation /tmp/wheels/timedist-*.whl

then run from the repository root: `python3 python/smoke_test.py`.
"""

import json
import math
import os
import sys

import timedist

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def scenario(name):
    return timedist.Scenario.load(os.path.join(ROOT, "scenarios", name))


def check(label, ok, detail=""):
    print(f"[{'ok' if ok else 'FAIL'}] {label} {detail}".rstrip())
    return ok


def main():
    results = []

    ttc, per = scenario("head_on.toml").predict()
    results.append(check("head-on ttc", ttc == 4.0, f"{ttc} s"))
    results.append(check("passing obstacle never hits", math.isinf(per[1][1])))

    s = timedist.Scenario.two_obstacle()
    path = s.plan()
    results.append(check("plan reaches the goal section", path.terminated == "ReachedGoalSection", path.terminated))
    log = s.simulate()
    results.append(check("two-obstacle run", log.outcome == "goal-reached", f"{log.length_to_goal:.4f} m"))
    astar = s.astar_length()
    results.append(check("within 10% of grid A*", astar is not None and log.length_to_goal <= 1.10 * astar))

    again = timedist.SimLog.from_json(log.to_json())
    results.append(check("log json round trip", json.loads(again.to_json()) == json.loads(log.to_json())))
    results.append(check("svg renders", log.svg().startswith("<svg")))

    square = [(1.0, -0.5), (2.0, -0.5), (2.0, 0.5), (1.0, 0.5)]
    fast = timedist.td_polygon((0.0, 0.0), square, (-0.5, 0.0))
    slow = timedist.oracle_td((0.0, 0.0), square, (-0.5, 0.0))
    results.append(check("td_polygon vs stepped oracle", abs(fast - slow) <= 2e-4, f"{fast} vs {slow}"))
    results.append(check("zinf inside", timedist.zinf_polygon((1.5, 0.0), square) == 0.0))
    results.append(check("zinf outside", math.isinf(timedist.zinf_polygon((0.0, 0.0), square))))

    rf = timedist.route_value((1.0, 0.0))
    results.append(check("route value on the goal line", abs(rf - 4.4) < 1e-12, f"{rf}"))
    rho = timedist.rho_min(0.2, 0.133)
    results.append(check("minimum turning radius", round(rho, 2) == 0.30, f"{rho:.4f} m"))

    s = timedist.Scenario.from_toml(s.to_toml())
    s.mode = "dynamic"
    results.append(check("dynamic mode round trip", s.mode == "dynamic" and len(s.obstacle_ids) == 2))

    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
