# Copyright (c) 2024 The mcnav Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Property suites shared by the test-suite and the `check` command. Every suite returns a
SuiteReport; `run_checks` raises PropertyViolation when any of them failed.
"""

import itertools
import math
import time
from collections import OrderedDict

import numpy as np

from .model import (
    EMPTY,
    SAFE_HORIZON,
    SAFE_ONLY,
    TERMINAL_CANDIDATES,
    Nfa,
    Valuation,
    accepting_paths,
    build_dts,
    extract_plan,
    product_search,
    state_name,
)
from .report import latency_stats, latency_table
from .runner import run_batch
from .sensing import SafetyConfig
from .sim import Command, RobotState, point_segment_distance, raycast_scan, step_kinematics
from .tasks import T0, opposite_turn_pairs
from .utils import PropertyViolation, log, wrap_angle
from .worlds import build_scenario

LABEL_CHOICES = (EMPTY, SAFE_ONLY, SAFE_HORIZON)
LATENCY_BOUND_MS = 100.0
NUMERIC_TOL = 1e-9

# compliant runs: longitudinal error within tol, no lateral error
COMPLIANT_NOISE = {"noise": {"epsilon_long": 0.02, "veer": 0.0, "range_noise": 0.0}}


class SuiteReport(object):
    def __init__(self, name):
        self.name = name
        self.failures = []
        self.lines = []
        self.elapsed = 0.0

    @property
    def ok(self):
        return not self.failures

    def fail(self, msg):
        self.failures.append(msg)

    def note(self, msg):
        self.lines.append(msg)

    def __str__(self):
        head = "{} {} ({:.1f}s)".format("PASS" if self.ok else "FAIL", self.name, self.elapsed)
        body = self.lines + ["violation: {}".format(f) for f in self.failures[:20]]
        if len(self.failures) > 20:
            body.append("... {} more".format(len(self.failures) - 20))
        return "\n".join([head] + body)


class SuitePool:
    def __init__(self):
        self.pool = OrderedDict()

    def register(self, name):
        def do_reg(func):
            self.pool[name] = func
            return func

        return do_reg

    def names(self):
        return list(self.pool.keys())

    def __getitem__(self, name):
        if name not in self.pool:
            raise KeyError("unknown suite `{}`, expected one of {}".format(name, self.names()))
        return self.pool[name]


global_suites = SuitePool()


"""
    model checker
"""


def valuation_from_labels(variable_labels):
    """Fixed-dimension states are labelled {safe}; `variable_labels` covers the terminal candidates."""
    labels = {sid: SAFE_ONLY for sid in range(15)}
    labels.update(variable_labels)
    return Valuation(labels, {})


def brute_force_accepting(dts, val, nfa, terminals):
    """Accepting prefixes of the root-to-leaf paths in search order, each word read through the automaton."""
    found = []
    for path in dts.paths():
        for end in range(1, len(path) + 1):
            prefix = path[:end]
            if prefix[-1] in terminals and nfa.accepts([val.label(s) for s in prefix]) and prefix not in found:
                found.append(prefix)
    return found


def first_path_problem(got, expected):
    if not expected:
        return None if got is None else "found {} where no path accepts".format(got)
    if got is None:
        return "missed {}".format(" ".join(state_name(s) for s in expected[0]))
    if got.states != expected[0]:
        return "returned {}, first accepting path is {}".format(got, " ".join(state_name(s) for s in expected[0]))
    return None


def compare_with_oracle(dts, val, nfa, terminals):
    """Returns a description of the first disagreement, or None."""
    terminals = frozenset(terminals)
    expected = brute_force_accepting(dts, val, nfa, terminals)
    problem = first_path_problem(product_search(dts, val, nfa, terminals), expected)
    if problem is not None or not expected:
        return problem
    every = [p.states for p in accepting_paths(dts, val, nfa, terminals)]
    if every != expected:
        return "enumerated {} accepting paths, expected {}".format(len(every), len(expected))
    return None


def compare_terminal_sets(dts, val, nfa, subsets):
    """
    `compare_with_oracle` for every terminal set in `subsets` under one valuation, with a single
    brute-force pass. Yields (terminals, problem) for each disagreement.

    A terminal that ends no accepting prefix cannot change the answer, so the sets are grouped by
    their intersection with the accepting ends and each group is searched once. Searching with all
    candidates as terminals, most of them not accepting, checks that premise.
    """
    everything = frozenset(TERMINAL_CANDIDATES)
    prefixes = brute_force_accepting(dts, val, nfa, everything)
    ends = frozenset(p[-1] for p in prefixes)

    problem = first_path_problem(product_search(dts, val, nfa, everything), prefixes)
    every = [p.states for p in accepting_paths(dts, val, nfa, everything)]
    if problem is None and every != prefixes:
        problem = "enumerated {} accepting paths, expected {}".format(len(every), len(prefixes))
    if problem is not None:
        yield everything, problem

    checked = {}
    for terminals in subsets:
        key = terminals & ends
        if key not in checked:
            expected = [p for p in prefixes if p[-1] in key]
            checked[key] = first_path_problem(product_search(dts, val, nfa, key), expected)
        if checked[key] is not None:
            yield terminals, checked[key]


def label_assignments():
    for combo in itertools.product(LABEL_CHOICES, repeat=len(TERMINAL_CANDIDATES)):
        yield dict(zip(TERMINAL_CANDIDATES, combo))


def terminal_sets():
    for n in range(len(TERMINAL_CANDIDATES) + 1):
        for subset in itertools.combinations(TERMINAL_CANDIDATES, n):
            yield frozenset(subset)


@global_suites.register("product")
def check_product_oracle(report, quick=False, seed=0, **kwargs):
    dts = build_dts(SafetyConfig())
    nfa = Nfa()
    assignments = list(label_assignments())
    subsets = list(terminal_sets())
    if quick:
        rng = np.random.default_rng(seed)
        assignments = [assignments[i] for i in rng.choice(len(assignments), size=200, replace=False)]
    start = time.perf_counter()
    for labels in assignments:
        val = valuation_from_labels(labels)
        for terminals, problem in compare_terminal_sets(dts, val, nfa, subsets):
            named = {state_name(s): sorted(l) for s, l in labels.items()}
            report.fail("terminals {} labels {}: {}".format(sorted(terminals), named, problem))
    elapsed = time.perf_counter() - start
    report.note(
        "{} (valuation, terminal set) pairs compared in {:.2f}s".format(len(assignments) * len(subsets), elapsed)
    )


GOLDEN_LABELS = {3: SAFE_ONLY, 4: SAFE_ONLY, 7: SAFE_HORIZON, 8: SAFE_ONLY, 11: SAFE_HORIZON, 12: SAFE_ONLY, 14: EMPTY}
GOLDEN_PATHS = [[0, 1, 3, 5, 7], [0, 1, 3, 9, 11]]


@global_suites.register("golden")
def check_golden(report, **kwargs):
    dts = build_dts(SafetyConfig())
    val = valuation_from_labels(GOLDEN_LABELS)
    nfa = Nfa()
    every = [p.states for p in accepting_paths(dts, val, nfa, {7, 11})]
    if every != GOLDEN_PATHS:
        report.fail("accepting paths {}".format(every))
    path = product_search(dts, val, nfa, {7, 11})
    plan = None if path is None else extract_plan(path)
    if plan is None or len(plan) != 4 or plan.tasks[-1] != T0:
        report.fail("plan {}".format(plan))
    else:
        report.note("plan {}".format(plan))


"""
    simulator numerics
"""


@global_suites.register("numerics")
def check_numerics(report, quick=False, seed=0, **kwargs):
    rng = np.random.default_rng(seed)
    n_worlds = 2 if quick else 10
    per_world = 100 if quick else 1000
    n_beams = 90
    max_range = 6.0
    worst = 0.0
    for w in range(n_worlds):
        world = build_scenario("random", seed=seed + w).world
        x0, y0, x1, y1 = world.bounds
        for _ in range(per_world):
            robot = RobotState(rng.uniform(x0, x1), rng.uniform(y0, y1), rng.uniform(-math.pi, math.pi))
            scan = raycast_scan(world, robot, n_beams, max_range)
            local = raycast_scan(world.relative_to(robot), RobotState(0.0, 0.0, 0.0), n_beams, max_range)
            if scan.points.shape != local.points.shape:
                report.fail(
                    "pose {}: {} world-frame hits, {} robot-frame hits".format(robot.pose, len(scan), len(local))
                )
                continue
            if len(scan):
                err = float(np.abs(scan.points - local.points).max())
                worst = max(worst, err)
                if err > NUMERIC_TOL:
                    report.fail("pose {}: frames disagree by {:.3g} m".format(robot.pose, err))

            # every hit lies on a wall
            c, s = math.cos(robot.theta), math.sin(robot.theta)
            for px, py in scan.points:
                wx = robot.x + c * px - s * py
                wy = robot.y + s * px + c * py
                d = float(point_segment_distance(wx, wy, world.segments).min())
                if d > NUMERIC_TOL:
                    report.fail("pose {}: hit ({:.6f}, {:.6f}) is {:.3g} m off walls".format(robot.pose, wx, wy, d))
                    break

            for command in (Command.straight(0.2), Command.rotate(0.5 * math.pi)):
                moved = step_kinematics(robot, command, 0.2)
                if command.kind == "straight":
                    dist = math.hypot(moved.x - robot.x, moved.y - robot.y)
                    bad = abs(dist - 0.04) > NUMERIC_TOL or abs(wrap_angle(moved.theta - robot.theta)) > NUMERIC_TOL
                else:
                    turn = wrap_angle(moved.theta - robot.theta - 0.1 * math.pi)
                    bad = (moved.x, moved.y) != (robot.x, robot.y) or abs(turn) > NUMERIC_TOL
                if bad:
                    report.fail("pose {}: {} step off by more than {}".format(robot.pose, command.kind, NUMERIC_TOL))
    report.note("{} poses, worst frame disagreement {:.3g} m".format(n_worlds * per_world, worst))


"""
    closed-loop batches
"""


def check_plan_records(report, plan_records, label=""):
    for r in plan_records:
        if r["latency_ms"] >= LATENCY_BOUND_MS:
            report.fail("{}replan at t={:.1f}s took {:.2f} ms".format(label, r["t"], r["latency_ms"]))
        plan = r["plan"]
        if plan is None:
            continue
        if len(plan) not in (2, 3, 4) or plan[-1] != T0 or len(plan) != r["stage"]:
            report.fail("{}plan {} from stage {}".format(label, plan, r["stage"]))


def _plan_records(results):
    return [r for trace, _ in results for r in trace.plan_events]


def _guarantee_job(seed, duration):
    return {
        "scenario": build_scenario("random", seed=seed),
        "agent": "mc",
        "seed": seed,
        "duration": duration,
        "overrides": COMPLIANT_NOISE,
    }


@global_suites.register("guarantees")
def check_guarantees(report, quick=False, seed=0, jobs=1, **kwargs):
    """
    mc in random worlds. A run the planner stops early is checked like any other, and its world is
    replaced by the next seed until `n_worlds` runs have covered the whole duration.
    """
    n_worlds = 10 if quick else 100
    duration = 60.0 if quick else 300.0
    max_runs = 3 * n_worlds
    results = []
    full = 0
    replaced = []
    next_seed = seed
    while full < n_worlds and len(results) < max_runs:
        size = min(n_worlds - full, max_runs - len(results))
        batch = [_guarantee_job(next_seed + i, duration) for i in range(size)]
        next_seed += len(batch)
        for (trace, metrics), job in zip(run_batch(batch, jobs), batch):
            results.append((trace, metrics))
            label = "{} seed {}: ".format(job["scenario"].name, job["seed"])
            pairs = opposite_turn_pairs(trace.executed_tasks)
            if pairs:
                report.fail("{}opposite turns back to back at {}".format(label, pairs[:3]))
            if metrics.safe_violations:
                report.fail("{}{} safe-zone observations during straight tasks".format(label, metrics.safe_violations))
            if metrics.collisions:
                report.fail("{}{} collisions".format(label, metrics.collisions))
            if metrics.intrusions:
                report.fail("{}stopped by an intrusion into the safe zone".format(label))
            check_plan_records(report, trace.plan_events, label)
            if trace.summary["reason"] == "duration":
                full += 1
            else:
                stop = trace.stops[-1]["reason"] if trace.stops else trace.summary["reason"]
                replaced.append("{}stopped ({}) after {:.1f}s".format(label, stop, trace.summary["t"]))

    for line in replaced:
        report.note("replaced " + line)
    if full < n_worlds:
        report.fail("only {} of {} runs lasted {:.0f}s after {} worlds".format(full, n_worlds, duration, len(results)))
    simulated = sum(trace.summary["t"] for trace, _ in results)
    plans = _plan_records(results)
    report.note(
        "{} worlds x {:.0f}s, {} replaced, {:.1f} h simulated, {} replans".format(
            full, duration, len(replaced), simulated / 3600.0, len(plans)
        )
    )
    report.note(latency_table(latency_stats(plans)))


def _median(results, field):
    return float(np.median([getattr(m, field) for _, m in results])) if results else 0.0


@global_suites.register("culdesac")
def check_culdesac(report, quick=False, seed=0, jobs=1, **kwargs):
    runs = 3 if quick else 15
    scenario = build_scenario("culdesac")
    by_agent = {}
    for agent in ("baseline", "mc"):
        batch = [
            {"scenario": scenario, "agent": agent, "start": start, "seed": seed + i}
            for start in scenario.start_poses
            for i in range(runs)
        ]
        by_agent[agent] = run_batch(batch, jobs)

    mc_len = _median(by_agent["mc"], "in_culdesac_length")
    base_len = _median(by_agent["baseline"], "in_culdesac_length")
    mc_hits = sum(m.collisions for _, m in by_agent["mc"])
    base_hits = sum(m.collisions for _, m in by_agent["baseline"])
    report.note("median in-pocket length: mc {:.3f} m, baseline {:.3f} m".format(mc_len, base_len))
    report.note("collisions: mc {}, baseline {}".format(mc_hits, base_hits))
    if not mc_len < base_len:
        report.fail("mc median {:.3f} m is not below baseline median {:.3f} m".format(mc_len, base_len))
    if mc_hits:
        report.fail("mc collided {} times".format(mc_hits))
    check_plan_records(report, _plan_records(by_agent["mc"]))


@global_suites.register("playground")
def check_playground(report, quick=False, seed=0, jobs=1, **kwargs):
    scenario = build_scenario("playground")
    # quick mode keeps the full duration
    duration = scenario.duration
    totals = {}
    hits = {}
    for agent in ("baseline", "mc"):
        batch = [
            {"scenario": scenario, "agent": agent, "start": start, "seed": seed, "duration": duration}
            for start in scenario.start_poses
        ]
        results = run_batch(batch, jobs)
        totals[agent] = sum(m.in_culdesac_time for _, m in results)
        hits[agent] = sum(m.collisions for _, m in results)
        if agent == "mc":
            check_plan_records(report, _plan_records(results))
    report.note(
        "time in the pocket: mc {:.1f} s, baseline {:.1f} s; collisions mc {}, baseline {}".format(
            totals["mc"], totals["baseline"], hits["mc"], hits["baseline"]
        )
    )
    if totals["mc"] > totals["baseline"] or (totals["mc"] == totals["baseline"] and totals["mc"] > 0):
        report.fail("mc spent {:.1f} s in the pocket, baseline {:.1f} s".format(totals["mc"], totals["baseline"]))
    if hits["mc"]:
        report.fail("mc collided {} times".format(hits["mc"]))


def run_suite(name, **kwargs):
    report = SuiteReport(name)
    start = time.perf_counter()
    global_suites[name](report, **kwargs)
    report.elapsed = time.perf_counter() - start
    return report


def run_checks(names=None, quick=False, seed=0, jobs=1):
    """Run the named suites (all by default), log their reports and raise PropertyViolation on any failure."""
    names = global_suites.names() if not names else names
    reports = []
    for name in names:
        report = run_suite(name, quick=quick, seed=seed, jobs=jobs)
        log(str(report))
        reports.append(report)
    failed = [r for r in reports if not r.ok]
    if failed:
        summary = ", ".join("{} ({})".format(r.name, len(r.failures)) for r in failed)
        raise PropertyViolation("{} suite(s) failed: {}".format(len(failed), summary))
    return reports
