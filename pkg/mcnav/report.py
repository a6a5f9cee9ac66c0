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

import csv
import io
import json
import math
from collections import OrderedDict

import numpy as np

from .tasks import T0, opposite_turn_pairs
from .utils import ConfigError, log, log_file

"""
    Trace definition
"""

RECORD_TYPES = ("header", "step", "pose", "task", "plan", "collision", "stop", "safe_violation", "summary")


class RunTrace:
    """
    Time-ordered records of one run. `records` keeps the order they were produced in,
    the properties below are views over it.
    """

    def __init__(self, header=None):
        self.header = dict(header or {})
        self.header["type"] = "header"
        self.records = []
        self.summary = {"type": "summary"}

    def add(self, record):
        assert record.get("type") in RECORD_TYPES, "unknown trace record {}".format(record.get("type"))
        if record["type"] == "header":
            self.header = record
        elif record["type"] == "summary":
            self.summary = record
        else:
            self.records.append(record)

    def add_pose(self, step, t, robot, kind="pose", **extra):
        record = OrderedDict(
            [("type", kind), ("step", step), ("t", t), ("x", robot.x), ("y", robot.y), ("theta", robot.theta)]
        )
        record.update(extra)
        self.add(record)
        return record

    def of_type(self, kind):
        return [r for r in self.records if r["type"] == kind]

    @property
    def poses(self):
        return [(r["t"], r["x"], r["y"], r["theta"]) for r in self.records if r["type"] in ("step", "pose")]

    @property
    def task_events(self):
        return self.of_type("task")

    @property
    def plan_events(self):
        return self.of_type("plan")

    @property
    def collisions(self):
        return self.of_type("collision")

    @property
    def stops(self):
        return self.of_type("stop")

    @property
    def executed_tasks(self):
        return [T0] + [r["to"] for r in self.task_events]

    @property
    def cutoff(self):
        return self.header.get("cutoff")

    def all_records(self):
        yield self.header
        for r in self.records:
            yield r
        yield self.summary

    @classmethod
    def from_records(cls, records):
        trace = cls()
        for r in records:
            trace.add(r)
        return trace

    def __len__(self):
        return len(self.records)

    def __repr__(self):
        return "RunTrace({} {}, {} records)".format(self.header.get("scenario"), self.header.get("agent"), len(self))


"""
    cul-de-sac membership
"""


def cutoff_side(cutoff, x, y):
    """Signed distance to the cut-off line, positive on the pocket side (left of the directed segment)."""
    x1, y1, x2, y2 = cutoff
    dx, dy = x2 - x1, y2 - y1
    return (dx * (y - y1) - dy * (x - x1)) / math.hypot(dx, dy)


def in_pocket(cutoff, x, y):
    x1, y1, x2, y2 = cutoff
    dx, dy = x2 - x1, y2 - y1
    u = ((x - x1) * dx + (y - y1) * dy) / (dx * dx + dy * dy)
    return cutoff_side(cutoff, x, y) > 0 and 0.0 <= u <= 1.0


"""
    Metrics
"""


class Metrics(object):
    FIELDS = (
        "trajectory_length",
        "in_culdesac_length",
        "in_culdesac_time",
        "culdesac_visits",
        "collisions",
        "latency",
        "plan_counts",
        "stops",
        "intrusions",
        "safe_violations",
        "turn_violations",
        "duration",
    )

    def __init__(self, **kwargs):
        self.trajectory_length = kwargs.get("trajectory_length", 0.0)
        self.in_culdesac_length = kwargs.get("in_culdesac_length", 0.0)
        self.in_culdesac_time = kwargs.get("in_culdesac_time", 0.0)
        self.culdesac_visits = kwargs.get("culdesac_visits", 0)
        self.collisions = kwargs.get("collisions", 0)
        self.latency = kwargs.get("latency", {})
        self.plan_counts = kwargs.get("plan_counts", {})
        self.stops = kwargs.get("stops", 0)
        self.intrusions = kwargs.get("intrusions", 0)
        self.safe_violations = kwargs.get("safe_violations", 0)
        self.turn_violations = kwargs.get("turn_violations", 0)
        self.duration = kwargs.get("duration", 0.0)

    def to_dict(self):
        return OrderedDict((k, getattr(self, k)) for k in self.FIELDS)

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: v for k, v in d.items() if k in cls.FIELDS})

    def __repr__(self):
        return "Metrics({})".format(dict(self.to_dict()))


def plan_length_key(record):
    return "none" if record.get("plan_len") is None else str(record["plan_len"])


def latency_stats(plan_events):
    by_len = OrderedDict()
    for r in sorted(plan_events, key=plan_length_key):
        by_len.setdefault(plan_length_key(r), []).append(float(r["latency_ms"]))
    ret = OrderedDict()
    for key, values in by_len.items():
        ret[key] = {
            "count": len(values),
            "min": min(values),
            "max": max(values),
            "mean": sum(values) / len(values),
        }
    return ret


def compute_metrics(trace, cutoff=None):
    """
    Path length, the part of it beyond the cut-off line, time spent there, number of entries,
    collisions and per-plan-length latency. A segment between two poses belongs to the
    cul-de-sac when its midpoint does.
    """
    if cutoff is None:
        cutoff = trace.cutoff
    poses = np.asarray(trace.poses, dtype=float).reshape(-1, 4)

    length = 0.0
    in_length = 0.0
    in_time = 0.0
    visits = 0
    if poses.shape[0] > 1:
        steps = np.hypot(np.diff(poses[:, 1]), np.diff(poses[:, 2]))
        length = float(steps.sum())
        if cutoff is not None:
            mids = 0.5 * (poses[1:, 1:3] + poses[:-1, 1:3])
            inside = np.array([in_pocket(cutoff, x, y) for x, y in mids], dtype=bool)
            in_length = float(steps[inside].sum())
            in_time = float(np.diff(poses[:, 0])[inside].sum())
    if cutoff is not None and poses.shape[0] > 0:
        was_inside = False
        for _, x, y, _ in poses:
            now = in_pocket(cutoff, x, y)
            if now and not was_inside:
                visits += 1
            was_inside = now

    plans = trace.plan_events
    counts = OrderedDict()
    for r in plans:
        key = plan_length_key(r)
        counts[key] = counts.get(key, 0) + 1

    return Metrics(
        trajectory_length=length,
        in_culdesac_length=in_length,
        in_culdesac_time=in_time,
        culdesac_visits=visits,
        collisions=len(trace.collisions),
        latency=latency_stats(plans),
        plan_counts=counts,
        stops=len(trace.stops),
        intrusions=sum(1 for r in trace.stops if r.get("intrusion")),
        safe_violations=len(trace.of_type("safe_violation")),
        turn_violations=len(opposite_turn_pairs(trace.executed_tasks)),
        duration=float(poses[-1, 0]) if poses.shape[0] else 0.0,
    )


def latency_table(stats):
    """Processing latency per plan length, in milliseconds."""
    lines = ["{:>12} {:>6} {:>9} {:>9} {:>9}".format("plan length", "n", "min", "max", "mean")]
    for key, s in stats.items():
        lines.append("{:>12} {:>6d} {:>9.3f} {:>9.3f} {:>9.3f}".format(key, s["count"], s["min"], s["max"], s["mean"]))
    return "\n".join(lines)


"""
    export / replay
"""


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def export(trace, metrics, out_dir):
    """
    Write trace.jsonl, metrics.json, trajectory.csv (t, x, y, theta) and latency.csv (plan_len, ms).
    Returns the written paths.
    """
    lines = [json.dumps(r) for r in trace.all_records()]
    paths = [
        log_file(out_dir, "trace.jsonl", "\n".join(lines) + "\n"),
        log_file(out_dir, "metrics.json", json.dumps(metrics.to_dict(), indent=2) + "\n"),
        log_file(out_dir, "trajectory.csv", _csv_text(["t", "x", "y", "theta"], [list(p) for p in trace.poses])),
        log_file(
            out_dir,
            "latency.csv",
            _csv_text(
                ["plan_len", "ms"],
                [[r.get("plan_len") or 0, r["latency_ms"]] for r in trace.plan_events],
            ),
        ),
    ]
    log("run written to `{}`".format(out_dir))
    return paths


def load_trace(path):
    try:
        with open(path, "r") as f:
            lines = f.readlines()
    except OSError as e:
        raise ConfigError("{}: cannot read: {}".format(path, e.strerror or e)) from e
    records = []
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line, object_pairs_hook=OrderedDict)
        except json.JSONDecodeError as e:
            raise ConfigError("{}:{}:{}: {}".format(path, lineno, e.colno, e.msg)) from e
        if not isinstance(record, dict) or record.get("type") not in RECORD_TYPES:
            raise ConfigError("{}:{}: not a trace record".format(path, lineno))
        records.append(record)
    if not records or records[0]["type"] != "header":
        raise ConfigError("{}: a trace starts with a header record".format(path))
    return RunTrace.from_records(records)


def replay(path):
    trace = load_trace(path)
    return trace, compute_metrics(trace)


def load_trajectory_csv(path):
    with open(path, "r") as f:
        rows = list(csv.DictReader(f))
    return [(float(r["t"]), float(r["x"]), float(r["y"]), float(r["theta"])) for r in rows]
