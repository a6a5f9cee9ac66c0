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
Closed-loop tasks and the dispatch between them.

T0 drives straight until something shows up in the look corridor, TS drives straight until
something reaches the shield, TL/TR rotate in place until the disturbance that spawned them
has swept more than a quarter turn.
"""

import math
from collections import namedtuple

import numpy as np

from .sensing import (
    as_points,
    mask_look,
    mask_shield,
    nearest_front,
    partition_front_safe,
)
from .utils import angle_diff

T0 = "T0"
TS = "TS"
TL = "TL"
TR = "TR"
TASKS = (T0, TS, TL, TR)
ROTATIONS = (TL, TR)

RUNNING = "running"
SUCCESS = "success"
FAILURE = "failure"

QUARTER_TURN = 0.5 * math.pi


def is_opposite_turn(a, b):
    return (a, b) in ((TL, TR), (TR, TL))


def opposite_turn_pairs(kinds):
    """Indices i where kinds[i], kinds[i + 1] is a (TL, TR) or (TR, TL) pair."""
    return [i for i in range(len(kinds) - 1) if is_opposite_turn(kinds[i], kinds[i + 1])]


class Task(object):
    """
    One running task. Rotations carry the bookkeeping needed to follow their disturbance:
    `initial_angle` is the bearing at spawn, `swept` the unwrapped bearing change since then,
    `commanded` the rotation already sent to the wheels.
    """

    def __init__(self, kind, trigger=None):
        assert kind in TASKS, "unknown task {}".format(kind)
        self.kind = kind
        self.trigger = trigger
        self.commanded = 0.0
        self.swept = 0.0
        self.pending = 0.0
        if trigger is not None:
            self.ref = np.array([trigger.x, trigger.y], dtype=float)
            self.virtual = False
        else:
            # nothing to follow, so track the heading at spawn
            self.ref = np.array([1.0, 0.0])
            self.virtual = True
        self.initial_angle = math.atan2(self.ref[1], self.ref[0])
        self.bearing = self.initial_angle

    @property
    def is_rotation(self):
        return self.kind in ROTATIONS

    @property
    def direction(self):
        if self.kind == TL:
            return 1.0
        if self.kind == TR:
            return -1.0
        return 0.0

    def note_rotation(self, angle):
        self.commanded += angle
        self.pending += angle

    def __repr__(self):
        return "Task({})".format(self.kind)


class Plan(object):
    def __init__(self, tasks):
        tasks = list(tasks)
        assert 2 <= len(tasks) <= 4, "a plan has 2 to 4 tasks, got {}".format(tasks)
        assert tasks[-1] == T0, "a plan ends with T0, got {}".format(tasks)
        assert not opposite_turn_pairs(tasks), "a plan never chains TL and TR, got {}".format(tasks)
        self.tasks = tasks
        self.cursor = 0

    @property
    def remaining(self):
        return len(self.tasks) - self.cursor

    @property
    def exhausted(self):
        return self.cursor >= len(self.tasks)

    def advance(self):
        kind = self.tasks[self.cursor]
        self.cursor += 1
        return kind

    def __len__(self):
        return len(self.tasks)

    def __eq__(self, other):
        if isinstance(other, Plan):
            return self.tasks == other.tasks
        return self.tasks == list(other)

    def __repr__(self):
        return "Plan({})".format(" -> ".join(self.tasks))


class TaskOutcome(namedtuple("TaskOutcome", ["status", "trigger", "intrusion", "lost"])):
    __slots__ = ()

    def __new__(cls, status, trigger=None, intrusion=False, lost=False):
        return super(TaskOutcome, cls).__new__(cls, status, trigger, intrusion, lost)


ReplanRequest = namedtuple("ReplanRequest", ["d_plus", "cloud"])
Stop = namedtuple("Stop", ["reason"])
AgentState = namedtuple("AgentState", ["task", "plan"])


def evaluate_straight(task, points, cfg, resolution=0.0):
    if partition_front_safe(points, cfg).shape[0] > 0:
        return TaskOutcome(FAILURE, intrusion=True)
    if task.kind == T0:
        # the shield counts too: right after a rotation a disturbance can sit there without passing the look corridor
        ahead = points[mask_shield(points, cfg, resolution) | mask_look(points, cfg, cfg.d_look)]
    else:
        ahead = points[mask_shield(points, cfg, resolution)]
    d_plus = nearest_front(ahead)
    if d_plus is None:
        return TaskOutcome(RUNNING)
    return TaskOutcome(FAILURE, d_plus)


def track_rotation(task, points, window):
    """
    Re-associate the tracked disturbance and return the unwrapped bearing change since spawn,
    or None when the disturbance left the window.
    """
    c = math.cos(-task.pending)
    s = math.sin(-task.pending)
    predicted = np.array([c * task.ref[0] - s * task.ref[1], s * task.ref[0] + c * task.ref[1]])
    task.pending = 0.0
    predicted_bearing = math.atan2(predicted[1], predicted[0])

    if task.virtual:
        task.ref = predicted
        task.swept += angle_diff(predicted_bearing, task.bearing)
        task.bearing = predicted_bearing
        return task.swept

    if points.shape[0] == 0:
        return None
    bearings = np.arctan2(points[:, 1], points[:, 0])
    offsets = np.abs(np.remainder(bearings - predicted_bearing + math.pi, 2.0 * math.pi) - math.pi)
    idx = int(np.argmin(offsets))
    if offsets[idx] > window:
        return None
    task.ref = points[idx].copy()
    new_bearing = float(bearings[idx])
    task.swept += angle_diff(new_bearing, task.bearing)
    task.bearing = new_bearing
    return task.swept


def evaluate_task(current, cloud, cfg, window=0.35, resolution=0.0):
    """
    Per-step verdict of the running task on the current scan.

    Straight tasks report `running` until their trigger partition fills up, then `failure`
    carrying the nearest front disturbance. Rotations report `success` once the tracked
    disturbance has swept more than a quarter turn (or left the tracking window), `failure`
    otherwise, meaning "keep rotating". `resolution` is the beam spacing in radians, it widens
    the shield by `beam_margin`.
    """
    points = as_points(cloud)
    if not current.is_rotation:
        return evaluate_straight(current, points, cfg, resolution)

    swept = track_rotation(current, points, window)
    if swept is None:
        return TaskOutcome(SUCCESS, lost=True)
    if abs(swept) > QUARTER_TURN:
        return TaskOutcome(SUCCESS)
    return TaskOutcome(FAILURE)


def step_agent(state, outcome, cloud=None):
    """
    Pure dispatch. Returns None to keep the current task, a Task to switch to,
    a ReplanRequest or a Stop.

    Advancing a plan moves its cursor; callers clear the plan once it reports `exhausted`.
    """
    task, plan = state.task, state.plan
    if outcome.intrusion:
        return Stop("intrusion")

    if task.kind == T0:
        if outcome.status == FAILURE:
            return ReplanRequest(outcome.trigger, cloud)
        return None

    if task.kind == TS:
        if outcome.status != FAILURE:
            return None
        if plan is None or plan.exhausted:
            return Stop("shield")
        return Task(plan.advance(), outcome.trigger)

    if outcome.status != SUCCESS:
        return None
    if plan is None or plan.exhausted:
        return Task(T0)
    return Task(plan.advance())
