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
A static 2D world made of line segments, a first-hit LiDAR and unicycle kinematics.
"""

import math
from collections import namedtuple

import numpy as np

from .sensing import PointCloud
from .utils import wrap_angle

# endpoint slack on the segment parameter, so beams through shared wall corners still hit
EDGE_EPS = 1e-12

STRAIGHT = "straight"
ROTATE = "rotate"
HALT = "halt"


class Command(namedtuple("Command", ["kind", "speed"])):
    """`speed` is m/s for straight commands and signed rad/s for rotations."""

    __slots__ = ()

    @classmethod
    def straight(cls, v):
        return cls(STRAIGHT, float(v))

    @classmethod
    def rotate(cls, omega):
        return cls(ROTATE, float(omega))

    @classmethod
    def halt(cls):
        return cls(HALT, 0.0)


class RobotState(namedtuple("RobotState", ["x", "y", "theta", "footprint_radius"])):
    __slots__ = ()

    def __new__(cls, x, y, theta, footprint_radius=0.13):
        return super(RobotState, cls).__new__(cls, float(x), float(y), float(theta), float(footprint_radius))

    @property
    def pose(self):
        return (self.x, self.y, self.theta)

    def moved(self, x, y, theta):
        return RobotState(x, y, theta, self.footprint_radius)


class NoiseModel(object):
    FIELDS = ("epsilon_long", "range_noise", "veer")

    def __init__(self, epsilon_long=0.0, range_noise=0.0, veer=0.0):
        self.epsilon_long = float(epsilon_long)
        self.range_noise = float(range_noise)
        self.veer = float(veer)

    def problems(self):
        ret = []
        if self.epsilon_long < 0:
            ret.append(("epsilon_long", "must be >= 0"))
        if self.range_noise < 0:
            ret.append(("range_noise", "must be >= 0"))
        return ret

    def to_dict(self):
        return {k: getattr(self, k) for k in self.FIELDS}


class SimConfig(object):
    FIELDS = (
        "n_beams",
        "max_range",
        "footprint_radius",
        "omega",
        "rotation_margin",
        "track_window",
        "exit_clearance",
    )

    def __init__(
        self,
        n_beams=360,
        max_range=6.0,
        footprint_radius=0.13,
        omega=0.5 * math.pi,
        rotation_margin=0.05,
        track_window=0.35,
        exit_clearance=0.2,
    ):
        self.n_beams = int(n_beams)
        self.max_range = float(max_range)
        self.footprint_radius = float(footprint_radius)
        self.omega = float(omega)
        self.rotation_margin = float(rotation_margin)
        self.track_window = float(track_window)
        self.exit_clearance = float(exit_clearance)

    def problems(self, safety=None):
        ret = []
        if self.n_beams < 1:
            ret.append(("n_beams", "must be >= 1"))
        if self.max_range <= 0:
            ret.append(("max_range", "must be positive"))
        if self.footprint_radius <= 0:
            ret.append(("footprint_radius", "must be positive"))
        elif safety is not None and self.footprint_radius >= safety.d_safe:
            ret.append(("footprint_radius", "must be smaller than d_safe ({})".format(safety.d_safe)))
        if self.omega <= 0:
            ret.append(("omega", "must be positive"))
        if self.rotation_margin < 0:
            ret.append(("rotation_margin", "must be >= 0"))
        if self.track_window <= 0:
            ret.append(("track_window", "must be positive"))
        if self.exit_clearance < 0:
            ret.append(("exit_clearance", "must be >= 0"))
        return ret

    @property
    def beam_spacing(self):
        return 2.0 * math.pi / self.n_beams

    def to_dict(self):
        return {k: getattr(self, k) for k in self.FIELDS}


class WorldModel(object):
    """
    Static obstacles as an (M, 4) array of segments [x1, y1, x2, y2] in the world frame.
    """

    def __init__(self, segments, bounds=None):
        segments = np.asarray(segments, dtype=float)
        if segments.size == 0:
            segments = np.zeros((0, 4), dtype=float)
        segments = segments.reshape(-1, 4)
        assert np.all(np.isfinite(segments)), "segments must be finite"
        lengths = np.hypot(segments[:, 2] - segments[:, 0], segments[:, 3] - segments[:, 1])
        assert np.all(lengths > 0), "degenerate segment in world"
        self.segments = segments
        if bounds is None and segments.shape[0] > 0:
            xs = segments[:, [0, 2]]
            ys = segments[:, [1, 3]]
            bounds = (float(xs.min()), float(ys.min()), float(xs.max()), float(ys.max()))
        self.bounds = bounds

    @classmethod
    def from_segments(cls, segments):
        return cls([list(s) for s in segments])

    def transformed(self, x, y, theta):
        """Apply the rigid motion p -> R(theta) p + (x, y) to every segment."""
        c, s = math.cos(theta), math.sin(theta)
        rot = np.array([[c, -s], [s, c]])
        p1 = self.segments[:, 0:2] @ rot.T + np.array([x, y])
        p2 = self.segments[:, 2:4] @ rot.T + np.array([x, y])
        return WorldModel(np.hstack([p1, p2]))

    def relative_to(self, robot):
        """The world as seen from `robot`: the robot sits at the origin facing +x."""
        c, s = math.cos(-robot.theta), math.sin(-robot.theta)
        tx = -(c * robot.x - s * robot.y)
        ty = -(s * robot.x + c * robot.y)
        return self.transformed(tx, ty, -robot.theta)

    def __len__(self):
        return self.segments.shape[0]


def beam_angles(n_beams):
    return 2.0 * math.pi * np.arange(n_beams) / n_beams


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def ray_ranges(world, x, y, directions, max_range):
    """
    First-hit range along every direction, inf where nothing lies within max_range.
    `directions` is an (N,) array of world-frame angles.
    """
    n = directions.shape[0]
    if len(world) == 0:
        return np.full(n, np.inf)
    dx = np.cos(directions)[:, None]
    dy = np.sin(directions)[:, None]
    seg = world.segments
    ex = (seg[:, 2] - seg[:, 0])[None, :]
    ey = (seg[:, 3] - seg[:, 1])[None, :]
    wx = (seg[:, 0] - x)[None, :]
    wy = (seg[:, 1] - y)[None, :]

    denom = _cross(dx, dy, ex, ey)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = _cross(wx, wy, ex, ey) / denom
        u = _cross(wx, wy, dx, dy) / denom
    hit = (np.abs(denom) > 1e-15) & (t > 0) & (t <= max_range) & (u >= -EDGE_EPS) & (u <= 1.0 + EDGE_EPS)
    t = np.where(hit, t, np.inf)
    return t.min(axis=1)


def raycast_scan(world, robot, n_beams=360, max_range=6.0, rng=None, range_noise=0.0, timestamp=0.0):
    """
    One scan in the robot frame, beams at 2*pi*k/n_beams from the heading, beams without a hit omitted.
    """
    assert n_beams >= 1, "n_beams must be >= 1"
    angles = beam_angles(n_beams)
    ranges = ray_ranges(world, robot.x, robot.y, robot.theta + angles, max_range)
    hit = np.isfinite(ranges)
    if range_noise > 0 and rng is not None:
        jitter = rng.normal(0.0, range_noise, size=ranges.shape)
        ranges = np.where(hit, np.maximum(ranges + jitter, 1e-6), ranges)
    r = ranges[hit]
    a = angles[hit]
    points = np.stack([r * np.cos(a), r * np.sin(a)], axis=1) if r.size else np.zeros((0, 2))
    return PointCloud(points, timestamp)


def step_kinematics(robot, command, dt, noise=None, rng=None):
    assert dt > 0, "dt must be positive"
    if command.kind == STRAIGHT:
        dist = command.speed * dt
        theta = robot.theta
        if noise is not None and rng is not None and noise.epsilon_long > 0:
            dist += float(rng.uniform(-noise.epsilon_long, noise.epsilon_long))
        x = robot.x + dist * math.cos(theta)
        y = robot.y + dist * math.sin(theta)
        if noise is not None:
            theta = theta + noise.veer
        return robot.moved(x, y, wrap_angle(theta))
    if command.kind == ROTATE:
        return robot.moved(robot.x, robot.y, wrap_angle(robot.theta + command.speed * dt))
    return robot


def point_segment_distance(px, py, segments):
    segments = np.asarray(segments, dtype=float).reshape(-1, 4)
    ax, ay = segments[:, 0], segments[:, 1]
    ex = segments[:, 2] - ax
    ey = segments[:, 3] - ay
    u = ((px - ax) * ex + (py - ay) * ey) / (ex * ex + ey * ey)
    u = np.clip(u, 0.0, 1.0)
    return np.hypot(ax + u * ex - px, ay + u * ey - py)


def clearance(world, robot):
    if len(world) == 0:
        return math.inf
    return float(point_segment_distance(robot.x, robot.y, world.segments).min())


def check_collision(world, robot):
    return clearance(world, robot) < robot.footprint_radius
