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
Egocentric point clouds and the partitions around the robot.

Frame: the LiDAR sits at the origin, the robot faces +x and +y points to its left.
Every partition is a boolean mask over the (N, 2) observation array, so the result
keeps beam order.
"""

import math
from collections import namedtuple

import numpy as np

FRONT = "front"
LEFT = "left"
RIGHT = "right"


class Disturbance(namedtuple("Disturbance", ["x", "y", "kind"])):
    __slots__ = ()

    @property
    def bearing(self):
        return math.atan2(self.y, self.x)

    def to_record(self):
        return {"x": float(self.x), "y": float(self.y), "kind": self.kind}


class PointCloud(object):
    """
    One scan. `points` is an (N, 2) float array in beam order, `timestamp` in milliseconds.
    """

    def __init__(self, points, timestamp=0.0):
        points = np.asarray(points, dtype=float)
        if points.size == 0:
            points = np.zeros((0, 2), dtype=float)
        assert points.ndim == 2 and points.shape[1] == 2, "PointCloud wants an (N, 2) array, got {}".format(
            points.shape
        )
        assert np.all(np.isfinite(points)), "PointCloud observations must be finite."
        self.points = points
        self.timestamp = float(timestamp)

    @classmethod
    def from_observations(cls, observations, timestamp=0.0):
        return cls([[o[0], o[1]] for o in observations], timestamp)

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return "PointCloud(n={}, t={}ms)".format(len(self), self.timestamp)


class SafetyConfig(object):
    """
    Parameters of the safety partitions and the abstraction.

    d_safe: safe-zone radius; v: straight speed; dt: control period; tol: shield margin;
    L: robot width; d_max: lateral look-ahead; d_min: boxed-in threshold;
    beta: longitudinal look-ahead coefficient; d_look: far edge of the look corridor.
    """

    FIELDS = ("d_safe", "v", "dt", "tol", "L", "d_max", "d_min", "beta", "d_look")

    def __init__(self, d_safe=0.3, v=0.2, dt=0.2, tol=0.06, L=0.54, d_max=1.0, d_min=0.6, beta=2.0, d_look=1.0):
        self.d_safe = float(d_safe)
        self.v = float(v)
        self.dt = float(dt)
        self.tol = float(tol)
        self.L = float(L)
        self.d_max = float(d_max)
        self.d_min = float(d_min)
        self.beta = float(beta)
        self.d_look = float(d_look)

    @property
    def shield_upper(self):
        return self.d_safe + self.v * self.dt + self.tol

    @property
    def half_width(self):
        return 0.5 * (self.L + self.tol)

    @property
    def width(self):
        return self.L + self.tol

    @property
    def long_reach(self):
        return self.d_safe + self.beta * self.d_safe

    def problems(self):
        """
        Return a list of (field, message) for every violated invariant.
        """
        ret = []
        if self.d_safe <= 0:
            ret.append(("d_safe", "must be positive"))
        if self.v <= 0:
            ret.append(("v", "must be positive"))
        if self.dt <= 0:
            ret.append(("dt", "must be positive"))
        if self.tol < 0:
            ret.append(("tol", "must be >= 0"))
        if self.beta <= 0:
            ret.append(("beta", "must be > 0"))
        if self.d_min > self.d_max:
            ret.append(("d_min", "must be <= d_max ({})".format(self.d_max)))
        if not math.isclose(self.half_width, self.d_safe, rel_tol=0.0, abs_tol=1e-9):
            ret.append(("L", "(L + tol) / 2 = {} must equal d_safe = {}".format(self.half_width, self.d_safe)))
        if self.d_look <= self.shield_upper:
            ret.append(("d_look", "must exceed the shield upper bound {}".format(self.shield_upper)))
        return ret

    def to_dict(self):
        return {k: getattr(self, k) for k in self.FIELDS}

    def __repr__(self):
        return "SafetyConfig({})".format(", ".join("{}={}".format(k, getattr(self, k)) for k in self.FIELDS))


def as_points(cloud):
    if isinstance(cloud, PointCloud):
        return cloud.points
    points = np.asarray(cloud, dtype=float)
    if points.size == 0:
        return np.zeros((0, 2), dtype=float)
    return points.reshape(-1, 2)


def mask_safe(points, cfg):
    ax = np.abs(points[:, 0])
    ay = np.abs(points[:, 1])
    return (ax > 0) & (ax <= cfg.d_safe) & (ay > 0) & (ay <= cfg.d_safe)


def beam_margin(points, resolution):
    """
    Widest gap between the hits of two neighbouring beams, `resolution` radians apart, on a face
    perpendicular to the heading: r^2 * resolution / |o_x|.
    """
    if resolution <= 0:
        return np.zeros(points.shape[0])
    x = np.abs(points[:, 0])
    r2 = x * x + points[:, 1] * points[:, 1]
    return r2 / np.maximum(x, 1e-12) * resolution


def mask_shield(points, cfg, resolution=0.0):
    """
    With `resolution` > 0 the lateral bound grows by `beam_margin`, so a corner that pokes into the
    corridor between two beams still counts.
    """
    x = points[:, 0]
    bound = cfg.half_width + beam_margin(points, resolution)
    return (x > cfg.d_safe) & (x <= cfg.shield_upper) & (np.abs(points[:, 1]) <= bound)


def mask_look(points, cfg, d_look):
    x = points[:, 0]
    return (x > cfg.shield_upper) & (x <= d_look) & (np.abs(points[:, 1]) <= cfg.half_width)


def partition_safe(cloud, cfg):
    """Square over-approximation of the safe zone: 0 < |o_x| <= d_safe and 0 < |o_y| <= d_safe."""
    points = as_points(cloud)
    return points[mask_safe(points, cfg)]


def partition_shield(cloud, cfg):
    """
    Corridor just beyond the safe zone: d_safe < o_x <= d_safe + v*dt + tol, |o_y| <= (L + tol) / 2.
    Returns every member; callers take `nearest_front` as D+.
    """
    points = as_points(cloud)
    return points[mask_shield(points, cfg)]


def partition_look(cloud, cfg, d_look=None):
    """
    Longer corridor strictly beyond the shield: shield upper bound < o_x <= d_look.
    """
    if d_look is None:
        d_look = cfg.d_look
    assert d_look > cfg.shield_upper, "d_look ({}) must exceed the shield upper bound ({}).".format(
        d_look, cfg.shield_upper
    )
    points = as_points(cloud)
    return points[mask_look(points, cfg, d_look)]


def partition_front_safe(cloud, cfg):
    """Forward half of the safe square, where a straight task would drive into an observation."""
    points = as_points(cloud)
    x = points[:, 0]
    return points[(x > 0) & (x <= cfg.d_safe) & (np.abs(points[:, 1]) <= cfg.d_safe)]


def nearest_front(points, kind=FRONT):
    """
    D+ selection: minimum o_x, ties broken by minimum |o_y|, then by beam order.
    """
    points = as_points(points)
    if points.shape[0] == 0:
        return None
    order = np.lexsort((np.arange(points.shape[0]), np.abs(points[:, 1]), points[:, 0]))
    x, y = points[order[0]]
    return Disturbance(float(x), float(y), kind)
