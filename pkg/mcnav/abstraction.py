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
Spatial abstraction of future task sequences.

The lateral partitions answer "what would the robot meet if it turned and drove sideways",
the longitudinal ones "what would it meet after turning back and driving along x again".
Both work on a cloud already shifted by the front offset, so they describe the robot as if
it had already reached the disturbance that triggered planning.
"""

import numpy as np

from .sensing import LEFT, RIGHT, Disturbance, as_points

POSITIVE = "positive"
NEGATIVE = "negative"


class LateralPartition(object):
    def __init__(self, side, members=None):
        assert side in (LEFT, RIGHT), "side must be `left` or `right`, got {}".format(side)
        self.side = side
        self.members = as_points(members if members is not None else [])

    @property
    def empty(self):
        return self.members.shape[0] == 0

    @property
    def nearest(self):
        if self.empty:
            return None
        x, y = self.members[0]
        return Disturbance(float(x), float(y), self.side)

    def to_record(self):
        return {"side": self.side, "members": self.members.tolist()}

    def __len__(self):
        return self.members.shape[0]

    def __repr__(self):
        return "LateralPartition({}, {})".format(self.side, self.members.tolist())


class LongitudinalPartition(object):
    def __init__(self, lateral_side, sign, members=None, delta=0.0):
        assert sign in (POSITIVE, NEGATIVE), "sign must be `positive` or `negative`, got {}".format(sign)
        self.lateral_side = lateral_side
        self.sign = sign
        self.delta = delta
        self.members = as_points(members if members is not None else [])

    @property
    def empty(self):
        return self.members.shape[0] == 0

    @property
    def name(self):
        return "{}{}".format(self.lateral_side or "", "+" if self.sign == POSITIVE else "-")

    def to_record(self):
        return {
            "side": self.lateral_side,
            "sign": self.sign,
            "delta": self.delta,
            "members": self.members.tolist(),
        }

    def __len__(self):
        return self.members.shape[0]

    def __repr__(self):
        return "LongitudinalPartition({}, {})".format(self.name, self.members.tolist())


class BoxedInEvidence(object):
    def __init__(self, pairs=None):
        self.pairs = list(pairs or [])

    def __bool__(self):
        return len(self.pairs) > 0

    def to_record(self):
        return [[left.to_record(), right.to_record()] for left, right in self.pairs]

    def __repr__(self):
        return "BoxedInEvidence({})".format(self.pairs)


def front_offset(d_plus, d_safe):
    """
    Longitudinal offset that moves the robot up to the front disturbance.
    Zero when the disturbance is already within d_safe.
    """
    if d_plus is None or d_plus.x <= d_safe:
        return 0.0
    return d_plus.x - d_safe


def shift_longitudinal(cloud, delta_plus):
    points = as_points(cloud)
    if delta_plus == 0.0:
        return points
    return points - np.array([delta_plus, 0.0])


def lateral_mask(points, d_safe, d_max, left):
    x = points[:, 0]
    y = points[:, 1]
    if left:
        return (np.abs(x) <= d_safe) & (y > 0) & (y <= d_max)
    return (np.abs(x) <= d_safe) & (y >= -d_max) & (y < 0)


def construct_lateral(cloud, d_safe, d_max, left=True):
    """
    Nearest lateral disturbance on one side.

    Keeps the observation minimising |o_y| among those with |o_x| <= d_safe and
    0 < o_y <= d_max (left) or -d_max <= o_y < 0 (right). Ties go to the first in beam order.
    """
    points = as_points(cloud)
    side = LEFT if left else RIGHT
    candidates = points[lateral_mask(points, d_safe, d_max, left)]
    if candidates.shape[0] == 0:
        return LateralPartition(side)
    idx = int(np.argmin(np.abs(candidates[:, 1])))
    return LateralPartition(side, candidates[idx : idx + 1])


def longitudinal_mask(points, d_safe, width, positive, beta):
    reach = d_safe + beta * d_safe
    x = points[:, 0]
    if positive:
        along = (x > d_safe) & (x <= reach)
    else:
        along = (x >= -reach) & (x < -d_safe)
    return along & (np.abs(points[:, 1]) <= 0.5 * width)


def construct_longitudinal(cloud, delta, d_safe, width, positive=True, beta=2.0, side=None):
    """
    Shift every observation laterally by `delta` and keep the ones inside the
    forward (positive) or backward (negative) corridor. All members are returned, shifted.
    """
    points = as_points(cloud)
    shifted = points - np.array([0.0, delta])
    members = shifted[longitudinal_mask(shifted, d_safe, width, positive, beta)]
    return LongitudinalPartition(side, POSITIVE if positive else NEGATIVE, members, delta)


def boxed_in(pl, pr, d_min):
    assert pl.side == LEFT and pr.side == RIGHT, "boxed_in wants (left, right) partitions."
    pairs = []
    for lx, ly in pl.members:
        if not 0 < ly <= d_min:
            continue
        for rx, ry in pr.members:
            if -d_min <= ry < 0:
                pairs.append((Disturbance(float(lx), float(ly), LEFT), Disturbance(float(rx), float(ry), RIGHT)))
    return BoxedInEvidence(pairs)


def lateral_offsets(pl, pr, cfg):
    """
    Lateral displacement of the robot after driving sideways up to each lateral disturbance:
    D^L_y - d_safe on the left, D^R_y + d_safe on the right, None for an empty side.
    """
    left = pl.nearest
    right = pr.nearest
    delta_left = None if left is None else left.y - cfg.d_safe
    delta_right = None if right is None else right.y + cfg.d_safe
    return delta_left, delta_right


# first-order conditions, evaluated observation by observation


def existential_lateral(observations, d_safe, d_max, left=True):
    for ox, oy in observations:
        if abs(ox) > d_safe:
            continue
        if left and 0 < oy <= d_max:
            return True
        if not left and -d_max <= oy < 0:
            return True
    return False


def existential_longitudinal(observations, delta, d_safe, width, positive=True, beta=2.0):
    reach = d_safe + beta * d_safe
    for ox, oy in observations:
        oy = oy - delta
        if abs(oy) > 0.5 * width:
            continue
        if positive and d_safe < ox <= reach:
            return True
        if not positive and -reach <= ox < -d_safe:
            return True
    return False
