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

import math

import numpy as np

from .world_pool import rectangle, register_world, room


def _rect_distance(x0, y0, x1, y1, px, py):
    dx = max(x0 - px, 0.0, px - x1)
    dy = max(y0 - py, 0.0, py - y1)
    return math.hypot(dx, dy)


@register_world("random")
def build_random(seed=0, half_width=2.0, max_boxes=4, min_size=0.3, max_size=0.8, clear=0.5, duration=300.0):
    """
    Closed room with 1 to `max_boxes` axis-aligned rectangles, keeping a disc of radius `clear`
    free around the start pose at the origin. Same seed, same world.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    segments = room(half_width)
    n_boxes = int(rng.integers(1, max_boxes + 1))
    placed = 0
    for _ in range(50 * max_boxes):
        if placed == n_boxes:
            break
        w, h = rng.uniform(min_size, max_size, size=2)
        x0 = rng.uniform(-half_width + 0.1, half_width - 0.1 - w)
        y0 = rng.uniform(-half_width + 0.1, half_width - 0.1 - h)
        if _rect_distance(x0, y0, x0 + w, y0 + h, 0.0, 0.0) <= clear:
            continue
        segments += rectangle(float(x0), float(y0), float(x0 + w), float(y0 + h))
        placed += 1
    heading = float(rng.uniform(-math.pi, math.pi))
    return {
        "name": "random-{}".format(seed),
        "segments": segments,
        "start_poses": {"origin": [0.0, 0.0, heading]},
        "config": {},
        "exit": False,
        "duration": duration,
    }
