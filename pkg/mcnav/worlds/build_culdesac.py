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

from .world_pool import register_world, room


@register_world("culdesac")
def build_culdesac(half_width=2.0, width=1.2, depth=1.2, duration=60.0, epsilon_long=0.02):
    """
    Three-walled pocket against the +x wall of a square room, opening towards -x.
    The robot starts just inside the mouth, straight in or turned by 45 degrees.
    """
    back = half_width
    mouth = back - depth
    side = 0.5 * width
    segments = room(half_width) + [
        [mouth, side, back, side],
        [mouth, -side, back, -side],
    ]
    inside = mouth + 0.1
    return {
        "name": "culdesac",
        "segments": segments,
        "start_poses": {
            "centre": [inside, 0.0, 0.0],
            "left": [inside, -0.25 * width, 0.25 * math.pi],
            "right": [inside, 0.25 * width, -0.25 * math.pi],
        },
        # a robot in the pocket sees both side walls at width / 2 = 0.6 m, inside d_min
        "config": {"safety": {"d_min": 0.7}, "noise": {"epsilon_long": epsilon_long}},
        "cutoff": [mouth, side, mouth, -side],
        "exit": True,
        "duration": duration,
    }
