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

from .world_pool import rectangle, register_world, room


@register_world("playground")
def build_playground(half_width=2.0, pocket=1.2, box=0.4, duration=300.0, epsilon_long=0.02):
    """
    Free-roam room with one free-standing square obstacle and a cul-de-sac in the +x/+y corner,
    formed by the two room walls and one inner wall.
    """
    mouth = half_width - pocket
    bx, by = -0.7, -0.7
    segments = (
        room(half_width)
        + [[mouth, mouth, half_width, mouth]]
        + rectangle(bx - 0.5 * box, by - 0.5 * box, bx + 0.5 * box, by + 0.5 * box)
    )
    return {
        "name": "playground",
        "segments": segments,
        "start_poses": {
            "west": [-1.2, mouth + 0.5 * pocket, 0.0],
            "south": [-0.4, 0.0, 0.25 * math.pi],
        },
        # same margin as the cul-de-sac: a centred robot sees the pocket walls at 0.6 m
        "config": {"safety": {"d_min": 0.7}, "noise": {"epsilon_long": epsilon_long}},
        "cutoff": [mouth, half_width, mouth, mouth],
        "exit": False,
        "duration": duration,
    }
