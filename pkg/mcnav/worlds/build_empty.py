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

from .world_pool import register_world, room


@register_world("empty_room")
def build_empty_room(half_width=4.0, duration=10.0):
    return {
        "name": "empty_room",
        "segments": room(half_width),
        "start_poses": {"centre": [0.0, 0.0, 0.0]},
        "config": {},
        "exit": False,
        "duration": duration,
    }
