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

from .world_pool import global_world_pool, build_scenario, register_world, rectangle, room

import os
import importlib

cur_dir = os.path.split(os.path.realpath(__file__))[0]
for filename in sorted(os.listdir(cur_dir)):
    if filename.startswith("build_") and filename.endswith(".py"):
        module_name = filename.rpartition(".")[0]
        importlib.import_module(__name__ + "." + module_name)

__all__ = [
    "global_world_pool",
    "build_scenario",
    "register_world",
    "rectangle",
    "room",
]
