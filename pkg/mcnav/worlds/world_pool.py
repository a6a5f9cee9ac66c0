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

from ..file_loader import parse_scenario

# NOTICE: builders return the JSON layout of a scenario file, so `mcnav.configs.scenarios` can be regenerated from them


class WorldPool(object):
    def __init__(self):
        self.funcs = {}

    def register(self, name):
        def do_reg(func):
            self.funcs[name] = func
            return func

        return do_reg

    def names(self):
        return sorted(self.funcs.keys())

    def layout(self, name, **kwargs):
        if name not in self.funcs:
            raise KeyError("unknown world `{}`, expected one of {}".format(name, self.names()))
        return self.funcs[name](**kwargs)


global_world_pool = WorldPool()


def register_world(name):
    return global_world_pool.register(name)


def build_scenario(name, **kwargs):
    return parse_scenario(global_world_pool.layout(name, **kwargs), "<{}>".format(name))


def room(half_width, cx=0.0, cy=0.0):
    """Four walls of a closed square room centred at (cx, cy)."""
    x0, y0, x1, y1 = cx - half_width, cy - half_width, cx + half_width, cy + half_width
    return [[x0, y0, x1, y0], [x1, y0, x1, y1], [x1, y1, x0, y1], [x0, y1, x0, y0]]


def rectangle(x0, y0, x1, y1):
    return [[x0, y0, x1, y0], [x1, y0, x1, y1], [x1, y1, x0, y1], [x0, y1, x0, y0]]
