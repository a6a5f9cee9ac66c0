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

import unittest

import numpy as np
from parameterized import parameterized

from mcnav.report import in_pocket
from mcnav.sim import RobotState, clearance
from mcnav.worlds import build_scenario, global_world_pool, rectangle, room


class TestWorldPool(unittest.TestCase):
    def test_registered(self):
        self.assertEqual(global_world_pool.names(), ["culdesac", "empty_room", "playground", "random"])
        with self.assertRaises(KeyError):
            global_world_pool.layout("maze")

    def test_room_is_closed(self):
        walls = np.array(room(1.0))
        np.testing.assert_array_equal(walls[:, 2:], np.roll(walls[:, :2], -1, axis=0))
        self.assertEqual(rectangle(0, 0, 1, 2)[1], [1, 0, 1, 2])

    @parameterized.expand([("culdesac",), ("playground",)])
    def test_starts_are_clear(self, name):
        scenario = build_scenario(name)
        for pose in scenario.start_poses.values():
            self.assertGreater(clearance(scenario.world, RobotState(*pose)), 0.2)

    def test_culdesac_starts_inside(self):
        scenario = build_scenario("culdesac")
        for x, y, _ in scenario.start_poses.values():
            self.assertTrue(in_pocket(scenario.cutoff, x, y))

    def test_playground_starts_outside(self):
        scenario = build_scenario("playground")
        for x, y, _ in scenario.start_poses.values():
            self.assertFalse(in_pocket(scenario.cutoff, x, y))
        self.assertTrue(in_pocket(scenario.cutoff, 1.4, 1.4))


class TestRandomWorlds(unittest.TestCase):
    def test_same_seed_same_world(self):
        a = build_scenario("random", seed=11)
        b = build_scenario("random", seed=11)
        np.testing.assert_array_equal(a.world.segments, b.world.segments)
        self.assertEqual(a.start("origin"), b.start("origin"))

    @parameterized.expand([(seed,) for seed in range(20)])
    def test_origin_is_clear(self, seed):
        scenario = build_scenario("random", seed=seed)
        self.assertGreaterEqual(len(scenario.world), 8)
        self.assertEqual(len(scenario.world) % 4, 0)
        self.assertGreater(clearance(scenario.world, RobotState(0.0, 0.0, 0.0)), 0.5)
        self.assertEqual(scenario.name, "random-{}".format(seed))


if __name__ == "__main__":
    unittest.main()
