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

from mcnav import PlanRequest, Planner, PointCloud, SafetyConfig, plan_generate
from mcnav.sensing import FRONT, Disturbance
from mcnav.tasks import T0, TL, TR, TS

# nearest front disturbance shared by the cases below; it shifts everything back by 0.5
AHEAD = Disturbance(0.8, 0.0, FRONT)

OPEN = [(0.8, 0.0)]
BOXED = [(0.8, 0.0), (0.5, 0.4), (0.5, -0.4)]
CORRIDOR = [(0.8, 0.0), (0.5, 0.8), (0.5, -0.4)]
# both sides far, every longitudinal region occupied
CLOSED = [(0.0, 0.8), (0.0, -0.8), (0.6, 0.5), (-0.6, 0.5), (0.6, -0.5), (-0.6, -0.5)]


def request(points, d_plus=AHEAD, cfg=None):
    return PlanRequest(PointCloud.from_observations(points), d_plus, cfg or SafetyConfig())


class TestPlanner(unittest.TestCase):
    @parameterized.expand(
        [
            ("open_sides", OPEN, 2, [TL, T0], ["s3", "s4"]),
            ("boxed_in", BOXED, 3, [TL, TL, T0], ["s14"]),
            ("corridor", CORRIDOR, 4, [TL, TS, TR, T0], ["s11", "s7"]),
        ]
    )
    def test_stages(self, _, points, stage, plan, terminals):
        result = plan_generate(request(points))
        self.assertTrue(result.found)
        self.assertEqual(result.stage, stage)
        self.assertEqual(result.plan, plan)
        self.assertLessEqual(set(terminals), set(result.to_record()["terminals"]))

    def test_no_plan(self):
        result = plan_generate(request(CLOSED, d_plus=None))
        self.assertFalse(result.found)
        self.assertEqual(result.stage, 4)
        self.assertEqual(result.terminals, frozenset())
        record = result.to_record()
        self.assertIsNone(record["plan"])
        self.assertIsNone(record["path"])
        names = ["boxed", "left", "left+", "left-", "right", "right+", "right-"]
        self.assertEqual(sorted(record["partitions"]), names)

    def test_shift_is_recorded(self):
        result = plan_generate(request(BOXED))
        self.assertAlmostEqual(result.delta_plus, 0.5, places=12)
        self.assertEqual(result.d_plus, AHEAD)
        self.assertEqual(result.to_record()["path"], ["s0", "s1", "s13", "s14"])

    def test_tuple_d_plus(self):
        result = plan_generate(request(OPEN, d_plus=(0.8, 0.0)))
        self.assertEqual(result.d_plus, AHEAD)
        self.assertEqual(result.plan, [TL, T0])

    def test_prefer_right(self):
        result = Planner(SafetyConfig(), prefer="right")(request(OPEN))
        self.assertEqual(result.plan, [TR, T0])

    def test_prefer_random_is_reproducible(self):
        plans = [
            Planner(SafetyConfig(), "random", np.random.default_rng(3))(request(OPEN)).plan.tasks for _ in range(3)
        ]
        self.assertEqual(plans[0], plans[1])
        self.assertEqual(plans[1], plans[2])

    def test_dump(self):
        planner = Planner(SafetyConfig())
        planner(request(CORRIDOR), dump=True)
        self.assertIn("s5,q0 -T0-> s7,q1 [accepting]", planner.last_dump.splitlines())

    def test_latency(self):
        planner = Planner(SafetyConfig())
        for points in (OPEN, BOXED, CORRIDOR, CLOSED):
            self.assertLess(planner(request(points)).latency, 100.0)

    def test_labels_in_record(self):
        labels = plan_generate(request(OPEN)).to_record()["labels"]
        self.assertEqual(labels["s3"], ["horizon", "safe"])
        self.assertEqual(labels["s0"], ["safe"])


if __name__ == "__main__":
    unittest.main()
