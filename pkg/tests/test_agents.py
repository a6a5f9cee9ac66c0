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
import unittest

import numpy as np

from mcnav.agents import AgentConfig, BaselineAgent, MCAgent, get_agent, global_agents
from mcnav.sensing import PointCloud, SafetyConfig
from mcnav.sim import HALT, ROTATE, STRAIGHT, SimConfig
from mcnav.tasks import T0, TL, TR, TS, Task
from mcnav.utils import set_verbosity


def cloud_of(points):
    return PointCloud.from_observations(points)


def make(kind, **agent_kwargs):
    return get_agent(kind, SafetyConfig(), SimConfig(), AgentConfig(**agent_kwargs), rng=np.random.default_rng(0))


class TestPool(unittest.TestCase):
    def test_names(self):
        self.assertEqual(global_agents.names(), ["baseline", "mc"])
        self.assertIsInstance(make("mc"), MCAgent)
        self.assertIsInstance(make("baseline"), BaselineAgent)
        with self.assertRaises(KeyError):
            make("teleport")

    def test_config_problems(self):
        self.assertEqual(AgentConfig().problems(), [])
        fields = [f for f, _ in AgentConfig(prefer="up", baseline_turn="right").problems()]
        self.assertEqual(fields, ["prefer", "baseline_turn"])


class TestMCAgent(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        set_verbosity(quiet=True)

    @classmethod
    def tearDownClass(cls):
        set_verbosity()

    def test_open_road(self):
        agent = make("mc")
        command = agent.act(cloud_of([]))
        self.assertEqual(command.kind, STRAIGHT)
        self.assertEqual(command.speed, 0.2)
        self.assertEqual(agent.drain_events(), [])

    def test_replan_then_rotate(self):
        agent = make("mc")
        command = agent.act(cloud_of([(0.8, 0.0)]), step=1, t=0.2)
        self.assertEqual(command.kind, STRAIGHT)
        self.assertEqual(agent.task.kind, TS)
        self.assertEqual(agent.plan, [TL, T0])
        events = agent.drain_events()
        self.assertEqual([e["type"] for e in events], ["plan", "task"])
        self.assertEqual(events[0]["plan"], [TL, T0])
        self.assertEqual((events[0]["step"], events[0]["t"]), (1, 0.2))

        command = agent.act(cloud_of([(0.38, 0.0)]), step=2, t=0.4)
        self.assertEqual(command.kind, ROTATE)
        self.assertGreater(command.speed, 0)
        self.assertEqual(agent.task.kind, TL)
        self.assertEqual(agent.task.trigger.x, 0.38)

    def test_intrusion_halts(self):
        agent = make("mc")
        command = agent.act(cloud_of([(0.2, 0.0)]))
        self.assertEqual(command.kind, HALT)
        self.assertEqual(agent.stopped, "intrusion")
        stop = agent.drain_events()[-1]
        self.assertEqual((stop["type"], stop["intrusion"]), ("stop", True))

    def test_prefer_right(self):
        agent = make("mc", prefer="right")
        agent.act(cloud_of([(0.8, 0.0)]))
        self.assertEqual(agent.plan, [TR, T0])

    def test_rotation_is_capped(self):
        agent = make("mc")
        agent.task = Task(TL)
        speeds = [agent.rotation_command().speed for _ in range(7)]
        np.testing.assert_allclose(speeds[:5], [0.5 * math.pi] * 5)
        self.assertAlmostEqual(speeds[5], 0.05 / 0.2, places=9)
        self.assertAlmostEqual(speeds[6], 0.5 * math.pi, places=9)


class TestBaselineAgent(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        set_verbosity(quiet=True)

    @classmethod
    def tearDownClass(cls):
        set_verbosity()

    def test_look_is_ignored(self):
        agent = make("baseline")
        self.assertEqual(agent.act(cloud_of([(0.8, 0.0)])).kind, STRAIGHT)

    def test_shield_spawns_left_turn(self):
        agent = make("baseline")
        command = agent.act(cloud_of([(0.38, 0.0)]))
        self.assertEqual(command.kind, ROTATE)
        self.assertEqual(agent.task.kind, TL)
        self.assertIsNone(agent.plan)

    def test_random_turns_are_seeded(self):
        turns = []
        for _ in range(2):
            agent = make("baseline", baseline_turn="random")
            seen = []
            for _ in range(10):
                agent.task = Task(T0)
                agent.act(cloud_of([(0.38, 0.0)]))
                seen.append(agent.task.kind)
            turns.append(seen)
        self.assertEqual(turns[0], turns[1])
        self.assertTrue(set(turns[0]) <= {TL, TR})


if __name__ == "__main__":
    unittest.main()
