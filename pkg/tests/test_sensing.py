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
from hypothesis import given, settings
from hypothesis import strategies as st
from parameterized import parameterized

from mcnav.sensing import (
    FRONT,
    PointCloud,
    SafetyConfig,
    beam_margin,
    mask_shield,
    nearest_front,
    partition_front_safe,
    partition_look,
    partition_safe,
    partition_shield,
)

coord = st.floats(min_value=-1.5, max_value=1.5, allow_nan=False, allow_infinity=False)
clouds = st.lists(st.tuples(coord, coord), max_size=40)


def cloud_of(points):
    return PointCloud.from_observations(points)


def as_set(points):
    return {(float(x), float(y)) for x, y in points}


class TestPartitions(unittest.TestCase):
    def setUp(self):
        self.cfg = SafetyConfig()

    @parameterized.expand(
        [
            ("empty", [], []),
            ("inside", [(0.1, 0.1)], [(0.1, 0.1)]),
            ("one_out", [(0.31, 0.1), (0.2, -0.2)], [(0.2, -0.2)]),
        ]
    )
    def test_safe(self, _, cloud, expected):
        self.assertEqual(as_set(partition_safe(cloud_of(cloud), self.cfg)), as_set(expected))

    @parameterized.expand(
        [
            ("empty", [], []),
            ("ahead", [(0.35, 0.0)], [(0.35, 0.0)]),
            ("too_wide", [(0.35, 0.4)], []),
        ]
    )
    def test_shield(self, _, cloud, expected):
        self.assertEqual(as_set(partition_shield(cloud_of(cloud), self.cfg)), as_set(expected))

    @parameterized.expand(
        [
            ("empty", [], []),
            ("corridor", [(0.8, 0.1)], [(0.8, 0.1)]),
            ("in_shield", [(0.35, 0.0)], []),
        ]
    )
    def test_look(self, _, cloud, expected):
        self.assertEqual(as_set(partition_look(cloud_of(cloud), self.cfg, 1.0)), as_set(expected))

    def test_look_rejects_short_corridor(self):
        with self.assertRaises(AssertionError):
            partition_look(cloud_of([(0.8, 0.1)]), self.cfg, 0.4)

    def test_keeps_beam_order(self):
        cloud = cloud_of([(0.2, 0.1), (0.9, 0.0), (-0.1, -0.2), (0.1, 0.25)])
        np.testing.assert_array_equal(partition_safe(cloud, self.cfg), [[0.2, 0.1], [-0.1, -0.2], [0.1, 0.25]])

    def test_shield_bounds(self):
        self.assertAlmostEqual(self.cfg.shield_upper, 0.4, places=12)
        self.assertAlmostEqual(self.cfg.half_width, 0.3, places=12)
        self.assertAlmostEqual(self.cfg.long_reach, 0.9, places=12)

    def test_beam_margin(self):
        points = np.array([[0.3, 0.4], [0.5, 0.0]])
        np.testing.assert_allclose(beam_margin(points, 0.01), [0.25 / 0.3 * 0.01, 0.005])
        np.testing.assert_array_equal(beam_margin(points, 0.0), [0.0, 0.0])

    def test_shield_margin_only_widens(self):
        points = np.array([[0.35, 0.305], [0.35, 0.33], [0.45, 0.0], [0.35, 0.0]])
        np.testing.assert_array_equal(mask_shield(points, self.cfg), [False, False, False, True])
        np.testing.assert_array_equal(mask_shield(points, self.cfg, 0.0175), [True, False, False, True])

    def test_front_safe(self):
        cloud = cloud_of([(0.2, 0.0), (-0.2, 0.0), (0.2, 0.35)])
        self.assertEqual(as_set(partition_front_safe(cloud, self.cfg)), {(0.2, 0.0)})

    @given(clouds)
    @settings(max_examples=200, deadline=None)
    def test_disjoint(self, points):
        cloud = cloud_of(points)
        safe = as_set(partition_safe(cloud, self.cfg))
        shield = as_set(partition_shield(cloud, self.cfg))
        look = as_set(partition_look(cloud, self.cfg))
        self.assertFalse(shield & look)
        self.assertFalse(safe & shield)

    @given(clouds, st.tuples(coord, coord))
    @settings(max_examples=200, deadline=None)
    def test_monotone(self, points, extra):
        before = cloud_of(points)
        after = cloud_of(points + [extra])
        for part in (partition_safe, partition_shield, partition_look):
            self.assertTrue(as_set(part(before, self.cfg)) <= as_set(part(after, self.cfg)))


class TestNearestFront(unittest.TestCase):
    def test_empty(self):
        self.assertIsNone(nearest_front(np.zeros((0, 2))))

    def test_min_x_first(self):
        d = nearest_front(np.array([[0.9, 0.0], [0.5, 0.2], [0.7, -0.1]]))
        self.assertEqual((d.x, d.y, d.kind), (0.5, 0.2, FRONT))

    def test_ties(self):
        d = nearest_front(np.array([[0.5, 0.2], [0.5, -0.1], [0.5, 0.1]]))
        self.assertEqual((d.x, d.y), (0.5, -0.1))
        d = nearest_front(np.array([[0.5, 0.1], [0.5, -0.1]]))
        self.assertEqual((d.x, d.y), (0.5, 0.1))


class TestPointCloud(unittest.TestCase):
    def test_shape(self):
        self.assertEqual(len(PointCloud([])), 0)
        self.assertEqual(PointCloud([]).points.shape, (0, 2))
        with self.assertRaises(AssertionError):
            PointCloud([[1.0, 2.0, 3.0]])
        with self.assertRaises(AssertionError):
            PointCloud([[np.inf, 0.0]])

    def test_config_problems(self):
        self.assertEqual(SafetyConfig().problems(), [])
        fields = [f for f, _ in SafetyConfig(L=0.5).problems()]
        self.assertIn("L", fields)
        fields = [f for f, _ in SafetyConfig(d_min=1.2).problems()]
        self.assertIn("d_min", fields)
        fields = [f for f, _ in SafetyConfig(d_look=0.4).problems()]
        self.assertIn("d_look", fields)


if __name__ == "__main__":
    unittest.main()
