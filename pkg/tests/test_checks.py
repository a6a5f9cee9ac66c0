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
from types import SimpleNamespace
from unittest import mock

from mcnav.checks import (
    SuiteReport,
    check_plan_records,
    compare_terminal_sets,
    compare_with_oracle,
    global_suites,
    label_assignments,
    run_checks,
    run_suite,
    terminal_sets,
    valuation_from_labels,
)
from mcnav.model import Nfa, build_dts
from mcnav.sensing import SafetyConfig
from mcnav.utils import PropertyViolation, set_verbosity


class TestSuites(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        set_verbosity(quiet=True)

    @classmethod
    def tearDownClass(cls):
        set_verbosity()

    def test_registered(self):
        expected = ["product", "golden", "numerics", "guarantees", "culdesac", "playground"]
        self.assertEqual(global_suites.names(), expected)
        with self.assertRaises(KeyError):
            global_suites["nothing"]

    def test_golden(self):
        report = run_suite("golden")
        self.assertTrue(report.ok, str(report))
        self.assertIn("TL -> TS -> TR -> T0", str(report))

    def test_numerics_quick(self):
        report = run_suite("numerics", quick=True, seed=3)
        self.assertTrue(report.ok, str(report))

    def test_enumeration_sizes(self):
        self.assertEqual(sum(1 for _ in label_assignments()), 3**7)
        self.assertEqual(sum(1 for _ in terminal_sets()), 2**7)

    def test_product_full(self):
        report = run_suite("product")
        self.assertTrue(report.ok, str(report))
        self.assertIn("279936 (valuation, terminal set) pairs", str(report))
        self.assertLess(report.elapsed, 2.0)

    def test_grouped_oracle_matches_per_set(self):
        dts, nfa = build_dts(SafetyConfig()), Nfa()
        subsets = list(terminal_sets())
        for labels in list(label_assignments())[::97]:
            val = valuation_from_labels(labels)
            self.assertEqual(list(compare_terminal_sets(dts, val, nfa, subsets)), [])
            for terminals in subsets[::9]:
                self.assertIsNone(compare_with_oracle(dts, val, nfa, terminals))

    def test_guarantees_quick(self):
        report = run_suite("guarantees", quick=True)
        self.assertTrue(report.ok, str(report))
        self.assertIn("10 worlds x 60s", str(report))

    def test_culdesac_quick(self):
        report = run_suite("culdesac", quick=True)
        self.assertTrue(report.ok, str(report))

    def test_playground(self):
        report = run_suite("playground", quick=True)
        self.assertTrue(report.ok, str(report))
        self.assertIn("time in the pocket", str(report))

    def test_run_checks_returns_reports(self):
        reports = run_checks(["golden"])
        self.assertEqual([r.name for r in reports], ["golden"])

    def test_failure_raises(self):
        @global_suites.register("always_fails")
        def always_fails(report, **kwargs):
            report.fail("on purpose")

        try:
            with self.assertRaisesRegex(PropertyViolation, "always_fails \\(1\\)"):
                run_checks(["golden", "always_fails"])
        finally:
            global_suites.pool.pop("always_fails")


def stopping_batch(stops):
    """A run_batch stand-in whose runs stop after 12 s whenever `stops(seed)` holds."""

    def run(batch, jobs=1):
        results = []
        for job in batch:
            stopped = stops(job["seed"])
            trace = SimpleNamespace(
                executed_tasks=[],
                plan_events=[],
                stops=[{"reason": "no plan", "intrusion": False}] if stopped else [],
                summary={"reason": "stop" if stopped else "duration", "t": 12.0 if stopped else job["duration"]},
            )
            results.append((trace, SimpleNamespace(safe_violations=0, collisions=0, intrusions=0)))
        return results

    return run


class TestGuaranteeWorlds(unittest.TestCase):
    def test_stopped_worlds_are_replaced(self):
        with mock.patch("mcnav.checks.run_batch", stopping_batch(lambda seed: seed % 2 == 1)):
            report = run_suite("guarantees", quick=True)
        self.assertTrue(report.ok, str(report))
        replaced = [line for line in report.lines if line.startswith("replaced ")]
        self.assertEqual(len(replaced), 9)
        self.assertIn("seed 1: stopped (no plan) after 12.0s", replaced[0])
        self.assertIn("10 worlds x 60s, 9 replaced", str(report))

    def test_too_many_stops_fail(self):
        with mock.patch("mcnav.checks.run_batch", stopping_batch(lambda seed: True)):
            report = run_suite("guarantees", quick=True)
        self.assertFalse(report.ok)
        self.assertIn("only 0 of 10 runs lasted 60s after 30 worlds", str(report))



class TestReport(unittest.TestCase):
    def test_str(self):
        report = SuiteReport("demo")
        report.note("one line")
        self.assertTrue(str(report).startswith("PASS demo"))
        for i in range(25):
            report.fail("bad {}".format(i))
        text = str(report)
        self.assertTrue(text.startswith("FAIL demo"))
        self.assertIn("violation: bad 19", text)
        self.assertNotIn("violation: bad 20", text)
        self.assertIn("... 5 more", text)

    def test_plan_records(self):
        report = SuiteReport("plans")
        check_plan_records(
            report,
            [
                {"t": 1.0, "latency_ms": 0.4, "plan": ["TL", "T0"], "stage": 2},
                {"t": 2.0, "latency_ms": 0.4, "plan": None, "stage": 4},
                {"t": 3.0, "latency_ms": 150.0, "plan": ["TL", "TL", "T0"], "stage": 3},
                {"t": 4.0, "latency_ms": 0.4, "plan": ["TL", "TL", "T0"], "stage": 4},
            ],
        )
        self.assertEqual(len(report.failures), 2)


if __name__ == "__main__":
    unittest.main()
