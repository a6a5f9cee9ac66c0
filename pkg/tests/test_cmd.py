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

import contextlib
import io
import json
import os
import tempfile
import unittest

from mcnav.cmd import EXIT_CONFIG, EXIT_OK, EXIT_VIOLATION, TraceShell, main
from mcnav.report import load_trace
from mcnav.utils import set_verbosity


def quietly(argv):
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv + ["--quiet"])
    return code, out.getvalue(), err.getvalue()


class TestMain(unittest.TestCase):
    @classmethod
    def tearDownClass(cls):
        set_verbosity()

    def test_run_and_replay(self):
        with tempfile.TemporaryDirectory() as tmp:
            code, _, _ = quietly(["run", "--scenario", "empty_room", "--duration", "1", "--out", tmp])
            self.assertEqual(code, EXIT_OK)
            run_dir = os.path.join(tmp, "empty_room-mc-centre-seed0")
            self.assertEqual(
                sorted(os.listdir(run_dir)), ["latency.csv", "metrics.json", "trace.jsonl", "trajectory.csv"]
            )
            with open(os.path.join(run_dir, "metrics.json")) as f:
                stored = json.load(f)

            code, out, _ = quietly(["replay", "--trace", os.path.join(run_dir, "trace.jsonl")])
            self.assertEqual(code, EXIT_OK)
            self.assertEqual(json.loads(out), stored)

    def test_runs_and_starts(self):
        with tempfile.TemporaryDirectory() as tmp:
            argv = ["run", "--scenario", "culdesac", "--agent", "baseline", "--start", "all", "--runs", "2"]
            code, _, _ = quietly(argv + ["--duration", "0.4", "--seed", "5", "--out", tmp])
            self.assertEqual(code, EXIT_OK)
            expected = [
                "culdesac-baseline-{}-seed{}".format(start, seed)
                for start in ("centre", "left", "right")
                for seed in (5, 6)
            ]
            self.assertEqual(sorted(os.listdir(tmp)), sorted(expected))

    def test_dump_product(self):
        with tempfile.TemporaryDirectory() as tmp:
            argv = ["run", "--scenario", "culdesac", "--duration", "3", "--dump-product", "--out", tmp]
            self.assertEqual(quietly(argv)[0], EXIT_OK)
            run_dir = os.path.join(tmp, "culdesac-mc-centre-seed0")
            self.assertIn("product-000.txt", os.listdir(run_dir))
            with open(os.path.join(run_dir, "product-000.txt")) as f:
                self.assertIn("[accepting]", f.read())
            trace = load_trace(os.path.join(run_dir, "trace.jsonl"))
            self.assertNotIn("product", trace.plan_events[0])

    def test_config_errors(self):
        with tempfile.TemporaryDirectory() as tmp:
            code, _, err = quietly(["run", "--scenario", os.path.join(tmp, "missing.json")])
            self.assertEqual(code, EXIT_CONFIG)
            self.assertIn("no such scenario file", err)

            code, _, err = quietly(["run", "--scenario", "empty_room", "--runs", "0"])
            self.assertEqual(code, EXIT_CONFIG)
            self.assertIn("--runs", err)

            code, _, err = quietly(["run", "--scenario", "culdesac", "--start", "north", "--out", tmp])
            self.assertEqual(code, EXIT_CONFIG)

            bad = os.path.join(tmp, "bad.yaml")
            with open(bad, "w") as f:
                f.write("safety:\n  d_safe: fast\n")
            code, _, err = quietly(["run", "--scenario", "empty_room", "--config", bad, "--out", tmp])
            self.assertEqual(code, EXIT_CONFIG)
            self.assertIn("`safety.d_safe`", err)

            code, _, err = quietly(["replay", "--trace", os.path.join(tmp, "none.jsonl")])
            self.assertEqual(code, EXIT_CONFIG)

    def test_check(self):
        code, _, _ = quietly(["check", "--quick", "--suite", "golden"])
        self.assertEqual(code, EXIT_OK)

    def test_exit_codes_differ(self):
        self.assertEqual((EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG), (0, 1, 2))

    def test_usage_error(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(["run"])
        self.assertEqual(ctx.exception.code, 2)


class TestTraceShell(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        set_verbosity(quiet=True)
        with tempfile.TemporaryDirectory() as tmp:
            main(["run", "--scenario", "culdesac", "--duration", "3", "--out", tmp, "--quiet"])
            cls.trace = load_trace(os.path.join(tmp, "culdesac-mc-centre-seed0", "trace.jsonl"))

    @classmethod
    def tearDownClass(cls):
        set_verbosity()

    def shell(self, line):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            TraceShell(self.trace).onecmd(line)
        return out.getvalue()

    def test_info(self):
        text = self.shell("info")
        self.assertIn("scenario: culdesac", text)
        self.assertIn("agent: mc", text)

    def test_plans(self):
        text = self.shell("plans")
        self.assertIn("stage 3", text)
        self.assertIn("['TL', 'TL', 'T0']", text)

    def test_plan(self):
        text = self.shell("plan 0")
        self.assertIn("path: ['s0', 's1', 's13', 's14']", text)
        self.assertIn("labels:", text)

    def test_bad_params(self):
        self.assertIn("Param err!", self.shell("plan 99"))
        self.assertIn("Param err!", self.shell("step x"))

    def test_step(self):
        self.assertIn("task T0 command straight", self.shell("step 0"))

    def test_metrics(self):
        self.assertIn("trajectory_length", self.shell("metrics"))

    def test_help_and_unknown(self):
        self.assertIn("Available commands:", self.shell("help"))
        self.assertIn("Command not found.", self.shell("dance"))
        self.assertTrue(TraceShell(self.trace).onecmd("q"))


if __name__ == "__main__":
    unittest.main()
