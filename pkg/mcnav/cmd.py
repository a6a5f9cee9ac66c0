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

import argparse
import json
import os
import sys
from cmd import Cmd

from .agents import global_agents
from .checks import global_suites, run_checks
from .file_loader import load_scenario, resolve_scenario
from .report import compute_metrics, export, latency_stats, latency_table, replay
from .runner import run_batch
from .utils import ConfigError, PropertyViolation, log, log_file, set_verbosity

HELP_USAGE = 0
HELP_INFO = 1

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2


class TraceShell(Cmd):
    prompt = "(mcnav) "

    def __init__(self, trace, metrics=None):
        Cmd.__init__(self)

        self.helps = {
            "info": ["[usage]: `info`", "[info]: print scenario, agent, seed and how the run ended"],
            "plans": ["[usage]: `plans`", "[info]: list every replan with its plan and latency"],
            "plan": ["[usage]: `plan {int}`", "[info]: show partitions, labels and path of the {int}th replan"],
            "step": ["[usage]: `step {int}`", "[info]: show the pose, task and command of control step {int}"],
            "metrics": ["[usage]: `metrics`", "[info]: print the metrics of the run"],
            "q": ["[usage]: `q`", "[info]: quit cmd"],
        }

        self.trace = trace
        self.metrics = metrics if metrics is not None else compute_metrics(trace)
        self.steps = {r["step"]: r for r in trace.of_type("step")}

    def do_info(self, line):
        header = self.trace.header
        for key in ("scenario", "agent", "start", "seed", "duration", "cutoff"):
            print("{}: {}".format(key, header.get(key)))
        summary = self.trace.summary
        print("ended: {} after {} steps".format(summary.get("reason"), summary.get("steps")))

    def do_plans(self, line):
        plans = self.trace.plan_events
        if not plans:
            print("No replans.")
        for idx, r in enumerate(plans):
            print("{:>3} t={:.1f}s stage {} {} {:.3f} ms".format(idx, r["t"], r["stage"], r["plan"], r["latency_ms"]))

    def do_plan(self, line):
        plans = self.trace.plan_events
        if not self._is_int(line) or not 0 <= int(line) < len(plans):
            print("Param err!")
            self.do_help("plan")
            return
        r = plans[int(line)]
        for key in ("step", "t", "plan", "stage", "terminals", "path", "delta_plus", "d_plus", "expanded"):
            print("{}: {}".format(key, r.get(key)))
        print("labels: {}".format(json.dumps(r.get("labels"))))
        for name, part in (r.get("partitions") or {}).items():
            print("  {}: {}".format(name, json.dumps(part)))
        if r.get("product"):
            print(r["product"])

    def do_step(self, line):
        if not self._is_int(line) or int(line) not in self.steps:
            print("Param err!")
            self.do_help("step")
            return
        r = self.steps[int(line)]
        print("t={:.1f}s pose ({:.3f}, {:.3f}, {:.3f})".format(r["t"], r["x"], r["y"], r["theta"]))
        print("task {} command {} {:.3f}, {} observations".format(r["task"], r["command"], r["speed"], r["n_obs"]))
        for event in self.trace.records:
            if event["type"] not in ("step", "pose") and event.get("step") == int(line):
                print("  {}".format(json.dumps(event)))

    def do_metrics(self, line):
        print("{")
        for key, value in self.metrics.to_dict().items():
            if key != "latency":
                print("  {}: {}".format(key, value))
        print("}")
        if self.metrics.latency:
            print(latency_table(self.metrics.latency))

    def do_help(self, line):
        words = line.split(" ")
        if len(line) == 0:
            print("Available commands:")
            for key in self.helps.keys():
                print("  {}".format(key))
        else:
            for w in words:
                if w in self.helps.keys():
                    print("{}\n{}\n{}".format(w, self.helps[w][HELP_USAGE], self.helps[w][HELP_INFO]))
                else:
                    print("Command {} not exist.".format(w))

    # basic
    def do_q(self, line):
        return True

    def preloop(self):
        print("\nEnter cmd ...\n")

    def emptyline(self):
        pass

    def default(self, line):
        print("Command not found.")

    # utils
    def _is_int(self, s):
        try:
            int(s)
            return True
        except ValueError:
            return False


"""
    command line
"""


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="log debug messages")
    common.add_argument("--quiet", action="store_true", help="log warnings only")

    parser = argparse.ArgumentParser(prog="mcnav", description="model-checking obstacle avoidance in a 2D simulator")
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    run = sub.add_parser("run", parents=[common], help="run a scenario and export traces and metrics")
    run.add_argument("--scenario", required=True, help="scenario file, or the name of a packaged scenario")
    run.add_argument("--agent", default="mc", choices=global_agents.names())
    run.add_argument("--seed", type=int, default=0, help="seed of the first run, run i uses seed + i")
    run.add_argument("--duration", type=float, default=None, help="seconds, defaults to the scenario's")
    run.add_argument("--runs", type=int, default=1)
    run.add_argument("--jobs", type=int, default=1, help="parallel processes for --runs")
    run.add_argument("--out", default="out")
    run.add_argument("--start", default=None, help="start pose name, or `all`")
    run.add_argument("--prefer", choices=("left", "right", "random"), default=None)
    run.add_argument("--config", default=None, help="YAML file layered over the scenario config")
    run.add_argument("--dump-product", action="store_true", help="write the product graph of every replan")

    rep = sub.add_parser("replay", parents=[common], help="recompute metrics from a stored trace")
    rep.add_argument("--trace", required=True)
    rep.add_argument("--interactive", action="store_true", help="open a shell on the trace")

    chk = sub.add_parser("check", parents=[common], help="run the property suites")
    chk.add_argument("--quick", action="store_true", help="smaller batches")
    chk.add_argument("--suite", action="append", choices=global_suites.names(), help="run only this suite")
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--jobs", type=int, default=1)
    return parser


def run_dir(out, name, agent, start, seed):
    return os.path.join(out, "{}-{}-{}-seed{}".format(name, agent, start, seed))


def cmd_run(args):
    if args.runs < 1:
        raise ConfigError("--runs: expected a positive count, got {}".format(args.runs))
    if args.duration is not None and args.duration <= 0:
        raise ConfigError("--duration: expected a positive number of seconds, got {}".format(args.duration))
    scenario = load_scenario(resolve_scenario(args.scenario))
    if args.start == "all":
        starts = list(scenario.start_poses)
    else:
        name = args.start or next(iter(scenario.start_poses))
        scenario.start(name)
        starts = [name]
    overrides = {"agent": {"prefer": args.prefer}} if args.prefer else None

    jobs = []
    for start in starts:
        for i in range(args.runs):
            jobs.append(
                {
                    "scenario": scenario,
                    "agent": args.agent,
                    "start": start,
                    "seed": args.seed + i,
                    "duration": args.duration,
                    "config_file": args.config,
                    "overrides": overrides,
                    "dump": args.dump_product,
                }
            )

    all_plans = []
    for job, (trace, metrics) in zip(jobs, run_batch(jobs, args.jobs)):
        out_dir = run_dir(args.out, scenario.name, job["agent"], job["start"], job["seed"])
        for idx, r in enumerate(trace.plan_events):
            product = r.pop("product", None)
            if product is not None:
                log_file(out_dir, "product-{:03d}.txt".format(idx), product + "\n")
        export(trace, metrics, out_dir)
        all_plans.extend(trace.plan_events)
        log(
            "{} seed {}: length {:.2f} m, in pocket {:.2f} m / {:.1f} s, {} collisions".format(
                job["start"],
                job["seed"],
                metrics.trajectory_length,
                metrics.in_culdesac_length,
                metrics.in_culdesac_time,
                metrics.collisions,
            )
        )
    if all_plans:
        log("latency (ms)\n" + latency_table(latency_stats(all_plans)))
    return EXIT_OK


def cmd_replay(args):
    trace, metrics = replay(args.trace)
    if args.interactive:
        TraceShell(trace, metrics).cmdloop()
    else:
        print(json.dumps(metrics.to_dict(), indent=2))
    return EXIT_OK


def cmd_check(args):
    run_checks(args.suite, quick=args.quick, seed=args.seed, jobs=args.jobs)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "replay": cmd_replay, "check": cmd_check}


def main(argv=None):
    args = build_parser().parse_args(argv)
    set_verbosity(args.verbose, args.quiet)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print("configuration error: {}".format(e), file=sys.stderr)
        return EXIT_CONFIG
    except PropertyViolation as e:
        print("property violation: {}".format(e), file=sys.stderr)
        return EXIT_VIOLATION
    except OSError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_CONFIG
