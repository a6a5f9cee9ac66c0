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

import hashlib
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .agents import get_agent
from .file_loader import Scenario, init_config, load_scenario, load_yaml_file, resolve_scenario
from .report import RunTrace, compute_metrics, cutoff_side, in_pocket
from .sensing import partition_safe, partition_shield
from .sim import HALT, STRAIGHT, RobotState, check_collision, raycast_scan, step_kinematics
from .utils import debug, log, warn

STREAMS = ("noise", "sensor", "agent")


def scan_digest(cloud):
    return hashlib.sha1(np.ascontiguousarray(cloud.points, dtype=float).tobytes()).hexdigest()


def make_rngs(seed):
    """Independent generators for actuation noise, range noise and agent choices, all derived from one seed."""
    children = np.random.SeedSequence(int(seed)).spawn(len(STREAMS))
    return {name: np.random.default_rng(child) for name, child in zip(STREAMS, children)}


def as_scenario(scenario):
    if isinstance(scenario, Scenario):
        return scenario
    return load_scenario(resolve_scenario(scenario))


class Runner(object):
    """
    One closed-loop run: scan, let the agent act, move the robot, check for collisions,
    until the duration elapses, the agent stops or the robot leaves the cul-de-sac.
    """

    def __init__(
        self,
        scenario,
        agent="mc",
        start=None,
        seed=0,
        duration=None,
        config_file=None,
        overrides=None,
        dump=False,
        echo=False,
    ):
        self.scenario = as_scenario(scenario)
        layers = [(self.scenario.source, self.scenario.config, "config")]
        if config_file is not None:
            layers.append((config_file, load_yaml_file(config_file), ""))
        if overrides:
            layers.append(("command line", overrides, ""))
        self.settings = init_config(*layers, echo=echo)

        self.seed = int(seed)
        self.rngs = make_rngs(self.seed)
        self.start_name = start if start is not None else next(iter(self.scenario.start_poses))
        x, y, theta = self.scenario.start(self.start_name)
        self.robot = RobotState(x, y, theta, self.settings.sim.footprint_radius)
        self.duration = float(self.scenario.duration if duration is None else duration)
        self.agent_kind = agent
        self.agent = get_agent(
            agent, self.settings.safety, self.settings.sim, self.settings.agent, rng=self.rngs["agent"], dump=dump
        )

        self.trace = RunTrace(
            {
                "scenario": self.scenario.name,
                "source": self.scenario.source,
                "agent": agent,
                "start": self.start_name,
                "pose": list(self.robot.pose),
                "seed": self.seed,
                "duration": self.duration,
                "cutoff": None if self.scenario.cutoff is None else list(self.scenario.cutoff),
                "exit": self.scenario.exit,
                "config": self.settings.to_dict(),
            }
        )

    def inside(self, robot):
        cutoff = self.scenario.cutoff
        return cutoff is not None and in_pocket(cutoff, robot.x, robot.y)

    def left_pocket(self, robot):
        return cutoff_side(self.scenario.cutoff, robot.x, robot.y) <= -self.settings.sim.exit_clearance

    def run(self):
        safety, sim, noise = self.settings.safety, self.settings.sim, self.settings.noise
        world = self.scenario.world
        dt = safety.dt
        n_steps = int(round(self.duration / dt))

        robot = self.robot
        reason = "duration"
        colliding = check_collision(world, robot)
        been_inside = self.inside(robot)
        prev_clear = False
        violations = 0
        collisions = 0
        step = 0

        for step in range(n_steps):
            t = step * dt
            cloud = raycast_scan(
                world, robot, sim.n_beams, sim.max_range, self.rngs["sensor"], noise.range_noise, timestamp=t * 1000.0
            )
            n_safe = partition_safe(cloud, safety).shape[0]
            n_shield = partition_shield(cloud, safety).shape[0]
            if prev_clear and n_safe > 0:
                violations += 1
                self.trace.add({"type": "safe_violation", "step": step, "t": t, "count": n_safe})
                warn("step {}: {} observation(s) in the safe zone".format(step, n_safe))

            command = self.agent.act(cloud, step, t)
            self.trace.add_pose(
                step,
                t,
                robot,
                kind="step",
                task=self.agent.task.kind,
                command=command.kind,
                speed=command.speed,
                n_obs=len(cloud),
                scan_digest=scan_digest(cloud),
            )
            for event in self.agent.drain_events():
                self.trace.add(event)

            if command.kind == HALT:
                reason = "stop"
                break
            prev_clear = command.kind == STRAIGHT and n_safe == 0 and n_shield == 0

            robot = step_kinematics(robot, command, dt, noise, self.rngs["noise"])
            hit = check_collision(world, robot)
            if hit and not colliding:
                collisions += 1
                self.trace.add(
                    {"type": "collision", "step": step + 1, "t": (step + 1) * dt, "x": robot.x, "y": robot.y}
                )
                log("collision at t={:.1f}s ({:.3f}, {:.3f})".format((step + 1) * dt, robot.x, robot.y))
            colliding = hit

            if self.scenario.cutoff is not None:
                been_inside = been_inside or self.inside(robot)
                if self.scenario.exit and been_inside and self.left_pocket(robot):
                    reason = "exit"
                    step += 1
                    self.trace.add_pose(step, step * dt, robot)
                    break
        else:
            if n_steps > 0:
                step = n_steps
                self.trace.add_pose(step, step * dt, robot)

        self.robot = robot
        self.trace.add(
            {
                "type": "summary",
                "reason": reason,
                "steps": step,
                "t": step * dt,
                "collisions": collisions,
                "safe_violations": violations,
                "plans": len(self.trace.plan_events),
                "executed": self.trace.executed_tasks,
            }
        )
        log(
            "{} on `{}` ({}, seed {}): {} after {:.1f}s, {} plans, {} collisions".format(
                self.agent_kind,
                self.scenario.name,
                self.start_name,
                self.seed,
                reason,
                step * dt,
                len(self.trace.plan_events),
                collisions,
            )
        )
        return self.trace


def run_scenario(
    scenario, agent="mc", start=None, seed=0, duration=None, config_file=None, overrides=None, dump=False
):
    return Runner(scenario, agent, start, seed, duration, config_file, overrides, dump).run()


def _run_job(job):
    trace = run_scenario(**job)
    return trace, compute_metrics(trace)


def run_batch(jobs, n_jobs=1):
    """
    Run every job (keyword arguments of `run_scenario`) and return (trace, metrics) pairs in job order.
    Each run has its own state and seed, so the jobs may run in separate processes.
    """
    jobs = list(jobs)
    if n_jobs <= 1 or len(jobs) <= 1:
        return [_run_job(job) for job in jobs]
    debug("running {} jobs on {} processes".format(len(jobs), n_jobs))
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(_run_job, jobs))
