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

from .planner import Planner, PlanRequest
from .sim import Command
from .tasks import (
    FAILURE,
    QUARTER_TURN,
    T0,
    TL,
    TR,
    TS,
    AgentState,
    ReplanRequest,
    Stop,
    Task,
    evaluate_task,
    step_agent,
)
from .utils import debug, log

PREFER_CHOICES = ("left", "right", "random")
BASELINE_TURNS = ("left", "random")


class AgentConfig(object):
    FIELDS = ("prefer", "baseline_turn")

    def __init__(self, prefer="left", baseline_turn="left"):
        self.prefer = prefer
        self.baseline_turn = baseline_turn

    def problems(self):
        ret = []
        if self.prefer not in PREFER_CHOICES:
            ret.append(("prefer", "must be one of {}".format("|".join(PREFER_CHOICES))))
        if self.baseline_turn not in BASELINE_TURNS:
            ret.append(("baseline_turn", "must be one of {}".format("|".join(BASELINE_TURNS))))
        return ret

    def to_dict(self):
        return {k: getattr(self, k) for k in self.FIELDS}


class AgentPool:
    def __init__(self):
        self.pool = {}

    def register(self, cls):
        name = cls.kind
        assert name not in self.pool, "agent `{}` registered twice".format(name)
        self.pool[name] = cls
        return cls

    def names(self):
        return sorted(self.pool.keys())

    def build(self, kind, *args, **kwargs):
        if kind not in self.pool:
            raise KeyError("unknown agent `{}`, expected one of {}".format(kind, self.names()))
        return self.pool[kind](*args, **kwargs)


global_agents = AgentPool()


def get_agent(kind, *args, **kwargs):
    return global_agents.build(kind, *args, **kwargs)


class Agent:
    """
    Owns the running task (and plan, for planning agents). `act` consumes one scan and
    returns the command for this control step; events produced along the way are queued
    for the runner to drain.
    """

    kind = None

    def __init__(self, safety, sim_cfg, agent_cfg, rng=None):
        self.safety = safety
        self.sim = sim_cfg
        self.agent_cfg = agent_cfg
        self.rng = rng
        self.task = Task(T0)
        self.plan = None
        self.stopped = None
        self.executed = [T0]
        self.events = []
        self.step = 0
        self.t = 0.0

    def act(self, cloud, step=0, t=0.0):
        raise NotImplementedError("")

    def drain_events(self):
        ret = self.events
        self.events = []
        return ret

    def emit(self, record):
        record.update({"step": self.step, "t": self.t})
        self.events.append(record)

    def switch(self, task):
        self.emit(
            {
                "type": "task",
                "from": self.task.kind,
                "to": task.kind,
                "trigger": None if task.trigger is None else task.trigger.to_record(),
            }
        )
        debug("step {}: {} -> {}".format(self.step, self.task.kind, task.kind))
        self.task = task
        self.executed.append(task.kind)

    def halt(self, reason):
        self.stopped = reason
        self.emit({"type": "stop", "reason": reason, "intrusion": reason == "intrusion"})
        log("stop at step {} (t={:.1f}s): {}".format(self.step, self.t, reason))
        return Command.halt()

    def drive(self):
        if self.task.is_rotation:
            return self.rotation_command()
        return Command.straight(self.safety.v)

    def rotation_command(self):
        """
        Rotate at omega, but never command more than a quarter turn plus `rotation_margin`
        before the task has seen its success; past that cap keep rotating at omega.
        """
        dt = self.safety.dt
        per_step = self.sim.omega * dt
        cap = QUARTER_TURN + self.sim.rotation_margin
        done = abs(self.task.commanded)
        angle = min(per_step, cap - done) if cap - done > 1e-9 else per_step
        angle *= self.task.direction
        self.task.note_rotation(angle)
        return Command.rotate(angle / dt)


@global_agents.register
class MCAgent(Agent):
    """Plans with the model checker on every T0 failure and executes the plan task by task."""

    kind = "mc"

    def __init__(self, safety, sim_cfg, agent_cfg, rng=None, dump=False):
        super(MCAgent, self).__init__(safety, sim_cfg, agent_cfg, rng)
        self.planner = Planner(safety, agent_cfg.prefer, rng)
        self.dump = dump
        self.results = []

    def replan(self, request):
        d_plus = request.d_plus
        result = self.planner(PlanRequest(request.cloud, d_plus, self.safety), dump=self.dump)
        self.results.append(result)
        record = {"type": "plan"}
        record.update(result.to_record())
        if self.dump:
            record["product"] = self.planner.last_dump
        self.emit(record)
        log(
            "replan at step {}: stage {} plan {} ({:.2f} ms)".format(
                self.step, result.stage, "none" if result.plan is None else result.plan, result.latency
            )
        )

        self.plan = result.plan
        in_shield = d_plus.x <= self.safety.shield_upper
        if self.plan is None:
            if in_shield:
                return Stop("no plan")
            # drive on until the shield fires, then stop
            return Task(TS, d_plus)
        if in_shield:
            return Task(self.plan.advance(), d_plus)
        return Task(TS)

    def act(self, cloud, step=0, t=0.0):
        self.step, self.t = step, t
        for _ in range(4):
            outcome = evaluate_task(self.task, cloud, self.safety, self.sim.track_window, self.sim.beam_spacing)
            decision = step_agent(AgentState(self.task, self.plan), outcome, cloud)
            if isinstance(decision, ReplanRequest):
                decision = self.replan(decision)
                if isinstance(decision, Stop):
                    return self.halt(decision.reason)
                self.switch(decision)
                break
            if isinstance(decision, Stop):
                return self.halt(decision.reason)
            if decision is None:
                break
            self.switch(decision)
            if self.plan is not None and self.plan.exhausted:
                self.plan = None
            if decision.is_rotation:
                break
        return self.drive()


@global_agents.register
class BaselineAgent(Agent):
    """
    Reflex controller: drive straight, and when something reaches the shield spawn a single
    avoid rotation, then drive straight again. Never plans.
    """

    kind = "baseline"

    def __init__(self, safety, sim_cfg, agent_cfg, rng=None, dump=False):
        super(BaselineAgent, self).__init__(safety, sim_cfg, agent_cfg, rng)
        self.probe = Task(TS)

    def pick_turn(self):
        if self.agent_cfg.baseline_turn == "random" and self.rng is not None:
            return TL if self.rng.random() < 0.5 else TR
        return TL

    def act(self, cloud, step=0, t=0.0):
        self.step, self.t = step, t
        if self.task.is_rotation:
            outcome = evaluate_task(self.task, cloud, self.safety, self.sim.track_window, self.sim.beam_spacing)
            if outcome.status == FAILURE:
                return self.drive()
            self.switch(Task(T0))

        outcome = evaluate_task(self.probe, cloud, self.safety, self.sim.track_window, self.sim.beam_spacing)
        if outcome.intrusion:
            return self.halt("intrusion")
        if outcome.status == FAILURE:
            self.switch(Task(self.pick_turn(), outcome.trigger))
        return self.drive()


__all__ = [
    "AgentConfig",
    "AgentPool",
    "global_agents",
    "get_agent",
    "MCAgent",
    "BaselineAgent",
]
