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

import time
from collections import namedtuple

from .abstraction import (
    boxed_in,
    construct_lateral,
    construct_longitudinal,
    front_offset,
    lateral_offsets,
    shift_longitudinal,
)
from .model import Nfa, build_dts, dump_product, extract_plan, product_search, state_name, valuate
from .sensing import FRONT, Disturbance

PlanRequest = namedtuple("PlanRequest", ["cloud", "d_plus", "cfg"])

_NFA = Nfa()


class PlanResult(object):
    """
    Outcome of one planning cycle. `plan` is None when no accepting path exists (the robot stops).
    `stage` is the number of steps of the sequence length that was tried last: 2, 3 or 4.
    """

    def __init__(self, plan, terminals, latency, stage, partitions, **kwargs):
        self.plan = plan
        self.terminals = frozenset(terminals)
        self.latency = latency
        self.stage = stage
        self.partitions = partitions
        self.delta_plus = kwargs.get("delta_plus", 0.0)
        self.d_plus = kwargs.get("d_plus", None)
        self.path = kwargs.get("path", None)
        self.valuation = kwargs.get("valuation", None)
        self.expanded = kwargs.get("expanded", 0)

    @property
    def found(self):
        return self.plan is not None

    def to_record(self):
        return {
            "plan": None if self.plan is None else list(self.plan.tasks),
            "plan_len": None if self.plan is None else len(self.plan),
            "stage": self.stage,
            "terminals": sorted(state_name(s) for s in self.terminals),
            "path": None if self.path is None else [state_name(s) for s in self.path.states],
            "latency_ms": self.latency,
            "delta_plus": self.delta_plus,
            "d_plus": None if self.d_plus is None else self.d_plus.to_record(),
            "expanded": self.expanded,
            "labels": None if self.valuation is None else self.valuation.to_record(),
            "partitions": {k: (None if v is None else v.to_record()) for k, v in self.partitions.items()},
        }

    def __repr__(self):
        return "PlanResult(plan={}, stage={}, latency={:.3f}ms)".format(self.plan, self.stage, self.latency)


class Planner(object):
    """
    Holds the pieces that never change between planning cycles (the DTS and the automaton)
    and runs the search in order of increasing sequence length.
    """

    def __init__(self, cfg, prefer="left", rng=None):
        self.cfg = cfg
        self.prefer = prefer
        self.rng = rng
        self.dts = build_dts(cfg)
        self.nfa = _NFA
        self.last_dump = None

    def __call__(self, req, dump=False):
        start = time.perf_counter()
        cfg = self.cfg if req.cfg is None else req.cfg
        dts = self.dts if req.cfg is None or req.cfg is self.cfg else build_dts(cfg)

        d_plus = req.d_plus
        if d_plus is not None and not isinstance(d_plus, Disturbance):
            d_plus = Disturbance(float(d_plus[0]), float(d_plus[1]), FRONT)
        delta_plus = front_offset(d_plus, cfg.d_safe)
        points = shift_longitudinal(req.cloud, delta_plus)

        pl = construct_lateral(points, cfg.d_safe, cfg.d_max, left=True)
        pr = construct_lateral(points, cfg.d_safe, cfg.d_max, left=False)
        partitions = {"left": pl, "right": pr}
        longs = {}
        boxed = None
        deltas = (None, None)

        terminals = set()
        if pl.empty:
            terminals.add(3)
        if pr.empty:
            terminals.add(4)
        stage = 2

        if not terminals:
            stage = 3
            boxed = boxed_in(pl, pr, cfg.d_min)
            partitions["boxed"] = boxed
            if boxed:
                terminals.add(14)

        if not terminals:
            stage = 4
            deltas = lateral_offsets(pl, pr, cfg)
            for sid, delta, positive, side in (
                (7, deltas[0], True, "left"),
                (11, deltas[0], False, "left"),
                (8, deltas[1], True, "right"),
                (12, deltas[1], False, "right"),
            ):
                part = construct_longitudinal(points, delta, cfg.d_safe, cfg.width, positive, cfg.beta, side)
                longs[sid] = part
                partitions[part.name] = part
                if part.empty:
                    terminals.add(sid)

        val = valuate(dts, pl, pr, boxed, longs, cfg, deltas)
        path = product_search(dts, val, self.nfa, terminals, self.prefer, self.rng)
        plan = None if path is None else extract_plan(path)
        if dump:
            self.last_dump = dump_product(dts, val, self.nfa, terminals)
        latency = (time.perf_counter() - start) * 1000.0

        return PlanResult(
            plan,
            terminals,
            latency,
            stage,
            partitions,
            delta_plus=delta_plus,
            d_plus=d_plus,
            path=path,
            valuation=val,
            expanded=0 if path is None else path.expanded,
        )


def plan_generate(req, prefer="left", rng=None):
    return Planner(req.cfg, prefer, rng)(req)
