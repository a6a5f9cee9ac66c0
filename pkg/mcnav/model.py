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

"""
The disturbance-focused transition system, its runtime valuation, the automaton for the
negated plan property and the forward depth-first search over their product.

    s0 -TL-> s1 -straight-> s3 -TR-> s5 -T0-> s7
                               -TL-> s9 -T0-> s11
             s1 -TL-> s13 -T0-> s14
    s0 -TR-> s2 -straight-> s4 -TL-> s6 -T0-> s8
                               -TR-> s10 -T0-> s12
             s2 -TR-> s13

The straight edges into s3/s4 read T0 when the target is a horizon state and TS otherwise.
"""

import math
from collections import namedtuple

from .tasks import T0, TL, TR, TS, Plan

SAFE = "safe"
HORIZON = "horizon"

EMPTY = frozenset()
SAFE_ONLY = frozenset([SAFE])
SAFE_HORIZON = frozenset([SAFE, HORIZON])

LATERAL_STATES = (3, 4)
TERMINAL_CANDIDATES = (3, 4, 7, 8, 11, 12, 14)

# (source, task, target), in search order below the root.
# s5 is tried before s9 so the first accepting path matches the worked left-turn example.
EDGES = (
    (0, TL, 1),
    (0, TR, 2),
    (1, TS, 3),
    (1, TL, 13),
    (2, TS, 4),
    (2, TR, 13),
    (13, T0, 14),
    (3, TR, 5),
    (3, TL, 9),
    (4, TL, 6),
    (4, TR, 10),
    (5, T0, 7),
    (9, T0, 11),
    (6, T0, 8),
    (10, T0, 12),
)
STRAIGHT_EDGES = frozenset([(1, 3), (2, 4)])

# structurally fixed dimension of each state, if any
FIXED_X = frozenset([0, 5, 6, 9, 10, 13])
FIXED_Y = frozenset([1, 2])


def state_name(sid):
    return "s{}".format(sid)


class DtsState(namedtuple("DtsState", ["id", "x", "y", "heading"])):
    __slots__ = ()

    @property
    def fixed_dim(self):
        if self.id in FIXED_X:
            return "x"
        if self.id in FIXED_Y:
            return "y"
        return None

    def __str__(self):
        return state_name(self.id)


class Dts(object):
    """
    The fixed 15-state structure. Coordinates of variable states are left as None here;
    a Valuation fills them per planning cycle.
    """

    def __init__(self, states, edges):
        self.states = {s.id: s for s in states}
        self.edges = tuple(edges)
        self.initial = 0
        self._children = {}
        for src, task, dst in self.edges:
            self._children.setdefault(src, []).append((task, dst))

    def children(self, sid):
        return list(self._children.get(sid, []))

    def is_leaf(self, sid):
        return sid not in self._children

    def task(self, src, dst, val):
        for t, d in self._children.get(src, []):
            if d == dst:
                if (src, dst) in STRAIGHT_EDGES and HORIZON in val.label(dst):
                    return T0
                return t
        raise KeyError("no edge {} -> {}".format(state_name(src), state_name(dst)))

    def paths(self):
        """Every path from s0 to a leaf, in search order."""
        ret = []

        def walk(sid, prefix):
            prefix = prefix + [sid]
            if self.is_leaf(sid):
                ret.append(prefix)
                return
            for _, dst in self.children(sid):
                walk(dst, prefix)

        walk(self.initial, [])
        return ret

    def __len__(self):
        return len(self.states)


def build_dts(cfg):
    d = cfg.d_safe
    reach = cfg.long_reach
    half = 0.5 * math.pi
    states = [
        DtsState(0, d, 0.0, 0.0),
        DtsState(1, 0.0, d, half),
        DtsState(2, 0.0, -d, -half),
        DtsState(3, None, None, half),
        DtsState(4, None, None, -half),
        DtsState(5, d, None, 0.0),
        DtsState(6, d, None, 0.0),
        DtsState(7, None, None, 0.0),
        DtsState(8, None, None, 0.0),
        DtsState(9, -d, None, math.pi),
        DtsState(10, -d, None, math.pi),
        DtsState(11, None, None, math.pi),
        DtsState(12, None, None, math.pi),
        DtsState(13, -d, 0.0, math.pi),
        DtsState(14, -reach, 0.0, math.pi),
    ]
    return Dts(states, EDGES)


class Valuation(object):
    def __init__(self, labels=None, coordinates=None):
        self.labels = dict(labels or {})
        self.coordinates = dict(coordinates or {})

    def label(self, sid):
        return self.labels.get(sid, EMPTY)

    def to_record(self):
        return {state_name(k): sorted(v) for k, v in sorted(self.labels.items()) if v}

    def __repr__(self):
        return "Valuation({})".format(self.to_record())


def safe_by_dimensions(state_id, x, y, cfg):
    """
    Conditions (i) and (ii): a structurally fixed dimension at +-d_safe, or a purely lateral
    state whose lateral distance exceeds d_min.
    """
    if state_id in FIXED_X or state_id in FIXED_Y:
        return True
    if state_id in LATERAL_STATES and y is not None and math.isfinite(y):
        return abs(y) > cfg.d_min
    return False


def labels_for(state_id, x, y, cfg):
    coords = [c for c in (x, y) if c is not None]
    if any(math.isinf(c) for c in coords):
        return SAFE_HORIZON
    if safe_by_dimensions(state_id, x, y, cfg):
        return SAFE_ONLY
    return EMPTY


def valuate(dts, pl, pr, boxed, longs, cfg, deltas=(None, None)):
    """
    Assign {safe, horizon} and runtime coordinates for one planning cycle.

    `longs` maps 7/11/8/12 to their longitudinal partitions; states whose partition was not
    computed (None, or missing) keep the empty label. `boxed` may be None when not evaluated.
    """
    labels = {}
    coords = {}
    for sid, state in dts.states.items():
        if state.x is not None and state.y is not None:
            coords[sid] = (state.x, state.y)
            labels[sid] = labels_for(sid, state.x, state.y, cfg)

    delta_left, delta_right = deltas
    for sid, part, sign in ((3, pl, 1.0), (4, pr, -1.0)):
        if part is None:
            labels[sid] = EMPTY
            continue
        if part.empty:
            coords[sid] = (0.0, sign * math.inf)
        else:
            coords[sid] = (0.0, float(part.members[0][1]))
        labels[sid] = labels_for(sid, *coords[sid], cfg)

    # s5, s6, s9, s10 sit at +-d_safe along x whatever their lateral offset
    for sid, delta in ((5, delta_left), (9, delta_left), (6, delta_right), (10, delta_right)):
        coords[sid] = (dts.states[sid].x, delta)
        labels[sid] = SAFE_ONLY

    longs = longs or {}
    sides = ((7, 1.0, delta_left), (11, -1.0, delta_left), (8, 1.0, delta_right), (12, -1.0, delta_right))
    for sid, sign, delta in sides:
        part = longs.get(sid)
        if part is None:
            labels[sid] = EMPTY
            continue
        x = sign * math.inf if part.empty else sign * cfg.long_reach
        coords[sid] = (x, delta)
        labels[sid] = labels_for(sid, x, delta, cfg)

    # s14 is fixed and finite, so only the boxed-in verdict can make it a horizon state
    labels[14] = SAFE_HORIZON if boxed else EMPTY
    return Valuation(labels, coords)


class Nfa(object):
    """
    Automaton for the negated property: stay in q0 while reading {safe}, move to the accepting q1
    on {safe, horizon}. Symbols are matched exactly, anything else has no successor.
    """

    def __init__(self):
        self.states = ("q0", "q1")
        self.initial = "q0"
        self.accepting = frozenset(["q1"])
        self.transitions = {
            ("q0", SAFE_ONLY): ("q0",),
            ("q0", SAFE_HORIZON): ("q1",),
        }

    def step(self, q, symbol):
        return self.transitions.get((q, frozenset(symbol)), ())

    def accepts(self, word):
        current = {self.initial}
        for symbol in word:
            current = {n for q in current for n in self.step(q, symbol)}
            if not current:
                return False
        return bool(current & self.accepting)


class ProductPath(object):
    def __init__(self, nodes, tasks, expanded=0):
        self.nodes = list(nodes)
        self.tasks = list(tasks)
        self.expanded = expanded

    @property
    def states(self):
        return [sid for sid, _ in self.nodes]

    def __eq__(self, other):
        if isinstance(other, ProductPath):
            return self.nodes == other.nodes and self.tasks == other.tasks
        return NotImplemented

    def __str__(self):
        return " ".join(state_name(s) for s in self.states)

    def __repr__(self):
        return "ProductPath({})".format(self)


def ordered_children(dts, sid, prefer="left", rng=None):
    children = dts.children(sid)
    if prefer == "random" and rng is not None and len(children) > 1:
        order = rng.permutation(len(children))
        return [children[i] for i in order]
    if prefer == "right" and sid == dts.initial:
        return list(reversed(children))
    return children


def _product_dfs(dts, val, nfa, terminals, prefer, rng, first_only):
    found = []
    expanded = [0]

    def visit(sid, q, nodes, tasks):
        expanded[0] += 1
        if q in nfa.accepting:
            if sid in terminals:
                found.append(ProductPath(nodes, tasks, expanded[0]))
            return first_only and bool(found)
        for _, dst in ordered_children(dts, sid, prefer, rng):
            for q_next in nfa.step(q, val.label(dst)):
                task = dts.task(sid, dst, val)
                if visit(dst, q_next, nodes + [(dst, q_next)], tasks + [task]):
                    return True
        return False

    for q0 in nfa.step(nfa.initial, val.label(dts.initial)):
        if visit(dts.initial, q0, [(dts.initial, q0)], []):
            break
    if found:
        found[-1].expanded = expanded[0]
    return found


def product_search(dts, val, nfa, terminals, prefer="left", rng=None):
    """
    Forward depth-first search of the product from (s0, q0). Returns the first path reaching
    q1 on a terminal state, or None when no such path exists.
    """
    terminals = frozenset(terminals)
    if not terminals:
        return None
    found = _product_dfs(dts, val, nfa, terminals, prefer, rng, first_only=True)
    return found[0] if found else None


def accepting_paths(dts, val, nfa, terminals):
    return _product_dfs(dts, val, nfa, frozenset(terminals), "left", None, first_only=False)


def extract_plan(path):
    tasks = list(path.tasks)
    if not tasks or tasks[-1] != T0:
        tasks.append(T0)
    return Plan(tasks)


def dump_product(dts, val, nfa, terminals):
    """
    Text graph of the reachable product, one edge per line:
    `src,q -task-> dst,q'` with ` [accepting]` on edges entering (terminal, q1).
    """
    terminals = frozenset(terminals)
    lines = []
    seen = set()

    def visit(sid, q):
        if (sid, q) in seen or q in nfa.accepting:
            return
        seen.add((sid, q))
        for _, dst in dts.children(sid):
            for q_next in nfa.step(q, val.label(dst)):
                line = "{},{} -{}-> {},{}".format(state_name(sid), q, dts.task(sid, dst, val), state_name(dst), q_next)
                if q_next in nfa.accepting and dst in terminals:
                    line += " [accepting]"
                lines.append(line)
                visit(dst, q_next)

    for q0 in nfa.step(nfa.initial, val.label(dts.initial)):
        visit(dts.initial, q0)
    return "\n".join(lines)
