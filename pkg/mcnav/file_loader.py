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

import copy
import json
import math
import os
from collections import OrderedDict, namedtuple

import yaml

from .agents import AgentConfig
from .sensing import SafetyConfig
from .sim import NoiseModel, SimConfig, WorldModel
from .utils import ConfigError, print_options

SECTIONS = OrderedDict(
    [
        ("safety", SafetyConfig),
        ("noise", NoiseModel),
        ("sim", SimConfig),
        ("agent", AgentConfig),
    ]
)
STRING_FIELDS = {"agent": ("prefer", "baseline_turn")}
INT_FIELDS = {"sim": ("n_beams",)}

SCENARIO_KEYS = ("name", "segments", "start_poses", "config", "cutoff", "exit", "duration")


"""
    yaml_loader
"""


class yaml_loader:
    def __init__(self):
        yaml_path = os.path.join(os.path.dirname(__file__), "configs", "default.yaml")
        with open(yaml_path, "r") as yaml_file:
            self._default_yaml = yaml.safe_load(yaml_file)

    @property
    def default_yaml(self):
        return copy.deepcopy(self._default_yaml)


global_yaml_loader = yaml_loader()


def load_yaml_file(path):
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError("{}: cannot read: {}".format(path, e.strerror or e)) from e
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = "{}:{}:{}".format(path, mark.line + 1, mark.column + 1) if mark is not None else path
        raise ConfigError("{}: {}".format(where, getattr(e, "problem", None) or e)) from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("{}: top level must be a mapping".format(path))
    return data


"""
    typed configuration
"""


class Settings(namedtuple("Settings", ["safety", "noise", "sim", "agent"])):
    __slots__ = ()

    def to_dict(self):
        return OrderedDict((name, getattr(self, name).to_dict()) for name in SECTIONS)


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _check_value(section, key, value, where):
    if key in STRING_FIELDS.get(section, ()):
        if not isinstance(value, str):
            raise ConfigError("{}: expected a string, got {!r}".format(where, value))
        return value
    if not _is_number(value) or not math.isfinite(value):
        raise ConfigError("{}: expected a finite number, got {!r}".format(where, value))
    if key in INT_FIELDS.get(section, ()) and int(value) != value:
        raise ConfigError("{}: expected an integer, got {!r}".format(where, value))
    return value


def init_config(*layers, echo=True):
    """
    Merge configuration layers on top of the packaged defaults.

    Each layer is (source, mapping, prefix): `source` names the file for diagnostics and
    `prefix` the path of the mapping inside it (e.g. "config" for a scenario file).
    Later layers win. Raises ConfigError naming the file and field path.
    """
    merged = global_yaml_loader.default_yaml
    origin = {}
    for source, layer, prefix in layers:
        if not layer:
            continue
        head = "{}.".format(prefix) if prefix else ""
        if not isinstance(layer, dict):
            raise ConfigError("{}: {} must be a mapping".format(source, prefix or "config"))
        for section, values in layer.items():
            if section not in SECTIONS:
                raise ConfigError(
                    "{}: unknown section `{}{}`, expected one of {}".format(source, head, section, list(SECTIONS))
                )
            if not isinstance(values, dict):
                raise ConfigError("{}: `{}{}` must be a mapping".format(source, head, section))
            for key, value in values.items():
                where = "{}: `{}{}.{}`".format(source, head, section, key)
                if key not in SECTIONS[section].FIELDS:
                    raise ConfigError("{}: unknown field".format(where))
                merged[section][key] = _check_value(section, key, value, where)
                origin[(section, key)] = (source, head)

    built = {}
    for section, cls in SECTIONS.items():
        built[section] = cls(**merged[section])
    settings = Settings(**built)

    checks = [
        ("safety", settings.safety.problems()),
        ("noise", settings.noise.problems()),
        ("sim", settings.sim.problems(settings.safety)),
        ("agent", settings.agent.problems()),
    ]
    for section, problems in checks:
        for key, message in problems:
            source, head = origin.get((section, key), ("defaults", ""))
            raise ConfigError("{}: `{}{}.{}` {}".format(source, head, section, key, message))

    if echo:
        print_options("configuration", settings.to_dict())
    return settings


"""
    scenario files
"""


class Scenario(object):
    """
    A parsed scenario: the world, named start poses, config overrides, and optionally the
    cut-off line of a cul-de-sac (`cutoff`, pocket on the left of the directed segment).
    """

    def __init__(self, name, world, start_poses, config=None, cutoff=None, exit=False, duration=60.0, source=None):
        self.name = name
        self.world = world
        self.start_poses = OrderedDict(start_poses)
        self.config = config or {}
        self.cutoff = None if cutoff is None else tuple(float(v) for v in cutoff)
        self.exit = bool(exit)
        self.duration = float(duration)
        self.source = source or name

    def start(self, name=None):
        if name is None:
            name = next(iter(self.start_poses))
        if name not in self.start_poses:
            raise ConfigError(
                "{}: no start pose `{}`, expected one of {}".format(self.source, name, list(self.start_poses))
            )
        return tuple(self.start_poses[name])

    def to_dict(self):
        ret = OrderedDict()
        ret["name"] = self.name
        ret["segments"] = self.world.segments.tolist()
        ret["start_poses"] = OrderedDict((k, list(v)) for k, v in self.start_poses.items())
        ret["config"] = self.config
        if self.cutoff is not None:
            ret["cutoff"] = list(self.cutoff)
        ret["exit"] = self.exit
        ret["duration"] = self.duration
        return ret


def _find_line(text, key):
    if text is None:
        return None
    needle = '"{}"'.format(key)
    for lineno, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return lineno
    return None


def _where(source, text, key, field):
    line = _find_line(text, key)
    if line is None:
        return "{}: field `{}`".format(source, field)
    return "{}:{}: field `{}`".format(source, line, field)


def _numbers(value, n, where):
    if not isinstance(value, (list, tuple)) or len(value) != n:
        raise ConfigError("{}: expected a list of {} numbers, got {!r}".format(where, n, value))
    for v in value:
        if not _is_number(v) or not math.isfinite(v):
            raise ConfigError("{}: expected finite numbers, got {!r}".format(where, value))
    return [float(v) for v in value]


def parse_scenario(data, source="<scenario>", text=None):
    if not isinstance(data, dict):
        raise ConfigError("{}: top level must be an object".format(source))
    for key in data:
        if key not in SCENARIO_KEYS:
            where = _where(source, text, key, key)
            raise ConfigError("{}: unknown key, expected one of {}".format(where, SCENARIO_KEYS))

    for key in ("segments", "start_poses"):
        if key not in data:
            raise ConfigError("{}: missing required field `{}`".format(source, key))

    segments = data["segments"]
    if not isinstance(segments, list):
        raise ConfigError("{}: expected a list".format(_where(source, text, "segments", "segments")))
    parsed = []
    for i, seg in enumerate(segments):
        where = _where(source, text, "segments", "segments[{}]".format(i))
        seg = _numbers(seg, 4, where)
        if seg[0] == seg[2] and seg[1] == seg[3]:
            raise ConfigError("{}: degenerate segment {}".format(where, seg))
        parsed.append(seg)

    poses = data["start_poses"]
    if not isinstance(poses, dict) or not poses:
        raise ConfigError("{}: expected a non-empty object".format(_where(source, text, "start_poses", "start_poses")))
    start_poses = OrderedDict()
    for name, pose in poses.items():
        start_poses[name] = tuple(_numbers(pose, 3, _where(source, text, name, "start_poses.{}".format(name))))

    config = data.get("config", {})
    if not isinstance(config, dict):
        raise ConfigError("{}: expected an object".format(_where(source, text, "config", "config")))

    cutoff = data.get("cutoff")
    if cutoff is not None:
        cutoff = _numbers(cutoff, 4, _where(source, text, "cutoff", "cutoff"))

    exit = data.get("exit", False)
    if not isinstance(exit, bool):
        raise ConfigError("{}: expected true or false".format(_where(source, text, "exit", "exit")))
    if exit and cutoff is None:
        raise ConfigError("{}: `exit` needs a `cutoff` line".format(_where(source, text, "exit", "exit")))

    duration = data.get("duration", 60.0)
    if not _is_number(duration) or duration <= 0:
        raise ConfigError("{}: expected a positive number".format(_where(source, text, "duration", "duration")))

    name = data.get("name", os.path.splitext(os.path.basename(source))[0])
    if not isinstance(name, str):
        raise ConfigError("{}: expected a string".format(_where(source, text, "name", "name")))

    # config errors surface here, with their path inside the file
    init_config((source, config, "config"), echo=False)

    return Scenario(name, WorldModel.from_segments(parsed), start_poses, config, cutoff, exit, duration, source)


def load_scenario(path):
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError("{}: cannot read: {}".format(path, e.strerror or e)) from e
    try:
        data = json.loads(text, object_pairs_hook=OrderedDict)
    except json.JSONDecodeError as e:
        raise ConfigError("{}:{}:{}: {}".format(path, e.lineno, e.colno, e.msg)) from e
    return parse_scenario(data, path, text)


def scenario_dir():
    return os.path.join(os.path.dirname(__file__), "configs", "scenarios")


def resolve_scenario(name_or_path):
    """Accept a file path or the name of a packaged scenario (`culdesac`, `playground`, `empty_room`)."""
    if os.path.exists(name_or_path):
        return name_or_path
    packaged = os.path.join(scenario_dir(), name_or_path + ".json")
    if os.path.exists(packaged):
        return packaged
    raise ConfigError("{}: no such scenario file".format(name_or_path))
