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

__version__ = "0.1.0"

from .sensing import PointCloud, SafetyConfig
from .planner import Planner, PlanRequest, PlanResult, plan_generate
from .runner import Runner, run_batch, run_scenario
from .report import RunTrace, Metrics, compute_metrics, export, replay
from .utils import ConfigError, PropertyViolation

__all__ = [
    "PointCloud",
    "SafetyConfig",
    "Planner",
    "PlanRequest",
    "PlanResult",
    "plan_generate",
    "Runner",
    "run_batch",
    "run_scenario",
    "RunTrace",
    "Metrics",
    "compute_metrics",
    "export",
    "replay",
    "ConfigError",
    "PropertyViolation",
]
