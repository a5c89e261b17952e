# Copyright 2026 The Zigzag Authors
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

"""Zig-zag guidance core: spinor algebra, scenario runs and verify suites."""

import json

from ._zigzag import (
    ZigzagError,
    bohm_velocity,
    chiral_decompose,
    config_hash,
    coupling_F,
    default_bins,
    jump_rates,
    suite_names,
    velocity_field,
)
from . import _zigzag


def run_scenario(config):
    """Run a scenario given as a dict or JSON text; returns directory, artifacts and report."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_zigzag.run_scenario_json(text))


def verify(suite, workers=1):
    """Run a verify suite ("all" for every suite) and return the decoded JSON report."""
    return json.loads(_zigzag.verify_json(suite, workers))


__all__ = [
    "ZigzagError",
    "bohm_velocity",
    "chiral_decompose",
    "config_hash",
    "coupling_F",
    "default_bins",
    "jump_rates",
    "run_scenario",
    "suite_names",
    "velocity_field",
    "verify",
]
