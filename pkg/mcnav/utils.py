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

import logging
import math
import os

# errors


class ConfigError(RuntimeError):
    """Malformed configuration or scenario file. The CLI maps it to exit code 2."""


class PropertyViolation(RuntimeError):
    """A property suite found a counterexample. The CLI maps it to exit code 1."""


# logs

_logger = logging.getLogger("mcnav")
if not _logger.handlers:
    _handler = logging.StreamHandler()
    _handler.setFormatter(logging.Formatter("[mcnav] %(message)s"))
    _logger.addHandler(_handler)
    _logger.setLevel(logging.INFO)
    _logger.propagate = False


def set_verbosity(verbose=False, quiet=False):
    if verbose:
        _logger.setLevel(logging.DEBUG)
    elif quiet:
        _logger.setLevel(logging.WARNING)
    else:
        _logger.setLevel(logging.INFO)


def log(*args):
    _logger.info(" ".join(str(a) for a in args))


def debug(*args):
    _logger.debug(" ".join(str(a) for a in args))


def warn(*args):
    _logger.warning(" ".join(str(a) for a in args))


def log_file(out_dir, filename, info, mode="w"):
    os.makedirs(out_dir, exist_ok=True)
    filepath = os.path.join(out_dir, filename)
    try:
        with open(filepath, mode) as f:
            f.write(info)
    except OSError as e:
        raise OSError("cannot write {}: {}".format(filepath, e.strerror or e)) from e
    return filepath


def print_options(title, options):
    log(title)
    lines = ["{"]
    for key in options.keys():
        lines.append("  {}: `{}`".format(key, options[key]))
    lines.append("}")
    debug("\n".join(lines))


# angles


def wrap_angle(a):
    """
    Wrap an angle to (-pi, pi].
    """
    w = math.remainder(a, 2.0 * math.pi)
    if w <= -math.pi:
        w += 2.0 * math.pi
    return w


def angle_diff(a, b):
    return wrap_angle(a - b)
