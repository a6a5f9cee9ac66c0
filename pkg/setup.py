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
"""Setup for pip package."""

import re

from setuptools import find_packages, setup


def read_requirements_file(filepath):
    with open(filepath) as fin:
        requirements = fin.read()
    return requirements


def read_version(filepath):
    with open(filepath) as fin:
        return re.search(r'^__version__ = "(.*?)"', fin.read(), re.M).group(1)


REQUIRED_PACKAGES = read_requirements_file("requirements.txt")


setup(
    name="mcnav",
    version=read_version("mcnav/__init__.py"),
    description=("Real-time model-checking planner for reactive obstacle avoidance, with a 2D LiDAR simulator."),
    long_description="",
    author="mcnav Authors",
    author_email="",
    install_requires=REQUIRED_PACKAGES,
    packages=find_packages(exclude=["tests"]),
    include_package_data=True,
    package_data={
        "mcnav": ["configs/default.yaml", "configs/scenarios/*.json"],
    },
    entry_points={"console_scripts": ["mcnav = mcnav.cmd:main"]},
    python_requires=">=3.7",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
    ],
    license="Apache 2.0",
    keywords=("model checking obstacle avoidance planner lidar simulator"),
)
