# Copyright 2024 The FIDE-Schemes Authors.

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""
Pytest configuration file for the FIDE-Schemes test suite.
"""
import math
import os
from pathlib import Path

import pytest

from fide_schemes import ProblemSpec, example_5_1, example_5_2, example_5_3, gauss_legendre

# defaults
TOL = 1e-12

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def tol():
    """Numerical tolerance for equality tests."""
    return float(os.environ.get("TOL", TOL))


@pytest.fixture(scope="session")
def rule():
    """Default order-10 Gauss-Legendre rule."""
    return gauss_legendre(10)


@pytest.fixture(scope="session", params=["ex5.1", "ex5.2", "ex5.3"])
def builtin(request):
    """Each built-in problem."""
    return {"ex5.1": example_5_1, "ex5.2": example_5_2, "ex5.3": example_5_3}[request.param]()


@pytest.fixture(scope="session")
def zero_problem():
    """f = 0, K = 0, delta = 0 with exact solution 0."""
    return ProblemSpec(
        alpha=0.5,
        delta=0.0,
        f=lambda x: 0.0,
        kernel=lambda x, t: 0.0,
        exact=lambda x: 0.0,
        name="zero",
    )


@pytest.fixture(scope="session")
def linear_problem():
    """Manufactured problem with exact solution x, kernel x t and alpha = 1/2."""
    alpha = 0.5
    return ProblemSpec(
        alpha=alpha,
        delta=0.0,
        f=lambda x: x ** (1 - alpha) / math.gamma(2 - alpha) - x**4 / 3.0,
        kernel=lambda x, t: x * t,
        exact=lambda x: x,
        name="linear",
    )


@pytest.fixture
def fixture_text():
    """Read a problem file from ``tests/fixtures``."""

    def read(name):
        return (FIXTURES / name).read_text(encoding="utf-8")

    return read

