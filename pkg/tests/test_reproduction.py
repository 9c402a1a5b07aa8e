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
Reference values for the three built-in problems.

Nodal solutions are compared to the precision they are printed with, MAE with a relative
tolerance and convergence orders with an absolute one.
"""
from decimal import Decimal

import pytest

from fide_schemes import bound_study, convergence_study, get_problem, solve

LADDER = (5, 10, 20, 40, 80)

# problem -> n -> scheme -> values at x = 0, 0.2, ..., 1; None marks a misprinted cell
SOLUTIONS = {
    "ex5.1": {
        5: {
            "s1": [0.0, -0.146642, -0.217607, -0.209663, -0.120963, 0.0505046],
            "s3": [0.0, -0.146642, None, -0.230553, -0.150925, 0.0104518],
        },
        10: {
            "s1": [0.0, None, -0.231231, -0.228457, -0.145454, 0.0184683],
            "s2": [0.0, -0.157177, -0.238252, -0.238611, -0.158719, 0.00132716],
            "s3": [0.0, -0.157166, -0.238209, -0.23849, None, 0.00190422],
        },
    },
    "ex5.2": {
        5: {
            "s1": [0.0, 0.180928, 0.297013, 0.298545, 0.130392, -0.273753],
            "s2": [0.0, 0.180928, 0.314326, 0.351121, 0.241245, -0.0670569],
            "s3": [0.0, 0.180928, 0.314249, 0.350619, 0.239352, -0.0726013],
        },
        10: {
            "s1": [0.0, 0.187244, 0.318846, 0.346531, 0.219913, -0.115363],
            "s2": [0.0, 0.189354, 0.330992, 0.376553, 0.277566, -0.0147491],
            "s3": [0.0, 0.189353, 0.330968, 0.376414, 0.277066, -0.0161695],
        },
    },
    "ex5.3": {
        5: {
            "s1": [0.0, 0.099203, 0.263841, 0.476607, 0.72966, 1.01967],
            "s2": [0.0, 0.099203, 0.257785, 0.467637, 0.718179, 1.00327],
            "s3": [0.0, 0.099203, 0.257849, 0.467942, 0.719065, 1.00547],
        },
        10: {
            "s1": [0.0, 0.093188, 0.256826, 0.46881, 0.72024, 1.00634],
            "s2": [0.0, 0.091088, 0.253615, 0.465257, 0.716039, 1.00061],
            "s3": [0.0, 0.09109, 0.253637, 0.465341, 0.716264, 1.00115],
        },
    },
}

# problem -> scheme -> (MAE over LADDER, CO over LADDER[1:])
CONVERGENCE = {
    "ex5.1": {
        "s1": (
            [5.05046e-2, 1.84683e-2, 6.70253e-3, 2.41481e-3, 8.65157e-4],
            [1.45136, 1.46227, 1.4728, 1.48087],
        ),
        "s2": (
            [1.32804e-2, 3.32983e-3, 8.33153e-4, 2.08325e-4, 5.20829e-5],
            [1.9958, 1.9988, 1.9998, 1.9995],
        ),
        "s3": (
            [1.3358e-2, 3.33388e-3, 8.33345e-4, 2.08334e-4, 5.20833e-5],
            [2.00243, 2.00022, 2.00002, 2.00001],
        ),
    },
    "ex5.2": {
        "s1": (
            [2.73753e-1, 1.15363e-1, 5.05187e-2, 2.24081e-2, 9.97983e-3],
            [1.24669, 1.19129, 1.1728, 1.16693],
        ),
        "s2": (
            [6.70569e-2, 1.47491e-2, 3.28518e-3, 7.33189e-4, 1.63575e-4],
            [2.18476, 2.16658, 2.16373, 2.16423],
        ),
        "s3": (
            [7.26013e-2, 1.61695e-2, 3.65192e-3, 8.26938e-4, 1.87313e-4],
            [2.16672, 2.14655, 2.1428, 2.14233],
        ),
    },
    "ex5.3": {
        "s1": (
            [1.96715e-2, 6.34357e-3, 2.05203e-3, 6.61465e-4, 2.12232e-4],
            [1.63274, 1.62824, 1.63332, 1.64002],
        ),
        "s2": (
            [9.76046e-3, 3.44045e-3, 1.21603e-3, 4.29918e-4, 1.51999e-4],
            [1.50435, 1.50042, 1.50005, 1.5],
        ),
        "s3": (
            [9.76046e-3, 3.44045e-3, 1.21603e-3, 4.29918e-4, 1.51999e-4],
            [1.50435, 1.50042, 1.50005, 1.5],
        ),
    },
}

# printed column of the quadratic scheme on the first problem at n = 5; its x = 0.2 entry
# differs from the other schemes although all three share the first step
S2_FIRST_PROBLEM_COARSE = [0.0, -0.146720, -0.228706, -0.231148, -0.152223, 0.0078693]

MAE_RTOL = {"ex5.1": 5e-3, "ex5.2": 1e-2, "ex5.3": 5e-3}
CO_ATOL = {"ex5.1": 1e-2, "ex5.2": 2e-2, "ex5.3": 5e-3}

# the n = 10 column of the quadratic scheme on the first problem deviates in the fourth digit
CELL_ATOL = {("ex5.1", "s2"): 2e-4}
MAE_RTOL_OVERRIDE = {("ex5.1", "s2"): 1e-2}

CELLS = [
    (name, n, scheme)
    for name, by_n in SOLUTIONS.items()
    for n, by_scheme in by_n.items()
    for scheme in by_scheme
]
STUDIES = [(name, scheme) for name, by_scheme in CONVERGENCE.items() for scheme in by_scheme]


def printed_atol(value, atol=2e-6):
    """Half a unit in the last printed decimal of ``value``, but at least ``atol``."""
    if value == 0.0:
        return atol
    decimals = -Decimal(repr(value)).as_tuple().exponent
    return max(atol, 0.5 * 10.0**-decimals)


class TestPrintedAtol:
    """Tests for the rounding tolerance of printed values."""

    @pytest.mark.parametrize(
        "value,expected",
        [(1.00547, 5e-6), (0.72966, 5e-6), (0.0505046, 2e-6), (-0.0147491, 2e-6), (0.0, 2e-6)],
    )
    def test_values(self, value, expected):
        """Five printed decimals allow 5e-6, finer values keep the floor."""
        assert printed_atol(value) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("name,n,scheme", CELLS)
def test_nodal_solutions(name, n, scheme):
    """Numerical solutions at x = 0, 0.2, ..., 1 for n = 5 and n = 10."""
    result = solve(get_problem(name), scheme, n)
    step = n // 5
    floor = CELL_ATOL.get((name, scheme), 2e-6)
    for i, expected in enumerate(SOLUTIONS[name][n][scheme]):
        if expected is None:
            continue
        atol = printed_atol(expected, floor)
        assert result.values[i * step] == pytest.approx(expected, abs=atol), f"x = {i / 5}"


def test_quadratic_first_step_on_first_problem():
    """All schemes share the first step, so the quadratic scheme starts at the S1/S3 value."""
    problem = get_problem("ex5.1")
    first = [solve(problem, scheme, 5).values[1] for scheme in ("s1", "s2", "s3")]
    assert first[1] == pytest.approx(first[0], rel=1e-12)
    assert first[1] == pytest.approx(first[2], rel=1e-12)
    assert first[1] == pytest.approx(-0.146642, abs=2e-6)


@pytest.mark.xfail(strict=True, reason="printed column starts from a different first step")
def test_quadratic_printed_column_on_first_problem():
    """The printed n = 5 column of the quadratic scheme on the first problem."""
    result = solve(get_problem("ex5.1"), "s2", 5)
    assert list(result.values) == pytest.approx(S2_FIRST_PROBLEM_COARSE, abs=2e-6)


@pytest.mark.parametrize("name,scheme", STUDIES)
def test_short_ladder(name, scheme):
    """MAE and convergence order on the three coarsest meshes."""
    report = convergence_study(get_problem(name), scheme, LADDER[:3])
    maes, orders = CONVERGENCE[name][scheme]
    rtol = MAE_RTOL_OVERRIDE.get((name, scheme), MAE_RTOL[name])
    assert report.mae == pytest.approx(maes[:3], rel=rtol)
    assert report.co[1:] == pytest.approx(orders[:2], abs=CO_ATOL[name])


@pytest.mark.slow
@pytest.mark.parametrize("name,scheme", STUDIES)
def test_full_ladder(name, scheme):
    """MAE and convergence order on the full ladder up to n = 80."""
    report = convergence_study(get_problem(name), scheme, LADDER, max_workers=4)
    maes, orders = CONVERGENCE[name][scheme]
    rtol = MAE_RTOL_OVERRIDE.get((name, scheme), MAE_RTOL[name])
    assert report.mae == pytest.approx(maes, rel=rtol)
    assert report.co[1:] == pytest.approx(orders, abs=CO_ATOL[name])


def test_quadratic_schemes_agree_on_singular_problem():
    """The first node dominates the error of both quadratic schemes on the third problem."""
    s2 = convergence_study(get_problem("ex5.3"), "s2", (5, 10))
    s3 = convergence_study(get_problem("ex5.3"), "s3", (5, 10))
    assert s2.mae == pytest.approx(s3.mae, rel=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("scheme", ["s1", "s3"])
@pytest.mark.parametrize("name", ["ex5.1", "ex5.2"])
def test_bounds_dominate_full_ladder(name, scheme):
    """The error bound at x = 1 dominates the measured MAE on every mesh."""
    for row in bound_study(get_problem(name), scheme, LADDER):
        assert row.ratio <= 1.0, f"n = {row.n}"


def test_quadratic_bound_small_meshes():
    """The quadratic bound dominates on the second problem for n = 5 and n = 10."""
    for row in bound_study(get_problem("ex5.2"), "s2", (5, 10)):
        assert row.ratio <= 1.0


@pytest.mark.slow
@pytest.mark.parametrize("n", [40, 80])
@pytest.mark.xfail(strict=True, reason="the measured error outgrows the quadratic bound")
def test_quadratic_bound_fine_meshes(n):
    """The quadratic bound on the second problem is exceeded on fine meshes."""
    (row,) = bound_study(get_problem("ex5.2"), "s2", (n,))
    assert row.ratio <= 1.0


@pytest.mark.xfail(strict=True, reason="the first-step error exceeds the quadratic bound")
def test_quadratic_bound_first_problem():
    """The quadratic bound on the first problem is exceeded."""
    for row in bound_study(get_problem("ex5.1"), "s2", LADDER):
        assert row.ratio <= 1.0
