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
"""Tests for row assembly and forward substitution."""
import logging
import math

import numpy as np
import pytest

from fide_schemes import (
    DomainError,
    EvalError,
    Mesh,
    MissingExactSolution,
    NearSingularPivot,
    NonFiniteValue,
    ProblemSpec,
    SchemeKind,
    SolverError,
    SolveResult,
    assemble_row,
    example_5_1,
    linear_caputo_row,
    linear_kernel_row,
    load_problem,
    residual,
    solve,
)

SCHEMES = list(SchemeKind)


class TestSolveExactCases:
    """Problems whose nodal solution is reproduced to rounding error."""

    @pytest.mark.parametrize("scheme", SCHEMES)
    @pytest.mark.parametrize("n", [5, 10, 40])
    def test_zero_problem(self, zero_problem, scheme, n):
        """f = 0, K = 0, delta = 0 gives the zero solution."""
        result = solve(zero_problem, scheme, n)
        assert np.all(result.values == 0.0)
        assert result.max_abs_error == 0.0

    @pytest.mark.parametrize("scheme", SCHEMES)
    @pytest.mark.parametrize("n", [5, 10, 20, 40])
    def test_linear_solution(self, linear_problem, scheme, n):
        """Every scheme reproduces an exact solution linear in x."""
        result = solve(linear_problem, scheme, n)
        assert result.max_abs_error <= 1e-11
        assert np.allclose(result.values, result.nodes, atol=1e-11, rtol=0)

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_initial_value(self, scheme):
        """phi_0 is delta and the first pivot is one."""
        problem = ProblemSpec(
            alpha=0.3, delta=2.5, f=lambda x: 1.0, kernel=lambda x, t: 0.0, name="const"
        )
        result = solve(problem, scheme, 5)
        assert result.values[0] == 2.5
        assert result.pivots[0] == 1.0
        assert result.errors is None


class TestSolveResult:
    """Tests for the solution container."""

    def test_fields(self):
        """The result records mesh, scheme, quadrature order and problem name."""
        result = solve(example_5_1(), "S3", 10, quad_order=16)
        assert result.mesh == Mesh(10)
        assert result.scheme is SchemeKind.S3
        assert result.quad_order == 16
        assert result.problem_name == "ex5.1"
        assert result.values.shape == result.errors.shape == result.pivots.shape == (11,)

    def test_read_only(self):
        """Values and errors cannot be modified."""
        result = solve(example_5_1(), "s1", 5)
        with pytest.raises(ValueError):
            result.values[1] = 0.0
        with pytest.raises(ValueError):
            result.errors[1] = 0.0

    def test_errors_sign(self):
        """Errors are exact minus numerical values."""
        problem = example_5_1()
        result = solve(problem, "s1", 5)
        for x, value, error in zip(result.nodes, result.values, result.errors):
            assert error == pytest.approx(problem.exact(x) - value, abs=1e-15)

    def test_at(self):
        """Values are looked up at the nearest node."""
        result = solve(example_5_1(), "s1", 10)
        assert result.at(0.6) == pytest.approx(-0.228457, abs=2e-6)
        assert result.at(0.6) == result.values[6]
        with pytest.raises(DomainError):
            result.at(-0.5)

    def test_missing_exact(self):
        """Without an exact solution there is no nodal error."""
        problem = ProblemSpec(alpha=0.5, delta=1.0, f=math.cos, kernel=lambda x, t: 0.0)
        result = solve(problem, "s2", 5)
        assert result.errors is None
        assert np.all(np.isfinite(result.values))
        with pytest.raises(MissingExactSolution, match="no exact solution"):
            result.max_abs_error


class TestSolveValues:
    """Regression values on the first built-in problem."""

    def test_last_node(self):
        """S1 with n = 5 gives 0.0505046 at x = 1."""
        result = solve(example_5_1(), SchemeKind.S1, 5)
        assert result.values[-1] == pytest.approx(0.0505046, abs=2e-7)
        assert result.max_abs_error == pytest.approx(5.05046e-2, rel=5e-5)

    def test_first_step_shared(self):
        """All three schemes coincide at the first node."""
        values = [solve(example_5_1(), s, 5).values[1] for s in SCHEMES]
        assert values[0] == pytest.approx(-0.146642, abs=2e-6)
        assert values[1] == pytest.approx(values[0], rel=1e-15)
        assert values[2] == pytest.approx(values[0], rel=1e-15)

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_refinement_reduces_error(self, scheme):
        """The error decreases along a halving ladder."""
        errors = [solve(example_5_1(), scheme, n).max_abs_error for n in (5, 10, 20, 40)]
        assert all(fine < coarse for coarse, fine in zip(errors, errors[1:]))

    def test_unknown_scheme(self):
        """Scheme names outside S1, S2, S3 are rejected."""
        with pytest.raises(DomainError, match="Unknown scheme"):
            solve(example_5_1(), "s4", 5)

    def test_invalid_n(self):
        """The mesh size must be a positive integer."""
        with pytest.raises(DomainError):
            solve(example_5_1(), "s1", 0)


class TestAssembleRow:
    """Tests for single rows of the system."""

    def test_s1_row(self, rule):
        """An S1 row is the linear Caputo row minus the linear kernel row."""
        problem = example_5_1()
        mesh = Mesh(10)
        weights, rhs = assemble_row(4, problem, "s1", mesh, rule)
        expected = (
            linear_caputo_row(4, 0.5, mesh.h).weights
            - linear_kernel_row(4, problem.kernel, rule, mesh.h).weights
        )
        assert np.array_equal(weights, expected)
        assert rhs == problem.f(0.4)

    @pytest.mark.parametrize("k", [0, 11])
    def test_row_index(self, k):
        """Rows exist for 1 <= k <= n."""
        with pytest.raises(DomainError):
            assemble_row(k, example_5_1(), "s1", Mesh(10))


class TestResidual:
    """Tests for the assembled-system residual."""

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_solution_satisfies_system(self, builtin, scheme):
        """The computed solution satisfies every row to rounding error."""
        result = solve(builtin, scheme, 20)
        assert residual(result, builtin) <= 1e-10

    def test_perturbation_is_detected(self):
        """Changing one nodal value produces a visible residual."""
        problem = example_5_1()
        result = solve(problem, "s1", 20)
        values = np.array(result.values)
        values[3] += 1e-6
        perturbed = SolveResult(
            result.mesh, result.scheme, values, None, result.pivots, result.quad_order
        )
        assert residual(perturbed, problem) > 1e-7

    def test_other_scheme(self):
        """The S1 solution does not satisfy the S2 system."""
        problem = example_5_1()
        result = solve(problem, "s1", 10)
        assert residual(result, problem, scheme="s2") > 1e-6


class TestSolverErrors:
    """Failures of forward substitution."""

    def test_near_singular_pivot(self):
        """A kernel cancelling the first Caputo weight makes the pivot vanish."""
        h = 0.25
        diagonal = linear_caputo_row(1, 0.5, h).weights[1]
        # b_1 = c h / 2 for a constant kernel c
        c = 2.0 * diagonal / h
        problem = ProblemSpec(
            alpha=0.5, delta=0.0, f=lambda x: 1.0, kernel=lambda x, t: c, name="cancel"
        )
        with pytest.raises(NearSingularPivot) as excinfo:
            solve(problem, "s1", 4)
        assert excinfo.value.k == 1
        assert excinfo.value.kind == "NearSingularPivot"
        assert isinstance(excinfo.value, SolverError)

    def test_non_finite_rhs(self):
        """A non-finite forcing value is reported with its node."""
        problem = ProblemSpec(
            alpha=0.5,
            delta=0.0,
            f=lambda x: math.inf if x > 0.5 else 1.0,
            kernel=lambda x, t: 0.0,
        )
        with pytest.raises(NonFiniteValue) as excinfo:
            solve(problem, "s3", 10)
        assert excinfo.value.k == 6

    def test_overflow(self):
        """Values that overflow are reported."""
        problem = ProblemSpec(
            alpha=0.5, delta=1e308, f=lambda x: 1e308, kernel=lambda x, t: 0.0
        )
        with pytest.raises(NonFiniteValue):
            solve(problem, "s1", 5)

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_forcing_expression_fails(self, scheme):
        """Expression errors in the forcing term become solver errors at their node."""
        problem = load_problem(
            "alpha = 0.5\ndelta = 0\nf = 1/(x - 0.5)\nkernel = 0\n", name="pole"
        )
        with pytest.raises(NonFiniteValue, match="field 'f': division by zero") as excinfo:
            solve(problem, scheme, 4)
        assert excinfo.value.k == 2
        assert isinstance(excinfo.value.__cause__, EvalError)

    def test_kernel_expression_fails(self):
        """Expression errors in the kernel become solver errors at their node."""
        problem = load_problem("alpha = 0.5\ndelta = 0\nf = 1\nkernel = ln(t - 0.3)\n")
        with pytest.raises(NonFiniteValue, match="field 'kernel'") as excinfo:
            solve(problem, "s1", 4)
        assert excinfo.value.k == 1


def test_debug_logging(caplog):
    """Each solve logs its rows at debug level."""
    with caplog.at_level(logging.DEBUG, logger="fide_schemes"):
        solve(example_5_1(), "s2", 5)
    messages = [r.getMessage() for r in caplog.records]
    assert any("k=5" in m for m in messages)
    assert any("solved ex5.1 with S2, n=5" in m for m in messages)
