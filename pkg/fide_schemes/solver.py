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
r"""
Assembly and forward substitution of the discretized equation.

Row ``k`` of the system reads

.. math:: \sum_{j=0}^k (c_{kj} - u_{kj}) \varphi_j = f(x_k),

where :math:`c_{kj}` are Caputo weights and :math:`u_{kj}` Volterra weights. The system is
lower triangular, so :math:`\varphi_1, \ldots, \varphi_n` follow one at a time from
:math:`\varphi_0 = \delta`.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ._exceptions import (
    DomainError,
    ExprError,
    MissingExactSolution,
    NearSingularPivot,
    NonFiniteValue,
)
from .caputo import linear_caputo_row, quadratic_caputo_row
from .core import Mesh, ProblemSpec, QuadratureRule, SchemeKind, gauss_legendre, resolve_rule
from .kernel_weights import linear_kernel_row, quadratic_kernel_row

logger = logging.getLogger(__name__)

PIVOT_FACTOR = 1e3


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Numerical solution of a problem on a mesh.

    Args:
        mesh (Mesh): the mesh the problem was solved on
        scheme (SchemeKind): discretization scheme
        values (array[float]): nodal values ``phi_0, ..., phi_n``
        errors (array[float] or None): ``exact(x_k) - phi_k`` if an exact solution is known
        pivots (array[float]): magnitude of the diagonal entry of every row, ``pivots[0] = 1``
        quad_order (int): order of the quadrature rule used for the kernel weights
        problem_name (str): name of the solved problem
    """

    mesh: Mesh
    scheme: SchemeKind
    values: np.ndarray
    errors: Optional[np.ndarray]
    pivots: np.ndarray
    quad_order: int
    problem_name: str = "problem"

    def __post_init__(self):
        for arr in (self.values, self.errors, self.pivots):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def nodes(self) -> np.ndarray:
        """array[float]: mesh nodes ``x_0, ..., x_n``"""
        return self.mesh.nodes

    @property
    def max_abs_error(self) -> float:
        """float: maximum absolute nodal error"""
        if self.errors is None:
            raise MissingExactSolution(
                f"Problem '{self.problem_name}' has no exact solution; nodal errors are undefined"
            )
        return float(np.max(np.abs(self.errors)))

    def at(self, x: float) -> float:
        """Numerical value at the mesh node nearest to ``x``."""
        return float(self.values[self.mesh.index_of(x)])


def _rows(k: int, problem: ProblemSpec, scheme: SchemeKind, mesh: Mesh, rule: QuadratureRule):
    h = mesh.h
    if scheme.quadratic_caputo:
        caputo = quadratic_caputo_row(k, problem.alpha, h)
    else:
        caputo = linear_caputo_row(k, problem.alpha, h)
    if scheme.quadratic_kernel:
        kernel = quadratic_kernel_row(k, problem.kernel, rule, h)
    else:
        kernel = linear_kernel_row(k, problem.kernel, rule, h)
    return caputo, kernel


def assemble_row(
    k: int,
    problem: ProblemSpec,
    scheme,
    mesh: Mesh,
    rule: Optional[QuadratureRule] = None,
) -> Tuple[np.ndarray, float]:
    """Assemble row ``k`` of the lower-triangular system.

    S1 combines the linear Caputo and linear kernel rows, S2 the quadratic ones and S3
    the quadratic Caputo row with the linear kernel row.

    Args:
        k (int): node index, ``1 <= k <= n``
        problem (ProblemSpec): the equation
        scheme (SchemeKind or str): discretization scheme
        mesh (Mesh): uniform mesh
        rule (QuadratureRule): quadrature rule for the kernel weights

    Returns:
        tuple[array[float], float]: the ``k + 1`` row weights and the right-hand side ``f(x_k)``

    Raises:
        NonFiniteValue: if evaluating ``f`` or the kernel for row ``k`` fails
    """
    scheme = SchemeKind.parse(scheme)
    if not 1 <= k <= mesh.n:
        raise DomainError(f"Row index k={k} must satisfy 1 <= k <= {mesh.n}")
    rule = resolve_rule(rule)
    try:
        caputo, kernel = _rows(k, problem, scheme, mesh, rule)
        rhs = float(problem.f(mesh.node(k)))
    except ExprError as e:
        raise NonFiniteValue(f"Evaluation failed in row {k}: {e}", k) from e
    weights = caputo.weights - kernel.weights
    return weights, rhs


def solve(
    problem: ProblemSpec,
    scheme,
    n: int,
    rule: Optional[QuadratureRule] = None,
    *,
    quad_order: Optional[int] = None,
) -> SolveResult:
    """Solve ``problem`` on a mesh of ``n`` subintervals by forward substitution.

    Args:
        problem (ProblemSpec): the equation
        scheme (SchemeKind or str): discretization scheme
        n (int): number of subintervals
        rule (QuadratureRule): quadrature rule for the kernel weights
        quad_order (int): Gauss-Legendre order used when ``rule`` is not given

    Returns:
        SolveResult: nodal values and, if available, nodal errors

    Raises:
        NearSingularPivot: if a diagonal entry is too small to divide by
        NonFiniteValue: if a right-hand side or solution value is not finite, or if an
            expression-defined ``f`` or kernel cannot be evaluated

    **Example**

    >>> from fide_schemes.problems import example_5_1
    >>> result = solve(example_5_1(), "s1", 5)
    >>> round(result.values[-1], 7)
    0.0505046
    """
    scheme = SchemeKind.parse(scheme)
    mesh = Mesh(n)
    rule = resolve_rule(rule, quad_order)
    threshold = PIVOT_FACTOR * np.finfo(np.float64).eps * mesh.h ** (-problem.alpha)

    values = np.empty(n + 1)
    pivots = np.empty(n + 1)
    values[0] = problem.delta
    pivots[0] = 1.0
    for k in range(1, n + 1):
        weights, rhs = assemble_row(k, problem, scheme, mesh, rule)
        if not math.isfinite(rhs):
            raise NonFiniteValue(f"Right-hand side f(x_{k}) = {rhs!r} is not finite", k)
        diagonal = weights[k]
        pivots[k] = abs(diagonal)
        if not pivots[k] >= threshold:
            raise NearSingularPivot(
                f"Diagonal entry {diagonal:.6g} at k={k} is below the threshold {threshold:.6g}",
                k,
            )
        values[k] = (rhs - np.dot(weights[:k], values[:k])) / diagonal
        if not math.isfinite(values[k]):
            raise NonFiniteValue(f"Solution value at k={k} is not finite", k)
        logger.debug("scheme=%s k=%d pivot=%.6e phi=%.12e", scheme, k, diagonal, values[k])

    errors = None
    if problem.exact is not None:
        exact = np.array([problem.exact(x) for x in mesh.nodes], dtype=np.float64)
        errors = exact - values

    logger.debug("solved %s with %s, n=%d", problem.name, scheme, n)
    return SolveResult(mesh, scheme, values, errors, pivots, rule.order, problem.name)


def residual(
    result: SolveResult,
    problem: ProblemSpec,
    scheme=None,
    rule: Optional[QuadratureRule] = None,
) -> float:
    """Largest row residual of the assembled system at the computed solution.

    Args:
        result (SolveResult): output of :func:`solve`
        problem (ProblemSpec): the solved equation
        scheme (SchemeKind or str): scheme to assemble with, ``result.scheme`` by default
        rule (QuadratureRule): quadrature rule, the order stored in ``result`` by default

    Returns:
        float: :math:`\\max_k |\\sum_j w_{kj} \\varphi_j - f(x_k)|`
    """
    scheme = result.scheme if scheme is None else SchemeKind.parse(scheme)
    rule = rule if rule is not None else gauss_legendre(result.quad_order)
    worst = 0.0
    for k in range(1, result.mesh.n + 1):
        weights, rhs = assemble_row(k, problem, scheme, result.mesh, rule)
        worst = max(worst, abs(float(np.dot(weights, result.values[: k + 1])) - rhs))
    return worst
