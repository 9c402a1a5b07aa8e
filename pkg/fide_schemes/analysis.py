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
Error metrics, convergence studies and a priori error bounds.

The maximum absolute error over the mesh nodes is

.. math:: \mathrm{MAE}(h) = \max_k |\varphi(x_k) - \varphi_k|,

and the convergence order between two meshes is :math:`\log_2(\mathrm{MAE}(h) / \mathrm{MAE}(h/2))`.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ._exceptions import DomainError, MissingExactSolution
from .core import UNBOUNDED, ProblemSpec, QuadratureRule, SchemeKind, gamma, resolve_rule
from .solver import SolveResult, solve

logger = logging.getLogger(__name__)

NOISE_FLOOR = 1e-12
DEFAULT_LADDER = (5, 10, 20, 40, 80)


@dataclass(frozen=True)
class ConvergenceRow:
    """One rung of a convergence ladder; ``co`` is ``None`` on the first rung."""

    n: int
    h: float
    mae: float
    co: Optional[float] = None


@dataclass(frozen=True)
class ConvergenceReport:
    """MAE and convergence order of one scheme on one problem over a mesh ladder."""

    scheme: SchemeKind
    problem_name: str
    rows: Tuple[ConvergenceRow, ...]

    @property
    def h(self) -> List[float]:
        return [r.h for r in self.rows]

    @property
    def mae(self) -> List[float]:
        return [r.mae for r in self.rows]

    @property
    def co(self) -> List[Optional[float]]:
        return [r.co for r in self.rows]


@dataclass(frozen=True, eq=False)
class ComparisonTable:
    """Nodal solutions of several schemes on the same mesh, side by side.

    Args:
        problem_name (str): name of the solved problem
        n (int): number of subintervals
        x (array[float]): the tabulated nodes
        exact (array[float] or None): exact solution at ``x``, if known
        columns (dict[SchemeKind, array[float]]): numerical solution of each scheme at ``x``
    """

    problem_name: str
    n: int
    x: np.ndarray
    exact: Optional[np.ndarray]
    columns: Dict[SchemeKind, np.ndarray]


@dataclass(frozen=True)
class BoundInputs:
    r"""Data entering the a priori error bounds at node ``x_k``.

    Args:
        alpha (float): Caputo order
        h (float): step size
        x_k (float): evaluation node
        x_1 (float): first interior node
        max2_first (float): :math:`\max |\varphi''|` on :math:`[x_0, x_1]`
        max2 (float): :math:`\max |\varphi''|` on :math:`[x_0, x_k]`
        max3 (float): :math:`\max |\varphi'''|` on :math:`[x_0, x_k]`
        M (float): kernel bound :math:`|K| \leq M`
    """

    alpha: float
    h: float
    x_k: float
    x_1: float
    max2_first: float
    max2: float
    max3: float
    M: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"Caputo order alpha must lie in (0, 1), got {self.alpha!r}")
        if not self.h > 0.0:
            raise DomainError(f"Step size must be positive, got h={self.h!r}")
        if not 0.0 < self.x_1 <= self.x_k:
            raise DomainError(
                f"Bound nodes must satisfy 0 < x_1 <= x_k, got x_1={self.x_1}, x_k={self.x_k}"
            )
        for name in ("max2_first", "max2", "max3"):
            value = getattr(self, name)
            if value is not UNBOUNDED and not value >= 0.0:
                raise DomainError(f"{name} must be non-negative, got {value!r}")
        if not self.M >= 0.0:
            raise DomainError(f"Kernel bound M must be non-negative, got {self.M!r}")


@dataclass(frozen=True)
class BoundRow:
    """Measured MAE next to the a priori bound at ``k = n``; ``ratio = mae / bound``."""

    n: int
    h: float
    mae: float
    bound: float
    ratio: float


def mae(result: SolveResult) -> float:
    """Maximum absolute nodal error of a solution.

    Raises:
        MissingExactSolution: if the solved problem has no exact solution
    """
    return result.max_abs_error


def convergence_order(mae_coarse: float, mae_fine: float) -> float:
    """Convergence order between a mesh and its halving, ``log2(mae_coarse / mae_fine)``."""
    for value in (mae_coarse, mae_fine):
        if not (math.isfinite(value) and value > 0.0):
            raise DomainError(f"Convergence order needs positive finite errors, got {value!r}")
    return math.log2(mae_coarse / mae_fine)


def check_ladder(n_list: Iterable[int]) -> Tuple[int, ...]:
    """Validate a mesh ladder: positive integers, each double the previous one."""
    ladder = tuple(n_list)
    if not ladder:
        raise DomainError("Mesh ladder must not be empty")
    for n in ladder:
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise DomainError(f"Mesh sizes must be positive integers, got {n!r}")
    for coarse, fine in zip(ladder, ladder[1:]):
        if fine != 2 * coarse:
            raise DomainError(
                f"Each mesh size must double the previous one, got {coarse} followed by {fine}"
            )
    return tuple(int(n) for n in ladder)


def _solve_all(problem, scheme, ladder, rule, max_workers) -> List[SolveResult]:
    if max_workers is not None and max_workers > 1 and len(ladder) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = [executor.submit(solve, problem, scheme, n, rule) for n in ladder]
            results = [fut.result() for fut in futures]
    else:
        results = [solve(problem, scheme, n, rule) for n in ladder]
    return sorted(results, key=lambda r: r.mesh.n)


def convergence_study(
    problem: ProblemSpec,
    scheme,
    n_list: Sequence[int] = DEFAULT_LADDER,
    rule: Optional[QuadratureRule] = None,
    *,
    quad_order: Optional[int] = None,
    max_workers: int = 1,
) -> ConvergenceReport:
    """Solve on every mesh of a halving ladder and tabulate MAE and convergence order.

    The convergence order is omitted when either MAE is below :data:`NOISE_FLOOR`.

    Args:
        problem (ProblemSpec): problem with an exact solution
        scheme (SchemeKind or str): discretization scheme
        n_list (Sequence[int]): subinterval counts, each double the previous
        rule (QuadratureRule): quadrature rule for the kernel weights
        quad_order (int): Gauss-Legendre order used when ``rule`` is not given
        max_workers (int): number of threads solving different meshes concurrently

    Returns:
        ConvergenceReport: one row per mesh, ordered by decreasing ``h``
    """
    scheme = SchemeKind.parse(scheme)
    ladder = check_ladder(n_list)
    if problem.exact is None:
        raise MissingExactSolution(
            f"Problem '{problem.name}' has no exact solution; a convergence study needs one"
        )
    rule = resolve_rule(rule, quad_order)
    results = _solve_all(problem, scheme, ladder, rule, max_workers)

    rows = []
    previous = None
    for result in results:
        error = result.max_abs_error
        co = None
        if previous is not None:
            if previous < NOISE_FLOOR or error < NOISE_FLOOR:
                logger.warning(
                    "%s/%s n=%d: error at noise floor, convergence order omitted",
                    problem.name,
                    scheme,
                    result.mesh.n,
                )
            else:
                co = convergence_order(previous, error)
        logger.info(
            "%s/%s n=%d h=%.6g mae=%.6e co=%s",
            problem.name,
            scheme,
            result.mesh.n,
            result.mesh.h,
            error,
            "-" if co is None else f"{co:.6g}",
        )
        rows.append(ConvergenceRow(result.mesh.n, result.mesh.h, error, co))
        previous = error
    return ConvergenceReport(scheme, problem.name, tuple(rows))


def compare_schemes(
    problem: ProblemSpec,
    n: int,
    *,
    schemes: Iterable = tuple(SchemeKind),
    rule: Optional[QuadratureRule] = None,
    quad_order: Optional[int] = None,
    every: int = 1,
) -> ComparisonTable:
    """Solve one problem with several schemes and tabulate the nodal values.

    Args:
        problem (ProblemSpec): the equation
        n (int): number of subintervals
        schemes (Iterable[SchemeKind or str]): schemes to compare, in column order
        rule (QuadratureRule): quadrature rule for the kernel weights
        quad_order (int): Gauss-Legendre order used when ``rule`` is not given
        every (int): keep every ``every``-th node

    Returns:
        ComparisonTable: the side-by-side table
    """
    if every < 1:
        raise DomainError(f"Row stride must be positive, got every={every}")
    rule = resolve_rule(rule, quad_order)
    columns = {}
    nodes = None
    exact = None
    for scheme in schemes:
        result = solve(problem, SchemeKind.parse(scheme), n, rule)
        columns[result.scheme] = np.asarray(result.values[::every])
        nodes = result.nodes[::every]
        if result.errors is not None:
            exact = np.asarray(result.values[::every] + result.errors[::every])
    if nodes is None:
        raise DomainError("At least one scheme is needed for a comparison")
    return ComparisonTable(problem.name, n, nodes, exact, columns)


def _require_bounded(inputs: BoundInputs, names: Iterable[str]):
    for name in names:
        if getattr(inputs, name) is UNBOUNDED:
            raise DomainError(
                f"{name} is unbounded: the exact solution is not smooth enough on [0, 1] "
                "for the error bound to apply"
            )


def bound_s1(inputs: BoundInputs) -> float:
    """A priori error bound of the linear scheme at ``x_k``."""
    _require_bounded(inputs, ("max2",))
    a, h = inputs.alpha, inputs.h
    caputo = (
        (1.0 / 8.0 + a / ((1.0 - a) * (2.0 - a)))
        * inputs.max2
        * h ** (2.0 - a)
        / gamma(1.0 - a)
    )
    kernel = inputs.M / 8.0 * inputs.max2 * inputs.x_k * h**2
    return caputo + kernel


def _first_step(inputs: BoundInputs) -> float:
    a, h = inputs.alpha, inputs.h
    return a / (2.0 * gamma(3.0 - a)) * inputs.max2_first * h ** (2.0 - a) + (
        inputs.M / 2.0 * inputs.max2_first * inputs.x_1 * h**2
    )


def _quadratic_caputo_terms(inputs: BoundInputs) -> float:
    a, h = inputs.alpha, inputs.h
    span = inputs.x_k - inputs.x_1
    if not span > 0.0:
        raise DomainError(f"Bound for k >= 2 needs x_k > x_1, got x_k = x_1 = {inputs.x_k}")
    first = a / 12.0 * inputs.max2_first * span ** (-a - 1.0) * h**3
    rest = (
        1.0 / 12.0 + a / (3.0 * (1.0 - a) * (2.0 - a)) * (0.5 + 1.0 / (3.0 - a))
    ) * inputs.max3 * h ** (3.0 - a)
    return (first + rest) / gamma(1.0 - a)


def bound_s2(k: int, inputs: BoundInputs) -> float:
    """A priori error bound of the quadratic scheme at node ``k``.

    For ``k = 1`` only the linear first step contributes; for ``k >= 2`` the quadratic
    Caputo terms and the quadratic kernel terms are added to the first-step kernel term.
    """
    if k < 1:
        raise DomainError(f"Bound node index must be at least 1, got k={k}")
    if k == 1:
        _require_bounded(inputs, ("max2_first",))
        return _first_step(inputs)
    _require_bounded(inputs, ("max2_first", "max3"))
    h = inputs.h
    span = inputs.x_k - inputs.x_1
    kernel = inputs.M / 2.0 * inputs.max2_first * inputs.x_1 * h**2 + (
        inputs.M / 12.0 * inputs.max3 * span * h**3
    )
    return _quadratic_caputo_terms(inputs) + kernel


def bound_s3(k: int, inputs: BoundInputs) -> float:
    """A priori error bound of the quadratic-linear scheme at node ``k``."""
    if k < 1:
        raise DomainError(f"Bound node index must be at least 1, got k={k}")
    if k == 1:
        _require_bounded(inputs, ("max2_first",))
        return _first_step(inputs)
    _require_bounded(inputs, ("max2_first", "max2", "max3"))
    kernel = inputs.M / 2.0 * inputs.max2 * inputs.x_k * inputs.h**2
    return _quadratic_caputo_terms(inputs) + kernel


def bound_for(scheme, k: int, inputs: BoundInputs) -> float:
    """Evaluate the error bound that matches ``scheme`` at node ``k``."""
    scheme = SchemeKind.parse(scheme)
    if scheme is SchemeKind.S1:
        return bound_s1(inputs)
    if scheme is SchemeKind.S2:
        return bound_s2(k, inputs)
    return bound_s3(k, inputs)


def bound_inputs_for(problem, n: int, k: Optional[int] = None) -> BoundInputs:
    """Bound inputs of a built-in problem on a mesh of ``n`` subintervals at node ``k``.

    Raises:
        DomainError: if the problem carries no regularity data or an unbounded maximum
    """
    if not hasattr(problem, "kernel_bound"):
        raise DomainError(f"Problem '{problem.name}' carries no regularity data for the bounds")
    if not getattr(problem, "bounded", False):
        raise DomainError(
            f"Problem '{problem.name}' has an exact solution outside C^2[0, 1]; "
            "its second derivative is unbounded, so the error bounds do not apply"
        )
    k = n if k is None else k
    if not 1 <= k <= n:
        raise DomainError(f"Node index k={k} must satisfy 1 <= k <= {n}")
    return BoundInputs(
        alpha=problem.alpha,
        h=1.0 / n,
        x_k=k / n,
        x_1=1.0 / n,
        max2_first=problem.max2_first,
        max2=problem.max2,
        max3=problem.max3,
        M=problem.kernel_bound,
    )


def bound_study(
    problem,
    scheme,
    n_list: Sequence[int] = DEFAULT_LADDER,
    rule: Optional[QuadratureRule] = None,
    *,
    quad_order: Optional[int] = None,
    max_workers: int = 1,
) -> List[BoundRow]:
    """Compare the measured MAE with the error bound at ``k = n`` for every mesh of a ladder."""
    scheme = SchemeKind.parse(scheme)
    ladder = check_ladder(n_list)
    bounds = {n: bound_for(scheme, n, bound_inputs_for(problem, n)) for n in ladder}
    report = convergence_study(
        problem, scheme, ladder, rule, quad_order=quad_order, max_workers=max_workers
    )
    rows = []
    for row in report.rows:
        bound = bounds[row.n]
        if bound > 0.0:
            ratio = row.mae / bound
        else:
            ratio = 0.0 if row.mae == 0.0 else math.inf
        if ratio > 1.0:
            logger.warning(
                "%s/%s n=%d: measured error %.6e exceeds the bound %.6e",
                problem.name,
                scheme,
                row.n,
                row.mae,
                bound,
            )
        rows.append(BoundRow(row.n, row.h, row.mae, bound, ratio))
    return rows
