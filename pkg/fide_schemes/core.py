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
Foundational value types and numerical building blocks.

This module contains the uniform :class:`Mesh` on :math:`[0, 1]`, the :class:`ProblemSpec`
describing

.. math:: D^\alpha \varphi(x) = f(x) + \int_0^x K(x, \tau) \varphi(\tau) d\tau,
    \quad \varphi(0) = \delta,

the :class:`SchemeKind` selector, the gamma function and fixed-order Gauss-Legendre
quadrature on :math:`[0, 1]`.
"""
import logging
import math
import os
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Callable, Optional

import numpy as np

from ._exceptions import DomainError, QuadratureError

logger = logging.getLogger(__name__)

ScalarFunction = Callable[[float], float]
KernelFunction = Callable[[float, float], float]

DEFAULT_QUAD_ORDER = 10
MIN_QUAD_ORDER = 2
MAX_QUAD_ORDER = 64
QUAD_ORDER_ENV = "FIDE_QUAD_ORDER"

GAMMA_UPPER = 171.0

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7
_LANCZOS_COEFFS = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


class SchemeKind(Enum):
    """Discretization scheme selector.

    ``S1`` pairs linear Caputo weights with linear kernel weights, ``S2`` pairs quadratic
    with quadratic, and ``S3`` pairs quadratic Caputo weights with linear kernel weights.
    """

    S1 = "s1"
    S2 = "s2"
    S3 = "s3"

    @classmethod
    def parse(cls, value) -> "SchemeKind":
        """Convert ``"s1"``/``"S1"``/:class:`SchemeKind` into a :class:`SchemeKind`."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise DomainError(f"Unknown scheme {value!r}; valid schemes are: {valid}") from None

    @property
    def quadratic_caputo(self) -> bool:
        """bool: whether the Caputo derivative is discretized by quadratic interpolation"""
        return self is not SchemeKind.S1

    @property
    def quadratic_kernel(self) -> bool:
        """bool: whether the Volterra integral is discretized by quadratic interpolation"""
        return self is SchemeKind.S2

    def __str__(self):
        return self.name


class Regularity(Enum):
    """Marker for derivative maxima that do not exist on the closed unit interval."""

    UNBOUNDED = "unbounded"

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = Regularity.UNBOUNDED


@dataclass(frozen=True)
class Mesh:
    """Uniform grid on :math:`[0, 1]` with ``n`` subintervals.

    Args:
        n (int): number of subintervals

    **Example**

    >>> mesh = Mesh(5)
    >>> mesh.h
    0.2
    >>> mesh.nodes
    array([0. , 0.2, 0.4, 0.6, 0.8, 1. ])
    """

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DomainError(f"Mesh requires a positive integer subinterval count, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        """float: step size ``1/n``"""
        return 1.0 / self.n

    @cached_property
    def nodes(self) -> np.ndarray:
        """array[float]: node locations :math:`x_k = k/n`, computed multiplicatively"""
        nodes = np.arange(self.n + 1, dtype=np.float64) / self.n
        nodes.setflags(write=False)
        return nodes

    def node(self, k: int) -> float:
        """Return the location of node ``k``."""
        return float(self.nodes[k])

    def index_of(self, x: float) -> int:
        """Return the index of the node closest to ``x``."""
        k = int(round(x * self.n))
        if k < 0 or k > self.n:
            raise DomainError(f"x = {x} lies outside [0, 1]")
        return k


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    r"""A linear fractional integro-differential equation on :math:`[0, 1]`.

    Args:
        alpha (float): Caputo order, ``0 < alpha < 1``
        delta (float): initial value :math:`\varphi(0)`
        f (Callable[[float], float]): forcing term :math:`f(x)`
        kernel (Callable[[float, float], float]): Volterra kernel :math:`K(x, \tau)`
        exact (Callable[[float], float] or None): exact solution, if known
        name (str): label used in reports
    """

    alpha: float
    delta: float
    f: ScalarFunction
    kernel: KernelFunction
    exact: Optional[ScalarFunction] = None
    name: str = "problem"

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"Caputo order alpha must lie in (0, 1), got {self.alpha!r}")
        delta = float(self.delta)
        if not math.isfinite(delta):
            raise DomainError(f"Initial value delta must be finite, got {self.delta!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "delta", delta)

    @property
    def has_exact(self) -> bool:
        """bool: whether an exact solution is attached"""
        return self.exact is not None


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Legendre rule normalized for integrals over :math:`[0, 1]`.

    Args:
        order (int): number of abscissae
        abscissae (array[float]): nodes in ``(0, 1)``
        weights (array[float]): positive weights summing to one
    """

    order: int
    abscissae: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.abscissae.shape != (self.order,) or self.weights.shape != (self.order,):
            raise ValueError("Abscissae and weights must both have length equal to the order.")


def gamma(x: float) -> float:
    r"""Gamma function :math:`\Gamma(x)` for real ``0 < x < 171``.

    Uses the Lanczos approximation with :math:`g = 7` and nine coefficients, together with
    the reflection formula for ``x < 1/2``.

    Args:
        x (float): argument

    Returns:
        float: :math:`\Gamma(x)`

    **Example**

    >>> gamma(0.5) ** 2
    3.1415926535897927
    """
    x = float(x)
    if not (0.0 < x < GAMMA_UPPER):
        raise DomainError(f"gamma is only supported on (0, {GAMMA_UPPER:g}), got {x!r}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    series = _LANCZOS_COEFFS[0] + float(np.sum(_LANCZOS_COEFFS[1:] / (z + np.arange(1, 9))))
    t = z + _LANCZOS_G + 0.5
    # split the power so that t**(z + 1/2) does not overflow before exp(-t) is applied
    half_power = t ** (0.5 * (z + 0.5))
    return _SQRT_TWO_PI * (half_power * math.exp(-t)) * half_power * series


@lru_cache(maxsize=None, typed=True)
def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule with ``order`` points mapped from ``(-1, 1)`` to ``(0, 1)``.

    Args:
        order (int): number of points, between 2 and 64

    Returns:
        QuadratureRule: a rule exact for polynomials of degree ``2*order - 1``
    """
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise QuadratureError(f"Quadrature order must be an integer, got {order!r}")
    if not MIN_QUAD_ORDER <= order <= MAX_QUAD_ORDER:
        raise QuadratureError(
            f"Unsupported quadrature order {order}; supported orders are "
            f"{MIN_QUAD_ORDER} to {MAX_QUAD_ORDER}"
        )
    nodes, weights = np.polynomial.legendre.leggauss(int(order))
    abscissae = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    abscissae.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(int(order), abscissae, weights)


def default_quad_order() -> int:
    """Quadrature order taken from the ``FIDE_QUAD_ORDER`` environment variable.

    Falls back to :data:`DEFAULT_QUAD_ORDER` with a warning if the variable does not hold a
    supported order.
    """
    raw = os.environ.get(QUAD_ORDER_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_QUAD_ORDER
    try:
        order = int(raw)
    except ValueError:
        order = None
    if order is None or not MIN_QUAD_ORDER <= order <= MAX_QUAD_ORDER:
        warn(
            f"Ignoring {QUAD_ORDER_ENV}={raw!r}: expected an integer between {MIN_QUAD_ORDER} "
            f"and {MAX_QUAD_ORDER}. Using order {DEFAULT_QUAD_ORDER}.",
            UserWarning,
        )
        return DEFAULT_QUAD_ORDER
    return order


def resolve_rule(rule: Optional[QuadratureRule] = None, quad_order: Optional[int] = None):
    """Return ``rule`` if given, otherwise the Gauss-Legendre rule of the requested order."""
    if rule is not None:
        return rule
    return gauss_legendre(quad_order if quad_order is not None else default_quad_order())


def sample(g: ScalarFunction, points) -> np.ndarray:
    """Evaluate a scalar function at each point, rejecting non-finite values."""
    values = np.fromiter((g(float(p)) for p in points), dtype=np.float64, count=len(points))
    if not np.all(np.isfinite(values)):
        bad = points[int(np.argmin(np.isfinite(values)))]
        raise QuadratureError(f"Integrand is not finite at abscissa {float(bad)!r}")
    return values


def integrate_01(g: ScalarFunction, rule: QuadratureRule) -> float:
    r"""Approximate :math:`\int_0^1 g(p) dp` by :math:`\sum_i w_i g(p_i)`.

    Args:
        g (Callable[[float], float]): integrand
        rule (QuadratureRule): quadrature rule on ``[0, 1]``

    Returns:
        float: the quadrature sum
    """
    return float(np.dot(rule.weights, sample(g, rule.abscissae)))


def warn(message: str, category=UserWarning):
    """Emit ``message`` both as a Python warning and on the package logger."""
    logger.warning(message)
    warnings.warn(message, category, stacklevel=3)
