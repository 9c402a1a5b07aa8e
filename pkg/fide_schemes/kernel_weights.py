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
Product-integration weights for the Volterra term

.. math:: \int_0^{x_k} K(x_k, \tau) \varphi(\tau) d\tau \approx \sum_{j=0}^k w_j \varphi_j.

The unknown is replaced by a local interpolant and every subinterval integral of
kernel times Lagrange basis polynomial is evaluated with a fixed Gauss-Legendre rule
in the local coordinate :math:`p \in [0, 1]`.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ._exceptions import DomainError, QuadratureError
from .core import KernelFunction, QuadratureRule, resolve_rule

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class KernelRow:
    """One row of Volterra-integral weights.

    Args:
        k (int): node index the row belongs to
        h (float): step size
        weights (array[float]): ``k + 1`` weights, ``weights[j]`` multiplies ``phi_j``
    """

    k: int
    h: float
    weights: np.ndarray

    def __post_init__(self):
        if self.weights.shape != (self.k + 1,):
            raise ValueError(
                f"A kernel row for k={self.k} needs {self.k + 1} weights, got {self.weights.shape}"
            )
        self.weights.setflags(write=False)

    def __len__(self):
        return self.k + 1


def _kernel_samples(
    k: int, kernel: KernelFunction, rule: QuadratureRule, h: float, first: int, last: int
):
    """Sample ``K(x_k, h (p + j))`` for ``first <= j < last`` at every abscissa.

    Returns an array of shape ``(last - first, rule.order)``.
    """
    x_k = k * h
    tau = h * (rule.abscissae[np.newaxis, :] + np.arange(first, last)[:, np.newaxis])
    values = np.empty_like(tau)
    for idx in np.ndindex(*tau.shape):
        values[idx] = kernel(x_k, float(tau[idx]))
    if not np.all(np.isfinite(values)):
        bad = tau[~np.isfinite(values)][0]
        raise QuadratureError(f"Kernel is not finite at x={x_k!r}, t={float(bad)!r}")
    return values


def _check_k(k: int, h: float):
    if k < 1:
        raise DomainError(f"Kernel rows start at k=1, got k={k}")
    if not h > 0.0:
        raise DomainError(f"Step size must be positive, got h={h!r}")


def _linear_moments(samples: np.ndarray, rule: QuadratureRule, h: float):
    p = rule.abscissae
    S = h * (samples @ (rule.weights * (1.0 - p)))
    T = h * (samples @ (rule.weights * p))
    return S, T


def _quadratic_moments(samples: np.ndarray, rule: QuadratureRule, h: float):
    p = rule.abscissae
    w = rule.weights
    M = 0.5 * h * (samples @ (w * p * (p - 1.0)))
    N = h * (samples @ (w * (1.0 - p * p)))
    O = 0.5 * h * (samples @ (w * p * (p + 1.0)))
    return M, N, O


def st_moments(
    k: int, j: int, kernel: KernelFunction, rule: Optional[QuadratureRule], h: float
) -> Tuple[float, float]:
    r"""Linear-interpolation moments on the subinterval :math:`[x_j, x_{j+1}]`.

    .. math:: S = h \int_0^1 (1 - p) K(x_k, h(p + j)) dp, \quad
        T = h \int_0^1 p K(x_k, h(p + j)) dp

    Args:
        k (int): evaluation node index
        j (int): subinterval index, ``0 <= j <= k - 1``
        kernel (Callable[[float, float], float]): kernel :math:`K(x, \tau)`
        rule (QuadratureRule): quadrature rule, the default order if ``None``
        h (float): step size

    Returns:
        tuple[float, float]: the moments ``(S, T)``
    """
    _check_k(k, h)
    if not 0 <= j <= k - 1:
        raise DomainError(f"Subinterval index j={j} must satisfy 0 <= j <= {k - 1}")
    rule = resolve_rule(rule)
    S, T = _linear_moments(_kernel_samples(k, kernel, rule, h, j, j + 1), rule, h)
    return float(S[0]), float(T[0])


def ab_moments(
    k: int, kernel: KernelFunction, rule: Optional[QuadratureRule], h: float
) -> Tuple[float, float]:
    """First-interval linear weights ``(a_k, b_k)`` of ``phi_0`` and ``phi_1``."""
    return st_moments(k, 0, kernel, rule, h)


def mno_moments(
    k: int, j: int, kernel: KernelFunction, rule: Optional[QuadratureRule], h: float
) -> Tuple[float, float, float]:
    r"""Quadratic-interpolation moments on the subinterval :math:`[x_{j-1}, x_j]`.

    The interpolant passes through :math:`x_{j-2}, x_{j-1}, x_j`; ``M``, ``N`` and ``O``
    are the weights of :math:`\varphi_{j-2}, \varphi_{j-1}, \varphi_j`.

    Args:
        k (int): evaluation node index
        j (int): right endpoint index, ``2 <= j <= k``
        kernel (Callable[[float, float], float]): kernel :math:`K(x, \tau)`
        rule (QuadratureRule): quadrature rule, the default order if ``None``
        h (float): step size

    Returns:
        tuple[float, float, float]: the moments ``(M, N, O)``
    """
    _check_k(k, h)
    if not 2 <= j <= k:
        raise DomainError(f"Subinterval index j={j} must satisfy 2 <= j <= {k}")
    rule = resolve_rule(rule)
    M, N, O = _quadratic_moments(_kernel_samples(k, kernel, rule, h, j - 1, j), rule, h)
    return float(M[0]), float(N[0]), float(O[0])


def linear_kernel_row(
    k: int, kernel: KernelFunction, rule: Optional[QuadratureRule], h: float
) -> KernelRow:
    """Volterra weights of the piecewise-linear interpolant at node ``k``.

    ``weights[0] = S(k, 0)``, ``weights[j] = S(k, j) + T(k, j - 1)`` for ``1 <= j <= k - 1``
    and ``weights[k] = T(k, k - 1)``. For ``K = 1`` this is the composite trapezoidal rule.
    """
    _check_k(k, h)
    rule = resolve_rule(rule)
    S, T = _linear_moments(_kernel_samples(k, kernel, rule, h, 0, k), rule, h)
    weights = np.zeros(k + 1)
    weights[:k] += S
    weights[1:] += T
    return KernelRow(k, h, weights)


def quadratic_kernel_row(
    k: int, kernel: KernelFunction, rule: Optional[QuadratureRule], h: float
) -> KernelRow:
    r"""Volterra weights of the piecewise-quadratic interpolant at node ``k``.

    The first subinterval keeps the linear weights ``a_k, b_k``; the row is then filled
    from the case tables for ``k = 1``, ``2``, ``3`` and ``k >= 4``.

    Args:
        k (int): node index, ``k >= 1``
        kernel (Callable[[float, float], float]): kernel :math:`K(x, \tau)`
        rule (QuadratureRule): quadrature rule, the default order if ``None``
        h (float): step size

    Returns:
        KernelRow: weights in node order
    """
    _check_k(k, h)
    rule = resolve_rule(rule)
    samples = _kernel_samples(k, kernel, rule, h, 0, k)
    S, T = _linear_moments(samples[:1], rule, h)
    a, b = S[0], T[0]
    v = np.empty(k + 1)
    if k == 1:
        v[0] = a
        v[1] = b
        return KernelRow(k, h, v)

    # samples[j - 1] lies on [x_{j-1}, x_j]; pad so that M[j] is the moment for that j
    M, N, O = (
        np.concatenate(([np.nan, np.nan], m)) for m in _quadratic_moments(samples[1:], rule, h)
    )
    if k == 2:
        v[0] = M[2] + a
        v[1] = N[2] + b
        v[2] = O[2]
    elif k == 3:
        v[0] = M[2] + a
        v[1] = M[3] + N[2] + b
        v[2] = N[3] + O[2]
        v[3] = O[3]
    else:
        j = np.arange(2, k - 1)
        v[0] = M[2] + a
        v[1] = M[3] + N[2] + b
        v[2 : k - 1] = M[j + 2] + N[j + 1] + O[j]
        v[k - 1] = N[k] + O[k - 1]
        v[k] = O[k]
    return KernelRow(k, h, v)


def scatter_quadratic_kernel_row(
    k: int, kernel: KernelFunction, rule: Optional[QuadratureRule], h: float
) -> KernelRow:
    """Assemble the quadratic Volterra row by looping over subintervals.

    Each subinterval ``[x_{j-1}, x_j]`` with ``j >= 2`` scatters ``(M, N, O)`` into the
    nodes ``(j - 2, j - 1, j)``. Used to check :func:`quadratic_kernel_row`.
    """
    _check_k(k, h)
    rule = resolve_rule(rule)
    weights = np.zeros(k + 1)
    a, b = ab_moments(k, kernel, rule, h)
    weights[0] += a
    weights[1] += b
    for j in range(2, k + 1):
        M, N, O = mno_moments(k, j, kernel, rule, h)
        weights[j - 2] += M
        weights[j - 1] += N
        weights[j] += O
    return KernelRow(k, h, weights)
