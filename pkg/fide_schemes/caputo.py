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
Discretization weights of the Caputo derivative

.. math:: D^\alpha \varphi(x_k) = \frac{1}{\Gamma(1 - \alpha)}
    \int_0^{x_k} (x_k - \tau)^{-\alpha} \varphi'(\tau) d\tau

on a uniform mesh. The linear row replaces :math:`\varphi` by its piecewise-linear
interpolant (the L1 scheme). The quadratic row uses the linear interpolant on the first
subinterval and, on every later subinterval :math:`[x_{i-1}, x_i]`, the quadratic through
:math:`x_{i-2}, x_{i-1}, x_i`.

Both rows are returned in node order, so that ``row.weights[j]`` multiplies
:math:`\varphi_j`, and share the prefactor :math:`h^{-\alpha} / \Gamma(2 - \alpha)`.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ._exceptions import DomainError
from .core import gamma

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CaputoRow:
    """One row of Caputo-derivative weights.

    Args:
        k (int): node index the row belongs to
        alpha (float): Caputo order
        h (float): step size
        weights (array[float]): ``k + 1`` weights, ``weights[j]`` multiplies ``phi_j``
    """

    k: int
    alpha: float
    h: float
    weights: np.ndarray

    def __post_init__(self):
        if self.weights.shape != (self.k + 1,):
            raise ValueError(
                f"A Caputo row for k={self.k} needs {self.k + 1} weights, got {self.weights.shape}"
            )
        self.weights.setflags(write=False)

    def __len__(self):
        return self.k + 1


def _check(k: int, alpha: float, h: float):
    if k < 1:
        raise DomainError(f"Caputo rows start at k=1, got k={k}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"Caputo order alpha must lie in (0, 1), got {alpha!r}")
    if not h > 0.0:
        raise DomainError(f"Step size must be positive, got h={h!r}")


def _power_difference(m, exponent: float) -> np.ndarray:
    r"""Evaluate :math:`(m + 1)^e - m^e` without cancellation for large ``m``.

    Uses :math:`m^e \operatorname{expm1}(e \log(1 + 1/m))` for ``m > 0`` and ``1`` at ``m = 0``.
    """
    m = np.asarray(m, dtype=np.float64)
    safe = np.where(m > 0, m, 1.0)
    diff = safe**exponent * np.expm1(exponent * np.log1p(1.0 / safe))
    return np.where(m > 0, diff, 1.0)


def _scale(alpha: float, h: float) -> Tuple[float, float]:
    return 1.0 / gamma(2.0 - alpha), h ** (-alpha)


def quad_coeff_a(m: int, alpha: float) -> float:
    r"""First-interval coefficient :math:`a_m = (m + 1)^{1 - \alpha} - m^{1 - \alpha}`.

    Args:
        m (int): distance in steps from the evaluation node, ``m >= 0``
        alpha (float): Caputo order

    Returns:
        float: a positive coefficient, strictly decreasing in ``m``
    """
    if m < 0:
        raise DomainError(f"Coefficient index must be non-negative, got m={m}")
    return float(_power_difference(m, 1.0 - alpha))


def _bcd(m, alpha: float):
    p1 = _power_difference(m, 1.0 - alpha)
    p2 = _power_difference(m, 2.0 - alpha)
    ratio = (1.0 - alpha) / (2.0 - alpha)
    m = np.asarray(m, dtype=np.float64)
    b = 0.5 * (2.0 * m + 1.0) * p1 - ratio * p2
    c = -2.0 * (m + 1.0) * p1 + 2.0 * ratio * p2
    d = 0.5 * (2.0 * m + 3.0) * p1 - ratio * p2
    return b, c, d


def quad_coeffs_BCD(m: int, alpha: float) -> Tuple[float, float, float]:
    r"""Quadratic-interpolant coefficients :math:`B(m), C(m), D(m)`.

    They weight :math:`\varphi_{i-2}, \varphi_{i-1}, \varphi_i` on the subinterval
    :math:`[x_{i-1}, x_i]` lying ``m = k - i`` steps left of the evaluation node :math:`x_k`,
    in units of :math:`h^{-\alpha} / \Gamma(2 - \alpha)`. The differences of powers are
    regrouped so that :math:`B + C + D = 0` holds to rounding for every ``m``.

    Args:
        m (int): distance in steps, ``m >= 0``
        alpha (float): Caputo order

    Returns:
        tuple[float, float, float]: the coefficients ``(B, C, D)``
    """
    if m < 0:
        raise DomainError(f"Coefficient index must be non-negative, got m={m}")
    b, c, d = _bcd(m, alpha)
    return float(b), float(c), float(d)


def linear_caputo_row(k: int, alpha: float, h: float) -> CaputoRow:
    """Caputo weights of the piecewise-linear interpolant at node ``k``.

    Args:
        k (int): node index, ``k >= 1``
        alpha (float): Caputo order in ``(0, 1)``
        h (float): step size

    Returns:
        CaputoRow: weights in node order
    """
    _check(k, alpha, h)
    inv_gamma, h_power = _scale(alpha, h)
    # diff[m] = (m + 1)^(1-a) - m^(1-a), m = k - j
    diff = _power_difference(np.arange(k, dtype=np.float64), 1.0 - alpha)
    s = np.empty(k + 1)
    s[k] = 1.0
    s[0] = -diff[k - 1]
    if k > 1:
        m = k - np.arange(1, k)
        s[1:k] = diff[m] - diff[m - 1]
    weights = (s * inv_gamma) * h_power
    return CaputoRow(k, alpha, h, weights)


def quadratic_caputo_row(k: int, alpha: float, h: float) -> CaputoRow:
    """Caputo weights of the piecewise-quadratic interpolant at node ``k``.

    The coefficients ``s[j]`` follow the case tables for ``k = 1``, ``2``, ``3`` and
    ``k >= 4``. ``s[j]`` multiplies ``phi_{k-j}`` and is reversed into node order on return.

    Args:
        k (int): node index, ``k >= 1``
        alpha (float): Caputo order in ``(0, 1)``
        h (float): step size

    Returns:
        CaputoRow: weights in node order
    """
    _check(k, alpha, h)
    inv_gamma, h_power = _scale(alpha, h)
    a_last = quad_coeff_a(k - 1, alpha)
    s = np.empty(k + 1)
    if k == 1:
        s[0] = a_last
        s[1] = -a_last
    else:
        B, C, D = _bcd(np.arange(k - 1, dtype=np.float64), alpha)
        if k == 2:
            s[0] = D[0]
            s[1] = C[0] + a_last
            s[2] = B[0] - a_last
        elif k == 3:
            s[0] = D[0]
            s[1] = C[0] + D[1]
            s[2] = B[0] + C[1] + a_last
            s[3] = B[1] - a_last
        else:
            j = np.arange(2, k - 1)
            s[0] = D[0]
            s[1] = C[0] + D[1]
            s[2 : k - 1] = B[j - 2] + C[j - 1] + D[j]
            s[k - 1] = B[k - 3] + C[k - 2] + a_last
            s[k] = B[k - 2] - a_last
    weights = (s[::-1] * inv_gamma) * h_power
    return CaputoRow(k, alpha, h, np.ascontiguousarray(weights))


def scatter_quadratic_caputo_row(k: int, alpha: float, h: float) -> CaputoRow:
    """Assemble the quadratic Caputo row by looping over subintervals.

    Every subinterval scatters its linear or quadratic contribution into the nodes it
    interpolates. The result agrees with :func:`quadratic_caputo_row` and is used to
    check the case tables.
    """
    _check(k, alpha, h)
    inv_gamma, h_power = _scale(alpha, h)
    w = np.zeros(k + 1)
    a_last = quad_coeff_a(k - 1, alpha)
    w[0] -= a_last
    w[1] += a_last
    for i in range(2, k + 1):
        B, C, D = quad_coeffs_BCD(k - i, alpha)
        w[i - 2] += B
        w[i - 1] += C
        w[i] += D
    return CaputoRow(k, alpha, h, (w * inv_gamma) * h_power)


def apply_caputo(row: CaputoRow, values) -> float:
    """Apply a Caputo row to nodal values ``phi_0, ..., phi_k``.

    Args:
        row (CaputoRow): weights for node ``k``
        values (array[float]): ``k + 1`` nodal values

    Returns:
        float: the discrete Caputo derivative at ``x_k``
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != row.weights.shape:
        raise ValueError(
            f"Expected {len(row)} nodal values for a row at k={row.k}, got {values.shape[0]}"
        )
    return float(np.dot(row.weights, values))
