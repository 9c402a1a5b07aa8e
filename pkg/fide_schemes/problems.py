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
Built-in test problems and the loader for user-defined problem files.

A problem file is a UTF-8 ``key = value`` document with ``#`` comments::

    # fractional order 1/2, quadratic exact solution
    name   = quadratic
    alpha  = 1/2
    delta  = 0
    f      = ((8/3)*x^(3/2) - 2*x^(1/2))/sqrt(pi) - (3*x^5 - 4*x^4)/12
    kernel = x*t
    exact  = x^2 - x

``f`` and ``exact`` are expressions in ``x``; ``kernel`` is an expression in ``x`` and ``t``.
``alpha`` and ``delta`` may be constant expressions such as ``5/6``.
"""
import configparser
import logging
import math
import os
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Dict, Mapping, Optional, Union

from ._exceptions import ConfigError, ExprError, MissingField, OutOfRange
from .core import UNBOUNDED, ProblemSpec, Regularity, gamma, warn
from .exprlang import evaluate, kernel_function, parse, scalar_function

logger = logging.getLogger(__name__)

Maximum = Union[float, Regularity]

REQUIRED_FIELDS = ("alpha", "delta", "f", "kernel")
OPTIONAL_FIELDS = ("name", "exact")
_SECTION = "problem"


@dataclass(frozen=True, eq=False)
class BuiltinProblem(ProblemSpec):
    r"""A problem with known regularity data for the error bounds.

    Args:
        max2_first (float or Regularity): :math:`\max |\varphi''|` on the first subinterval
        max2 (float or Regularity): :math:`\max |\varphi''|` on :math:`[0, 1]`
        max3 (float or Regularity): :math:`\max |\varphi'''|` on :math:`[0, 1]`
        kernel_bound (float): :math:`M \geq \max |K(x, \tau)|` on the unit square
        expressions (Mapping[str, str]): sources of ``f``, ``kernel`` and ``exact``
    """

    max2_first: Maximum = 0.0
    max2: Maximum = 0.0
    max3: Maximum = 0.0
    kernel_bound: float = 0.0
    expressions: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "expressions", MappingProxyType(dict(self.expressions)))

    @property
    def bounded(self) -> bool:
        """bool: whether every derivative maximum is finite"""
        return all(m is not UNBOUNDED for m in (self.max2_first, self.max2, self.max3))


_SQRT_PI = math.sqrt(math.pi)


def example_5_1() -> BuiltinProblem:
    """Order 1/2 with kernel ``x t`` and exact solution ``x^2 - x``."""

    def f(x):
        return ((8.0 / 3.0) * x**1.5 - 2.0 * math.sqrt(x)) / _SQRT_PI - (
            3.0 * x**5 - 4.0 * x**4
        ) / 12.0

    return BuiltinProblem(
        alpha=0.5,
        delta=0.0,
        f=f,
        kernel=lambda x, t: x * t,
        exact=lambda x: x * x - x,
        name="ex5.1",
        max2_first=2.0,
        max2=2.0,
        max3=0.0,
        kernel_bound=1.0,
        expressions={
            "f": "((8/3)*x^(3/2) - 2*x^(1/2))/sqrt(pi) - (3*x^5 - 4*x^4)/12",
            "kernel": "x*t",
            "exact": "x^2 - x",
        },
    )


def example_5_2() -> BuiltinProblem:
    """Order 5/6 with kernel ``x e^t`` and exact solution ``x - x^3``."""
    g76 = gamma(7.0 / 6.0)
    g196 = gamma(19.0 / 6.0)

    def f(x):
        caputo = x ** (1.0 / 6.0) / g76 - 6.0 * x ** (13.0 / 6.0) / g196
        volterra = x * math.exp(x) * (5.0 - 5.0 * x + 3.0 * x**2 - x**3) - 5.0 * x
        return caputo - volterra

    return BuiltinProblem(
        alpha=5.0 / 6.0,
        delta=0.0,
        f=f,
        kernel=lambda x, t: x * math.exp(t),
        exact=lambda x: x - x**3,
        name="ex5.2",
        max2_first=6.0,
        max2=6.0,
        max3=6.0,
        kernel_bound=math.e,
        expressions={
            "f": "-(3/91)*gamma(5/6)*x^(1/6)*(-91 + 216*x^2)/pi + 5*x"
            " - x*exp(x)*(5 - 5*x + 3*x^2 - x^3)",
            "kernel": "x*exp(t)",
            "exact": "x - x^3",
        },
    )


def example_5_3() -> BuiltinProblem:
    """Order 1/3 with kernel ``x t + x^2 t^2`` and exact solution ``x^(3/2)``.

    The second derivative of the exact solution is unbounded at zero, so the error
    bounds do not apply.
    """
    coeff = 3.0 * _SQRT_PI / (4.0 * gamma(13.0 / 6.0))

    def f(x):
        return coeff * x ** (7.0 / 6.0) - (2.0 / 63.0) * x**4.5 * (9.0 + 7.0 * x * x)

    return BuiltinProblem(
        alpha=1.0 / 3.0,
        delta=0.0,
        f=f,
        kernel=lambda x, t: x * t + x * x * t * t,
        exact=lambda x: x**1.5,
        name="ex5.3",
        max2_first=UNBOUNDED,
        max2=UNBOUNDED,
        max3=UNBOUNDED,
        kernel_bound=2.0,
        expressions={
            "f": "3*sqrt(pi)*x^(7/6)/(4*gamma(13/6)) - (2/63)*x^(9/2)*(9 + 7*x^2)",
            "kernel": "x*t + x^2*t^2",
            "exact": "x^(3/2)",
        },
    )


BUILTINS: Dict[str, Callable[[], BuiltinProblem]] = {
    "ex5.1": example_5_1,
    "ex5.2": example_5_2,
    "ex5.3": example_5_3,
}


def get_problem(name: str) -> BuiltinProblem:
    """Look up a built-in problem by name (``ex5.1``, ``ex5.2`` or ``ex5.3``)."""
    try:
        return BUILTINS[name.strip().lower()]()
    except KeyError:
        valid = ", ".join(BUILTINS)
        raise ConfigError(f"Unknown built-in problem {name!r}; valid names are: {valid}") from None


def _read_fields(text: str) -> Dict[str, str]:
    parser = configparser.ConfigParser(
        interpolation=None,
        delimiters=("=",),
        comment_prefixes=("#",),
        inline_comment_prefixes=None,
        empty_lines_in_values=False,
    )
    try:
        parser.read_string(f"[{_SECTION}]\n{text}")
    except configparser.Error as e:
        raise ConfigError(f"Malformed problem file: {e.message}") from None
    if parser.sections() != [_SECTION]:
        raise ConfigError("Problem files must not contain section headers")
    fields = dict(parser[_SECTION])
    unknown = sorted(set(fields) - set(REQUIRED_FIELDS) - set(OPTIONAL_FIELDS))
    if unknown:
        raise ConfigError(f"Unknown field(s) {', '.join(unknown)} in problem file")
    for name in REQUIRED_FIELDS:
        if name not in fields or fields[name].strip() == "":
            raise MissingField(name)
    return fields


def _parse_field(fields: Mapping[str, str], name: str, variables):
    try:
        return parse(fields[name], variables)
    except ExprError as e:
        raise e.in_field(name)


def _constant(fields: Mapping[str, str], name: str) -> float:
    expr = _parse_field(fields, name, ())
    try:
        return evaluate(expr)
    except ExprError as e:
        raise e.in_field(name)


def load_problem(text: str, *, name: Optional[str] = None) -> ProblemSpec:
    """Build a :class:`~.ProblemSpec` from the text of a problem file.

    Args:
        text (str): ``key = value`` document
        name (str): fallback name when the document has no ``name`` field

    Returns:
        ProblemSpec: the validated problem

    Raises:
        MissingField: if a required field is absent
        OutOfRange: if ``alpha`` is not in ``(0, 1)``
        ExprError: if an expression is malformed, tagged with its field name
    """
    fields = _read_fields(text)
    alpha = _constant(fields, "alpha")
    if not 0.0 < alpha < 1.0:
        raise OutOfRange("alpha", alpha, "0 < alpha < 1")
    delta = _constant(fields, "delta")

    f = scalar_function(_parse_field(fields, "f", ("x",)), "f")
    kernel = kernel_function(_parse_field(fields, "kernel", ("x", "t")), "kernel")
    exact = None
    if fields.get("exact", "").strip():
        exact = scalar_function(_parse_field(fields, "exact", ("x",)), "exact")

    problem = ProblemSpec(
        alpha=alpha,
        delta=delta,
        f=f,
        kernel=kernel,
        exact=exact,
        name=fields.get("name", "").strip() or name or "custom",
    )
    if exact is not None:
        try:
            mismatch = abs(exact(0.0) - delta)
        except ExprError as e:
            raise e.in_field("exact")
        if mismatch > 1e-12:
            warn(
                f"Exact solution of '{problem.name}' gives {exact(0.0)!r} at x=0 but delta is "
                f"{delta!r}; nodal errors will include the mismatch.",
                UserWarning,
            )
    logger.debug("loaded problem %s with alpha=%.6g", problem.name, alpha)
    return problem


def resolve(spec_or_path: str) -> ProblemSpec:
    """Return the built-in problem named ``spec_or_path``, or load it as a problem file."""
    if spec_or_path.strip().lower() in BUILTINS:
        return get_problem(spec_or_path)
    if not os.path.isfile(spec_or_path):
        valid = ", ".join(BUILTINS)
        raise ConfigError(
            f"{spec_or_path!r} is neither a built-in problem ({valid}) nor a readable file"
        )
    with open(spec_or_path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stem = os.path.splitext(os.path.basename(spec_or_path))[0]
    return load_problem(text, name=stem)
