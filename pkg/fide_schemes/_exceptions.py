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
Exception hierarchy shared by all FIDE-Schemes modules.

Every error raised on purpose by the package derives from :class:`FIDEError`, so callers
can catch a single type. Validation errors additionally derive from :class:`ValueError` and
numerical failures of the solver from :class:`ArithmeticError`.
"""
from typing import Optional


class FIDEError(Exception):
    """Base class of all FIDE-Schemes errors."""

    @property
    def kind(self) -> str:
        """str: short name of the error kind, as reported by the command-line interface"""
        return type(self).__name__


class DomainError(FIDEError, ValueError):
    """An argument lies outside the domain of the function it was passed to."""


class QuadratureError(FIDEError, ValueError):
    """A quadrature rule was requested with an unsupported order, or sampled a non-finite value."""


class MissingExactSolution(FIDEError, ValueError):
    """An error metric was requested for a problem without a known exact solution."""


class SolverError(FIDEError, ArithmeticError):
    """Forward substitution could not produce a finite solution.

    Args:
        message (str): human readable description
        k (int): index of the node at which the failure happened
    """

    def __init__(self, message: str, k: int):
        super().__init__(message)
        self.k = k


class NearSingularPivot(SolverError):
    """The diagonal entry of an assembled row is too small to divide by."""


class NonFiniteValue(SolverError):
    """A solution value or right-hand side became infinite or NaN."""


class ExprError(FIDEError, ValueError):
    """Base class of expression-language errors.

    Args:
        message (str): human readable description
        offset (int or None): byte offset into the source text, if known
    """

    def __init__(self, message: str, offset: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.offset = offset
        self.field: Optional[str] = None

    def in_field(self, field: str) -> "ExprError":
        """Tag the error with the name of the configuration field it came from."""
        self.field = field
        return self

    def __str__(self):
        text = self.message
        if self.offset is not None:
            text = f"{text} (at offset {self.offset})"
        if self.field is not None:
            text = f"field '{self.field}': {text}"
        return text


class ExprSyntaxError(ExprError):
    """The source text does not follow the expression grammar."""

    def __init__(self, message: str, offset: int, expected: Optional[str] = None):
        if expected:
            message = f"{message}; expected {expected}"
        super().__init__(message, offset)
        self.expected = expected


class UnknownIdentifier(ExprError):
    """A name is neither an allowed variable, a constant, nor a registered function."""

    def __init__(self, name: str, offset: Optional[int] = None):
        super().__init__(f"unknown identifier '{name}'", offset)
        self.name = name


class ArityMismatch(ExprError):
    """A function was called with the wrong number of arguments."""

    def __init__(self, name: str, expected: int, got: int, offset: Optional[int] = None):
        super().__init__(
            f"function '{name}' takes {expected} argument(s) but {got} were given", offset
        )
        self.name = name
        self.expected = expected
        self.got = got


class EvalError(ExprError):
    """Evaluation of an expression left the real domain.

    Args:
        message (str): human readable description
        node: the expression node whose evaluation failed
    """

    def __init__(self, message: str, node=None):
        super().__init__(message, getattr(node, "offset", None))
        self.node = node


class ConfigError(FIDEError, ValueError):
    """A problem configuration document is invalid."""


class MissingField(ConfigError):
    """A required key is absent from a problem configuration document."""

    def __init__(self, field: str):
        super().__init__(f"missing required field '{field}'")
        self.field = field


class OutOfRange(ConfigError):
    """A numeric configuration value lies outside its allowed range."""

    def __init__(self, field: str, value: float, allowed: str):
        super().__init__(f"field '{field}' = {value!r} is out of range; expected {allowed}")
        self.field = field
        self.value = value
