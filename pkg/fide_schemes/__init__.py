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
"""Top level FIDE-Schemes module."""
import logging

from ._exceptions import (
    ArityMismatch,
    ConfigError,
    DomainError,
    EvalError,
    ExprError,
    ExprSyntaxError,
    FIDEError,
    MissingExactSolution,
    MissingField,
    NearSingularPivot,
    NonFiniteValue,
    OutOfRange,
    QuadratureError,
    SolverError,
    UnknownIdentifier,
)
from ._version import __version__
from .analysis import (
    BoundInputs,
    BoundRow,
    ComparisonTable,
    ConvergenceReport,
    ConvergenceRow,
    bound_for,
    bound_inputs_for,
    bound_s1,
    bound_s2,
    bound_s3,
    bound_study,
    compare_schemes,
    convergence_order,
    convergence_study,
    mae,
)
from .caputo import CaputoRow, apply_caputo, linear_caputo_row, quadratic_caputo_row
from .core import (
    UNBOUNDED,
    Mesh,
    ProblemSpec,
    QuadratureRule,
    SchemeKind,
    gamma,
    gauss_legendre,
    integrate_01,
)
from .kernel_weights import KernelRow, linear_kernel_row, quadratic_kernel_row
from .problems import (
    BuiltinProblem,
    example_5_1,
    example_5_2,
    example_5_3,
    get_problem,
    load_problem,
)
from .solver import SolveResult, assemble_row, residual, solve

logging.getLogger(__name__).addHandler(logging.NullHandler())
