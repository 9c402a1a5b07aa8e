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
Command-line interface ``fide-schemes``.

Subcommands:

* ``solve`` -- solve one problem with one scheme and print the nodal solution,
* ``convergence`` -- MAE and convergence order over a mesh ladder, one table per scheme,
* ``bounds`` -- measured MAE against the a priori error bound,
* ``compare`` -- nodal solutions of all schemes side by side,
* ``reproduce`` -- every comparison and convergence table for the built-in problems.

Exit status is 0 on success, 1 on usage or validation errors and 2 when the solver fails.
"""
import argparse
import logging
import sys
from typing import List, Optional, Sequence

from ._exceptions import FIDEError, SolverError
from ._serialize import (
    OutputTable,
    bound_table,
    comparison_table,
    convergence_table,
    render,
    solution_table,
)
from ._version import __version__
from .analysis import DEFAULT_LADDER, bound_study, compare_schemes, convergence_study
from .core import SchemeKind, resolve_rule
from .problems import BUILTINS, BuiltinProblem, get_problem, resolve
from .solver import solve

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2

SCHEME_CHOICES = [s.value for s in SchemeKind]


class UsageError(Exception):
    """Raised instead of exiting when the command line cannot be parsed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None


def _scheme_list(text: str) -> List[SchemeKind]:
    try:
        return [SchemeKind.parse(v) for v in text.split(",") if v.strip()]
    except FIDEError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _add_output(parser):
    parser.add_argument(
        "--format",
        dest="format",
        choices=["text", "csv"],
        default="text",
        help="Output format: aligned text (6 significant digits) or CSV (full precision)",
    )
    parser.add_argument("--out", dest="out", default=None, help="Write the output to this file")
    parser.add_argument(
        "--quad-order",
        dest="quad_order",
        type=int,
        default=None,
        help="Gauss-Legendre order for the kernel weights (default: $FIDE_QUAD_ORDER or 10)",
    )


def _add_problem(parser, help_text="Built-in problem (ex5.1, ex5.2, ex5.3) or problem file"):
    parser.add_argument("--problem", dest="problem", required=True, help=help_text)


def _add_ladder(parser):
    parser.add_argument(
        "--n-ladder",
        dest="n_ladder",
        type=_int_list,
        default=list(DEFAULT_LADDER),
        help="Comma-separated subinterval counts, each double the previous (default: 5,10,...,80)",
    )


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser of the ``fide-schemes`` command."""
    parser = _Parser(
        prog="fide-schemes",
        description="Solve linear fractional integro-differential equations on [0, 1].",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log progress to standard error (-v for INFO, -vv for DEBUG)",
    )
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    p = commands.add_parser("solve", help="Solve one problem with one scheme")
    _add_problem(p)
    p.add_argument("--scheme", dest="scheme", type=str.lower, choices=SCHEME_CHOICES, required=True)
    p.add_argument("--n", dest="n", type=int, required=True, help="Number of subintervals")
    _add_output(p)
    p.set_defaults(func=cmd_solve)

    p = commands.add_parser("convergence", help="MAE and convergence order over a mesh ladder")
    _add_problem(p)
    p.add_argument(
        "--schemes",
        "--scheme",
        dest="schemes",
        type=_scheme_list,
        default=list(SchemeKind),
        help="Comma-separated schemes (default: s1,s2,s3)",
    )
    _add_ladder(p)
    p.add_argument(
        "--workers", dest="workers", type=int, default=1, help="Threads solving meshes concurrently"
    )
    _add_output(p)
    p.set_defaults(func=cmd_convergence)

    p = commands.add_parser("bounds", help="Measured MAE against the a priori error bound")
    _add_problem(p, "Built-in problem (ex5.1, ex5.2)")
    p.add_argument("--scheme", dest="scheme", type=str.lower, choices=SCHEME_CHOICES, required=True)
    _add_ladder(p)
    _add_output(p)
    p.set_defaults(func=cmd_bounds)

    p = commands.add_parser("compare", help="Nodal solutions of several schemes side by side")
    _add_problem(p)
    p.add_argument("--n", dest="n", type=int, required=True, help="Number of subintervals")
    p.add_argument(
        "--schemes",
        dest="schemes",
        type=_scheme_list,
        default=list(SchemeKind),
        help="Comma-separated schemes (default: s1,s2,s3)",
    )
    p.add_argument("--every", dest="every", type=int, default=1, help="Print every k-th node")
    _add_output(p)
    p.set_defaults(func=cmd_compare)

    p = commands.add_parser("reproduce", help="All tables of the numerical study")
    p.add_argument(
        "--problem",
        dest="problem",
        default=None,
        help="Restrict to one built-in problem (default: all)",
    )
    _add_ladder(p)
    _add_output(p)
    p.set_defaults(func=cmd_reproduce)
    return parser


def _emit(tables: Sequence[OutputTable], args) -> int:
    text = render(tables, args.format)
    if args.out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        logger.info("wrote %d table(s) to %s", len(tables), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    """Solve one problem and print ``x``, the numerical solution and, if known, the error."""
    problem = resolve(args.problem)
    rule = resolve_rule(quad_order=args.quad_order)
    result = solve(problem, args.scheme, args.n, rule)
    return _emit([solution_table(result)], args)


def cmd_convergence(args) -> int:
    """Print one MAE/convergence-order table per scheme."""
    problem = resolve(args.problem)
    rule = resolve_rule(quad_order=args.quad_order)
    tables = []
    for scheme in args.schemes:
        report = convergence_study(problem, scheme, args.n_ladder, rule, max_workers=args.workers)
        tables.append(convergence_table(report))
    return _emit(tables, args)


def cmd_bounds(args) -> int:
    """Print measured MAE, error bound and their ratio for a built-in problem."""
    problem = resolve(args.problem)
    if not isinstance(problem, BuiltinProblem):
        raise UsageError("bounds: error bounds need a built-in problem with regularity data")
    rule = resolve_rule(quad_order=args.quad_order)
    rows = bound_study(problem, args.scheme, args.n_ladder, rule)
    return _emit([bound_table(rows, problem.name, SchemeKind.parse(args.scheme))], args)


def cmd_compare(args) -> int:
    """Print the nodal solutions of several schemes side by side."""
    problem = resolve(args.problem)
    rule = resolve_rule(quad_order=args.quad_order)
    table = compare_schemes(problem, args.n, schemes=args.schemes, rule=rule, every=args.every)
    return _emit([comparison_table(table)], args)


def cmd_reproduce(args) -> int:
    """Print the n = 5 and n = 10 comparison tables and all convergence tables."""
    names = list(BUILTINS) if args.problem is None else [get_problem(args.problem).name]
    rule = resolve_rule(quad_order=args.quad_order)
    tables = []
    for name in names:
        problem = get_problem(name)
        for n in (5, 10):
            table = compare_schemes(problem, n, rule=rule, every=max(1, n // 5))
            tables.append(comparison_table(table))
        for scheme in SchemeKind:
            report = convergence_study(problem, scheme, args.n_ladder, rule)
            tables.append(convergence_table(report))
    return _emit(tables, args)


def _configure_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("fide_schemes").setLevel(level)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the ``fide-schemes`` command; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except SolverError as e:
        print(f"error: {e.kind}: {e} (at k={e.k})", file=sys.stderr)
        return EXIT_SOLVER
    except FIDEError as e:
        print(f"error: {e.kind}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
