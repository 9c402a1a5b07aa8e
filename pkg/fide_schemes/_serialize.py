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
Helper functions for serializing solutions, reports and problems.
"""
import csv
import io
from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

from ._exceptions import ConfigError
from .analysis import BoundRow, ComparisonTable, ConvergenceReport
from .core import ProblemSpec
from .solver import SolveResult

TEXT_DIGITS = 6
CSV_DIGITS = 17


@dataclass(frozen=True)
class OutputTable:
    """A titled, rectangular table of cells.

    Args:
        title (str): caption printed above the table in text form
        headers (tuple[str]): column headers
        rows (tuple[tuple]): rows of cells; reals, integers, strings or ``None``
    """

    title: str
    headers: Tuple[str, ...]
    rows: Tuple[tuple, ...]

    def __post_init__(self):
        object.__setattr__(self, "headers", tuple(self.headers))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        width = len(self.headers)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(
                    f"Row {i} of table '{self.title}' has {len(row)} cells, expected {width}"
                )


def _cell(value, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return format(float(value), f".{digits}g")


def to_text(tables: Sequence[OutputTable]) -> str:
    """Render tables as aligned text with six significant digits."""
    blocks = []
    for table in tables:
        cells = [list(table.headers)]
        cells += [[_cell(v, TEXT_DIGITS) or "-" for v in row] for row in table.rows]
        widths = [max(len(r[c]) for r in cells) for c in range(len(table.headers))]
        lines = [table.title]
        lines.append("  ".join(h.rjust(w) for h, w in zip(cells[0], widths)))
        lines.append("  ".join("-" * w for w in widths))
        for row in cells[1:]:
            lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def to_csv(tables: Sequence[OutputTable]) -> str:
    """Render tables as comma-separated values with round-trip precision.

    A single table becomes a header line followed by its rows. Several tables with the
    same headers are merged behind a leading ``table`` column; otherwise every table is
    written as its own block, blocks separated by a blank line.
    """
    out = io.StringIO()
    if len(tables) == 1:
        groups = [(tables, False)]
    elif len({t.headers for t in tables}) == 1:
        groups = [(tables, True)]
    else:
        groups = [([t], True) for t in tables]
    for i, (group, labelled) in enumerate(groups):
        if i:
            out.write("\n")
        writer = csv.writer(out, lineterminator="\n")
        headers = list(group[0].headers)
        writer.writerow(["table"] + headers if labelled else headers)
        for table in group:
            for row in table.rows:
                cells = [_cell(v, CSV_DIGITS) for v in row]
                writer.writerow([table.title] + cells if labelled else cells)
    return out.getvalue()


def render(tables: Sequence[OutputTable], fmt: str = "text") -> str:
    """Render tables in ``"text"`` or ``"csv"`` format."""
    if fmt == "csv":
        return to_csv(tables)
    if fmt == "text":
        return to_text(tables)
    raise ValueError(f"Unknown output format {fmt!r}; expected 'csv' or 'text'")


def solution_table(result: SolveResult) -> OutputTable:
    """Nodes, numerical values and, if known, exact values and errors of one solve."""
    title = f"{result.problem_name}: scheme {result.scheme}, n = {result.mesh.n}"
    if result.errors is None:
        headers = ("x", "phi")
        rows = zip(result.nodes, result.values)
    else:
        headers = ("x", "phi", "exact", "error")
        exact = result.values + result.errors
        rows = zip(result.nodes, result.values, exact, result.errors)
    return OutputTable(title, headers, tuple(rows))


def comparison_table(table: ComparisonTable) -> OutputTable:
    """Side-by-side nodal values of several schemes."""
    headers: List[str] = ["x"]
    columns = [table.x]
    if table.exact is not None:
        headers.append("exact")
        columns.append(table.exact)
    for scheme, values in table.columns.items():
        headers.append(str(scheme))
        columns.append(values)
    title = f"{table.problem_name}: numerical solutions, n = {table.n}"
    return OutputTable(title, tuple(headers), tuple(zip(*columns)))


def convergence_table(report: ConvergenceReport) -> OutputTable:
    """MAE and convergence order of one scheme over a mesh ladder."""
    title = f"{report.problem_name}: scheme {report.scheme}, MAE and convergence order"
    rows = tuple((r.n, r.h, r.mae, r.co) for r in report.rows)
    return OutputTable(title, ("n", "h", "mae", "co"), rows)


def bound_table(rows: Sequence[BoundRow], problem_name: str, scheme) -> OutputTable:
    """Measured MAE next to the a priori error bound."""
    title = f"{problem_name}: scheme {scheme}, MAE against error bound at x = 1"
    cells = tuple((r.n, r.h, r.mae, r.bound, r.ratio) for r in rows)
    return OutputTable(title, ("n", "h", "mae", "bound", "ratio"), cells)


def problem_to_config(
    problem: ProblemSpec, expressions: Optional[Mapping[str, str]] = None
) -> str:
    """Serialize a problem into the ``key = value`` problem-file format.

    Args:
        problem (ProblemSpec): the problem; its ``expressions`` are used if present
        expressions (Mapping[str, str]): sources of ``f``, ``kernel`` and optionally ``exact``

    Returns:
        str: text accepted by :func:`~.problems.load_problem`
    """
    if expressions is None:
        expressions = getattr(problem, "expressions", None)
    if not expressions or "f" not in expressions or "kernel" not in expressions:
        raise ConfigError(
            f"Problem '{problem.name}' has no expression sources for 'f' and 'kernel'"
        )
    lines = [
        f"name = {problem.name}",
        f"alpha = {problem.alpha!r}",
        f"delta = {problem.delta!r}",
        f"f = {expressions['f']}",
        f"kernel = {expressions['kernel']}",
    ]
    if expressions.get("exact"):
        lines.append(f"exact = {expressions['exact']}")
    return "\n".join(lines) + "\n"
