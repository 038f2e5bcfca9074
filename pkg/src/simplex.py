"""Exact rational simplex on a compact (dictionary) tableau.

Only nonbasic columns are stored: row i reads

    x_{basic[i]} = b[i] - sum_j A[i][j] * x_{nonbasic[j]}

and the objective z = z0 + sum_j c[j] * x_{nonbasic[j]} is maximised.
Variables 0..n-1 are the structural ones, n..n+m-1 the row slacks. Pivots
follow Bland's rule, so degenerate LPs terminate. Infeasible origins are
handled by a single auxiliary variable in phase one.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .errors import LPError, PreconditionError
from .logger import get_logger

logger = get_logger(__name__)

Relation = Literal["<=", ">=", "=="]
Status = Literal["optimal", "infeasible", "unbounded"]


@dataclass(frozen=True)
class LinearRow:
    coeffs: tuple[tuple[int, Fraction], ...]
    rel: Relation
    rhs: Fraction


@dataclass
class LinearProgram:
    """maximise objective . x subject to rows, x >= 0."""

    num_vars: int
    objective: dict[int, Fraction]
    rows: list[LinearRow] = field(default_factory=list)

    def add_row(
        self,
        coeffs: dict[int, Fraction] | Sequence[tuple[int, Fraction]],
        rel: Relation,
        rhs: Fraction | int,
    ) -> None:
        items = tuple(sorted(dict(coeffs).items()))
        if any(not 0 <= j < self.num_vars for j, _ in items):
            raise PreconditionError(
                f"row references a variable outside [0, {self.num_vars})"
            )
        self.rows.append(LinearRow(items, rel, Fraction(rhs)))


@dataclass
class LPSolution:
    status: Status
    value: Fraction | None = None
    x: list[Fraction] = field(default_factory=list)
    duals: list[Fraction] = field(default_factory=list)
    pivots: int = 0


class _Tableau:
    def __init__(self, A: list[list[Fraction]], b: list[Fraction], num_vars: int):
        self.m = len(A)
        self.A = A
        self.b = b
        self.nonbasic = list(range(num_vars))
        self.basic = list(range(num_vars, num_vars + self.m))
        self.c: list[Fraction] = [Fraction(0)] * num_vars
        self.z0 = Fraction(0)
        self.pivots = 0

    def pivot(self, i: int, j: int) -> None:
        row = self.A[i]
        piv = row[j]
        width = len(row)
        new_row = [v / piv for v in row]
        new_row[j] = 1 / piv
        self.b[i] = self.b[i] / piv
        self.A[i] = new_row
        for k in range(self.m):
            if k == i:
                continue
            other = self.A[k]
            f = other[j]
            if f == 0:
                continue
            for col in range(width):
                if col != j and new_row[col] != 0:
                    other[col] -= f * new_row[col]
            other[j] = -f / piv
            self.b[k] -= f * self.b[i]
        f = self.c[j]
        if f != 0:
            for col in range(width):
                if col != j and new_row[col] != 0:
                    self.c[col] -= f * new_row[col]
            self.c[j] = -f / piv
            self.z0 += f * self.b[i]
        self.basic[i], self.nonbasic[j] = self.nonbasic[j], self.basic[i]
        self.pivots += 1

    def primal(self, max_pivots: int) -> Status:
        while True:
            entering = [(self.nonbasic[j], j) for j, v in enumerate(self.c) if v > 0]
            if not entering:
                return "optimal"
            _, j = min(entering)
            ratios = [
                (self.b[i] / self.A[i][j], self.basic[i], i)
                for i in range(self.m)
                if self.A[i][j] > 0
            ]
            if not ratios:
                return "unbounded"
            _, _, i = min(ratios)
            if self.pivots >= max_pivots:
                raise LPError(f"simplex exceeded {max_pivots} pivots")
            self.pivot(i, j)


def _standard_rows(
    lp: LinearProgram,
) -> tuple[list[list[Fraction]], list[Fraction], list[tuple[int, int]]]:
    """Rows as a.x <= b, with (input row, sign) bookkeeping for duals."""
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    origin: list[tuple[int, int]] = []
    for index, row in enumerate(lp.rows):
        dense = [Fraction(0)] * lp.num_vars
        for j, v in row.coeffs:
            dense[j] += v
        signs = {"<=": (1,), ">=": (-1,), "==": (1, -1)}[row.rel]
        for sign in signs:
            A.append([sign * v for v in dense])
            b.append(sign * row.rhs)
            origin.append((index, sign))
    return A, b, origin


def solve_exact(lp: LinearProgram, max_pivots: int = 200_000) -> LPSolution:
    """Optimal vertex, value and row duals of ``lp`` in exact arithmetic."""
    A, b, origin = _standard_rows(lp)
    n = lp.num_vars
    m = len(A)
    tab = _Tableau(A, b, n)

    if m and min(b) < 0:
        aux = n + m
        for row in tab.A:
            row.append(Fraction(-1))
        tab.nonbasic.append(aux)
        tab.c = [Fraction(0)] * n + [Fraction(-1)]
        worst = min(range(m), key=lambda i: (tab.b[i], i))
        tab.pivot(worst, n)
        tab.primal(max_pivots)
        if tab.z0 < 0:
            logger.debug(f"phase one ended at {tab.z0}: infeasible")
            return LPSolution("infeasible", pivots=tab.pivots)
        if aux in tab.basic:
            i = tab.basic.index(aux)
            nonzero = [
                j
                for j, v in enumerate(tab.A[i])
                if v != 0 and tab.nonbasic[j] != aux
            ]
            if nonzero:
                tab.pivot(i, nonzero[0])
            else:
                # redundant row: the auxiliary is identically zero there
                del tab.A[i], tab.b[i], tab.basic[i]
                tab.m -= 1
        j = tab.nonbasic.index(aux)
        for row in tab.A:
            del row[j]
        del tab.nonbasic[j]

    c = [Fraction(0)] * n
    for j, v in lp.objective.items():
        c[j] += v
    tab.z0 = Fraction(0)
    tab.c = [c[v] if v < n else Fraction(0) for v in tab.nonbasic]
    for i, v in enumerate(tab.basic):
        if v < n and c[v] != 0:
            tab.z0 += c[v] * tab.b[i]
            for j in range(len(tab.c)):
                tab.c[j] -= c[v] * tab.A[i][j]

    status = tab.primal(max_pivots)
    if status == "unbounded":
        return LPSolution("unbounded", pivots=tab.pivots)

    x = [Fraction(0)] * n
    for i, v in enumerate(tab.basic):
        if v < n:
            x[v] = tab.b[i]
    slack_dual = [Fraction(0)] * m
    for j, v in enumerate(tab.nonbasic):
        if v >= n:
            slack_dual[v - n] = -tab.c[j]
    duals = [Fraction(0)] * len(lp.rows)
    for k, (index, sign) in enumerate(origin):
        duals[index] += sign * slack_dual[k]
    logger.debug(f"simplex optimum {tab.z0} after {tab.pivots} pivots")
    return LPSolution("optimal", tab.z0, x, duals, tab.pivots)
