"""rho-sat: the best bound any weakly H-saturated 1-polymatroid can give.

The optimisation runs over set functions rho on the edge subsets of K_n^r:
rho(empty) = 0, rho({x}) <= 1, elementary monotonicity
rho(A) <= rho(A + x), elementary submodularity
rho(A + x) + rho(A + y) >= rho(A + x + y) + rho(A), and for every copy H'
of a pattern and every edge e of it rho(H' - e) >= rho(H'). The elementary
rows imply the full axioms: submodularity over all pairs follows by adding
elementary rows along a chain from A cap B to B, and 0 <= rho(A) <= |A|
follows from monotonicity and the singleton caps by induction on |A|.

The LP is invariant under vertex permutations, so averaging an optimum over
S_n stays optimal. The exact solver therefore works with one variable per
orbit of edge subsets and expands the result back to every subset.
"""

import itertools
import math
import random
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal

from .config import DEFAULT_CAPS, Caps
from .count_polymatroid import (
    AxiomCheck,
    CountParams,
    CountPolymatroid,
    check_polymatroid_axioms,
)
from .errors import CapExceededError, LPError, PreconditionError
from .hypergraph import (
    EdgeIndex,
    Hypergraph,
    clique,
    complete_edge_index,
    copies_in_clique,
    iter_bits,
    permute_mask,
    sparseness,
)
from .logger import get_logger
from .reports import format_rational
from .simplex import LinearProgram, solve_exact
from .wsat_engine import Family, as_family, wsat_exact

logger = get_logger(__name__)

RowTag = Literal[
    "empty-zero",
    "singleton-cap",
    "elementary-monotone",
    "elementary-submodular",
    "saturation",
]

FLOAT_TOLERANCE = 1e-7


@dataclass(frozen=True)
class LPRow:
    """sum coeff * rho(subset) rel rhs."""

    lhs: tuple[tuple[int, int], ...]
    rel: Literal["<=", ">=", "=="]
    rhs: int
    tag: RowTag

    def holds(self, values: list[Fraction] | dict[int, Fraction]) -> bool:
        total = sum((c * values[s] for s, c in self.lhs), Fraction(0))
        if self.rel == "<=":
            return total <= self.rhs
        if self.rel == ">=":
            return total >= self.rhs
        return total == self.rhs

    def to_dict(self) -> dict[str, Any]:
        return {
            "lhs": [list(t) for t in self.lhs],
            "rel": self.rel,
            "rhs": self.rhs,
            "tag": self.tag,
        }


@dataclass
class SetFunctionLP:
    """The rho-sat LP over every subset of the m edges of K_n^r.

    Rows are generated on demand; ``row_count`` is known in closed form.
    """

    n: int
    r: int
    family: Family
    copy_masks: tuple[int, ...]
    copy_sizes: tuple[int, ...]

    @property
    def m(self) -> int:
        return math.comb(self.n, self.r)

    @property
    def num_variables(self) -> int:
        return 1 << self.m

    @property
    def objective(self) -> int:
        return (1 << self.m) - 1

    @property
    def row_count(self) -> int:
        m = self.m
        elementary = m * (1 << (m - 1)) if m else 0
        submodular = math.comb(m, 2) * (1 << (m - 2)) if m >= 2 else 0
        return 1 + m + elementary + submodular + sum(self.copy_sizes)

    def iter_rows(self) -> Iterator[LPRow]:
        m = self.m
        full = (1 << m) - 1
        yield LPRow(((0, 1),), "==", 0, "empty-zero")
        for x in range(m):
            yield LPRow(((1 << x, 1),), "<=", 1, "singleton-cap")
        for a in range(full + 1):
            for x in range(m):
                bit = 1 << x
                if not a & bit:
                    yield LPRow(((a, 1), (a | bit, -1)), "<=", 0, "elementary-monotone")
        for a in range(full + 1):
            outside = [x for x in range(m) if not a >> x & 1]
            for x, y in itertools.combinations(outside, 2):
                ax, ay = a | 1 << x, a | 1 << y
                yield LPRow(
                    ((a, -1), (ax, 1), (ay, 1), (ax | ay, -1)),
                    ">=",
                    0,
                    "elementary-submodular",
                )
        for mask in self.copy_masks:
            for bit in iter_bits(mask):
                yield LPRow(((mask ^ (1 << bit), 1), (mask, -1)), ">=", 0, "saturation")

    @property
    def rows(self) -> list[LPRow]:
        return list(self.iter_rows())

    def to_dict(self) -> dict[str, Any]:
        """JSON dump: rows as {lhs: [[subset_index, coeff]], rel, rhs}."""
        return {
            "n": self.n,
            "r": self.r,
            "m": self.m,
            "variables": self.num_variables,
            "objective": {"maximize": self.objective},
            "rows": [row.to_dict() for row in self.iter_rows()],
        }


def _check_lp_size(m: int, caps: Caps, allow_hard: bool = False) -> None:
    limit = caps.lp_hard if allow_hard else caps.lp_edges
    if m > limit:
        raise CapExceededError(f"rho-sat LP over 2^{m} subsets", m, limit)


def _family_copies(family: Family, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    masks: dict[int, int] = {}
    for pattern in family.patterns:
        for copy in copies_in_clique(pattern, n):
            masks.setdefault(copy.mask, copy.mask.bit_count())
    return tuple(masks), tuple(masks.values())


def build_lp(
    pattern: Hypergraph | Family,
    n: int,
    caps: Caps = DEFAULT_CAPS,
    allow_hard: bool = False,
) -> SetFunctionLP:
    """The rho-sat LP for (H, n); copies are deduplicated by edge set."""
    family = as_family(pattern)
    m = math.comb(n, family.r)
    _check_lp_size(m, caps, allow_hard)
    masks, sizes = _family_copies(family, n)
    lp = SetFunctionLP(n, family.r, family, masks, sizes)
    logger.debug(f"rho-sat LP n={n}: m={m}, {len(masks)} copies, {lp.row_count} rows")
    return lp


def _orbits(index: EdgeIndex, n: int) -> list[int]:
    """Orbit id (least member mask) of every edge subset under S_n."""
    size = 1 << index.size
    parent = list(range(size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    generators = []
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        generators.append(index.permutation_map(perm))
    for mask in range(size):
        for edge_map in generators:
            a, b = find(mask), find(permute_mask(mask, edge_map))
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(mask) for mask in range(size)]


@dataclass
class RhosatResult:
    n: int
    pattern: str
    value: Fraction
    status: str
    exact: bool
    m: int
    orbits: int = 0
    pivots: int = 0
    duals: list[dict[str, Any]] = field(default_factory=list)
    certificate: dict[int, Fraction] = field(default_factory=dict)
    values: list[Fraction] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "pattern": self.pattern,
            "rhosat": format_rational(self.value),
            "status": self.status,
            "exact": self.exact,
            "m": self.m,
            "orbits": self.orbits,
            "pivots": self.pivots,
            "duals": self.duals,
            "certificate": {
                str(k): format_rational(v) for k, v in self.certificate.items()
            },
        }


def _certificate_support(lp: SetFunctionLP) -> set[int]:
    support = {lp.objective}
    for mask in lp.copy_masks:
        support.add(mask)
        support.update(mask ^ (1 << bit) for bit in iter_bits(mask))
    return support


def _solve_reduced(lp: SetFunctionLP, keep_values: bool) -> RhosatResult:
    index = complete_edge_index(lp.n, lp.r)
    orbit = _orbits(index, lp.n)
    reps = sorted(set(orbit))
    var = {rep: i for i, rep in enumerate(r for r in reps if r != 0)}
    m = lp.m

    def collapse(terms: list[tuple[int, int]]) -> tuple[tuple[int, Fraction], ...]:
        acc: dict[int, int] = {}
        for mask, coeff in terms:
            rep = orbit[mask]
            if rep != 0:
                acc[var[rep]] = acc.get(var[rep], 0) + coeff
        return tuple(sorted((v, Fraction(c)) for v, c in acc.items() if c))

    objective = {var[orbit[lp.objective]]: Fraction(1)} if m else {}
    reduced = LinearProgram(len(var), objective)
    tags: list[str] = []
    seen: set[tuple[Any, ...]] = set()

    def add(terms: list[tuple[int, int]], rhs: int, tag: str) -> None:
        coeffs = collapse(terms)
        if not coeffs or (coeffs, rhs) in seen:
            return
        seen.add((coeffs, rhs))
        reduced.add_row(coeffs, "<=", rhs)
        tags.append(tag)

    if m:
        add([(1, 1)], 1, "singleton-cap")
    for rep in reps:
        outside = [x for x in range(m) if not rep >> x & 1]
        for x in outside:
            add([(rep, 1), (rep | 1 << x, -1)], 0, "elementary-monotone")
        for x, y in itertools.combinations(outside, 2):
            ax, ay = rep | 1 << x, rep | 1 << y
            add(
                [(rep, 1), (ax, -1), (ay, -1), (ax | ay, 1)],
                0,
                "elementary-submodular",
            )
    for mask in lp.copy_masks:
        for bit in iter_bits(mask):
            add([(mask, 1), (mask ^ (1 << bit), -1)], 0, "saturation")

    solution = solve_exact(reduced)
    if solution.status != "optimal" or solution.value is None:
        raise LPError(f"rho-sat LP ended {solution.status}")

    def value_of(mask: int) -> Fraction:
        rep = orbit[mask]
        return solution.x[var[rep]] if rep else Fraction(0)

    duals = [
        {"tag": tag, "dual": format_rational(y)}
        for tag, y in zip(tags, solution.duals, strict=True)
        if y != 0
    ]
    return RhosatResult(
        n=lp.n,
        pattern=lp.family.label,
        value=solution.value,
        status=solution.status,
        exact=True,
        m=m,
        orbits=len(reps),
        pivots=solution.pivots,
        duals=duals,
        certificate={mask: value_of(mask) for mask in sorted(_certificate_support(lp))},
        values=[value_of(mask) for mask in range(1 << m)] if keep_values else None,
    )


def _solve_float(lp: SetFunctionLP) -> RhosatResult:
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import coo_matrix

    rows, cols, data, rhs = [], [], [], []
    bounds_eq_rows = []
    count = 0
    for row in lp.iter_rows():
        if row.tag == "empty-zero":
            bounds_eq_rows.append(row)
            continue
        sign = -1 if row.rel == ">=" else 1
        for subset, coeff in row.lhs:
            rows.append(count)
            cols.append(subset)
            data.append(sign * coeff)
        rhs.append(sign * row.rhs)
        count += 1
    a_ub = coo_matrix((data, (rows, cols)), shape=(count, lp.num_variables)).tocsr()
    c = np.zeros(lp.num_variables)
    c[lp.objective] = -1.0
    bounds = [(0.0, 0.0)] + [(0.0, None)] * (lp.num_variables - 1)
    b_ub = np.array(rhs, dtype=float)
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise LPError(f"float rho-sat solve failed: {res.message}")
    value = Fraction(-res.fun).limit_denominator(10**6)
    return RhosatResult(
        n=lp.n,
        pattern=lp.family.label,
        value=value,
        status=f"optimal (float, tolerance {FLOAT_TOLERANCE})",
        exact=False,
        m=lp.m,
        certificate={
            mask: Fraction(float(res.x[mask])).limit_denominator(10**6)
            for mask in sorted(_certificate_support(lp))
        },
    )


def solve_rhosat(
    pattern: Hypergraph | Family,
    n: int,
    method: Literal["exact", "float"] = "exact",
    caps: Caps = DEFAULT_CAPS,
    keep_values: bool = False,
) -> RhosatResult:
    """rho-sat(n, H) with its certificate values on the copy support.

    The exact path needs m <= caps.lp_exact_edges; larger LPs go through
    SciPy's HiGHS only when ``method="float"`` and are labelled inexact.
    """
    family = as_family(pattern)
    lp = build_lp(family, n, caps, allow_hard=method == "float")
    if method == "exact":
        if lp.m > caps.lp_exact_edges:
            raise LPError(
                f"exact rho-sat disabled for m={lp.m} > {caps.lp_exact_edges}; "
                "request the float solver"
            )
        result = _solve_reduced(lp, keep_values)
    else:
        result = _solve_float(lp)
    logger.info(
        f"rho-sat({n}, {family.label}) = {format_rational(result.value)} "
        f"[{result.status}]"
    )
    return result


@dataclass
class FeasibilityReport:
    pattern: str
    n: int
    params: CountParams
    rows_checked: int = 0
    feasible: bool = True
    failure: dict[str, Any] | None = None
    bound: Fraction | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "pattern": self.pattern,
            "n": self.n,
            "params": self.params.to_dict(),
            "rows_checked": self.rows_checked,
            "feasible": self.feasible,
            "failure": self.failure,
            "bound": format_rational(self.bound) if self.bound is not None else None,
        }


def check_count_poly_feasible(
    pattern: Hypergraph | Family,
    n: int,
    params: CountParams,
    caps: Caps = DEFAULT_CAPS,
    samples: int = 64,
    seed: int = 0,
) -> FeasibilityReport:
    """Check the count polymatroid against the rho-sat LP rows.

    Saturation rows are checked for every copy. Axiom rows are checked for
    every subset when m <= 8 and for ``samples`` random base sets otherwise.
    """
    family = as_family(pattern)
    lp = build_lp(family, n, caps, allow_hard=True)
    poly = CountPolymatroid(clique(n, family.r), params, caps)
    m = lp.m
    report = FeasibilityReport(family.label, n, params)
    values: dict[int, Fraction] = {}

    def rho(mask: int) -> Fraction:
        if mask not in values:
            values[mask] = poly.rho(mask)
        return values[mask]

    def check(row: LPRow) -> bool:
        for subset, _ in row.lhs:
            rho(subset)
        report.rows_checked += 1
        if row.holds(values):
            return True
        report.feasible = False
        report.failure = {
            **row.to_dict(),
            "values": {str(s): format_rational(values[s]) for s, _ in row.lhs},
        }
        return False

    if m <= 8:
        base_sets: list[int] = list(range(1 << m))
    else:
        rng = random.Random(seed)
        base_sets = sorted({rng.getrandbits(m) for _ in range(samples)} | {0})
    rows: list[LPRow] = [LPRow(((0, 1),), "==", 0, "empty-zero")]
    rows.extend(LPRow(((1 << x, 1),), "<=", 1, "singleton-cap") for x in range(m))
    for a in base_sets:
        outside = [x for x in range(m) if not a >> x & 1]
        for x in outside:
            terms = ((a, 1), (a | 1 << x, -1))
            rows.append(LPRow(terms, "<=", 0, "elementary-monotone"))
        for x, y in itertools.combinations(outside, 2):
            ax, ay = a | 1 << x, a | 1 << y
            terms = ((a, -1), (ax, 1), (ay, 1), (ax | ay, -1))
            rows.append(LPRow(terms, ">=", 0, "elementary-submodular"))
    for mask in lp.copy_masks:
        for bit in iter_bits(mask):
            terms = ((mask ^ (1 << bit), 1), (mask, -1))
            rows.append(LPRow(terms, ">=", 0, "saturation"))
    for row in rows:
        if not check(row):
            break
    if report.feasible and params.p >= 1:
        report.bound = rho(lp.objective)
    verdict = "feasible" if report.feasible else "infeasible"
    logger.info(
        f"count polymatroid {params.to_dict()} on rho-sat LP n={n}: "
        f"{verdict} after {report.rows_checked} rows"
    )
    return report


def check_solution_axioms(result: RhosatResult, limit: int = 10) -> AxiomCheck:
    """Exhaustive polymatroid axiom check of a solved LP's full set function."""
    if result.values is None:
        raise PreconditionError("solve with keep_values=True to check axioms")
    return check_polymatroid_axioms(result.values, result.m, limit)


def rhosat_trend(
    pattern: Hypergraph,
    n_values: list[int],
    caps: Caps = DEFAULT_CAPS,
    with_wsat: bool = True,
) -> list[dict[str, Any]]:
    """(n, rho-sat, rho-sat / C(n, s-1)) rows with a monotone-trend flag.

    With ``with_wsat`` the exact wsat is added where the search is within
    caps, and rows where rho-sat < wsat are flagged.
    """
    if not n_values:
        return []
    s = max(sparseness(pattern), 1)
    rows: list[dict[str, Any]] = []
    for n in n_values:
        value = solve_rhosat(pattern, n, caps=caps).value
        row: dict[str, Any] = {
            "n": n,
            "rhosat": value,
            "normalized": value / math.comb(n, s - 1),
        }
        if with_wsat:
            try:
                wsat = wsat_exact(n, pattern).value
            except (CapExceededError, PreconditionError) as e:
                logger.warning(f"no wsat column at n={n}: {e}")
                wsat = None
            row["wsat"] = wsat
            row["rhosat_below_wsat"] = wsat is not None and value < wsat
        rows.append(row)
    normalized = [row["normalized"] for row in rows]
    increasing = all(a <= b for a, b in itertools.pairwise(normalized))
    decreasing = all(a >= b for a, b in itertools.pairwise(normalized))
    if increasing:
        trend = "nondecreasing"
    else:
        trend = "nonincreasing" if decreasing else "mixed"
    for row in rows:
        row["trend"] = trend
    return rows
