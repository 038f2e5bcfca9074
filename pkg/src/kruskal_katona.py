"""Left-compressed hypergraphs, shadow lower bounds and their exhaustive checks."""

import itertools
import math
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceededError, PreconditionError
from .hypergraph import (
    Edge,
    Hypergraph,
    complete_edge_index,
    delta_star,
    enumerate_hypergraphs,
    f_r_delta,
    shadow_size,
)
from .logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class LcSpec:
    r: int
    e: int

    def __post_init__(self) -> None:
        if self.r < 1 or self.e < 1:
            raise PreconditionError(
                f"lcG needs r >= 1 and e >= 1, got r={self.r}, e={self.e}"
            )


def _lc_edges(r: int, e: int) -> list[Edge]:
    if r == 1:
        return [(v,) for v in range(e)]
    k = r
    while math.comb(k + 1, r) <= e:
        k += 1
    m = e - math.comb(k, r)
    edges = list(itertools.combinations(range(k), r))
    if m > 0:
        # vertex "k+1" of the 1-based recursion is index k here
        edges.extend(f + (k,) for f in _lc_edges(r - 1, m))
    return edges


@lru_cache(maxsize=1024)
def left_compressed(r: int, e: int) -> Hypergraph:
    """lcG(r, e): the e-edge r-graph with the smallest shadows."""
    LcSpec(r, e)
    edges = _lc_edges(r, e)
    n = max(max(edge) for edge in edges) + 1
    return Hypergraph(n, r, tuple(edges), f"lcG({r},{e})")


def kk_shadow_bound(r: int, e: int, m: int) -> int:
    """Least possible |shadow_m| of an e-edge r-uniform hypergraph."""
    if not 1 <= m <= r:
        raise PreconditionError(f"shadow level m={m} outside [1, {r}]")
    return shadow_size(left_compressed(r, e), m)


@dataclass
class KKReport:
    n: int
    r: int
    e: int
    m: int
    bound: int
    min_found: int
    witness: Hypergraph
    checked: int

    @property
    def passed(self) -> bool:
        return self.min_found >= self.bound

    def to_dict(self) -> dict[str, Any]:
        return {
            "params": {"n": self.n, "r": self.r, "e": self.e, "m": self.m},
            "bound": self.bound,
            "min_found": self.min_found,
            "witness": self.witness.to_dict(),
            "checked": self.checked,
            "pass": self.passed,
        }


def _shadow_masks(n: int, r: int, m: int) -> list[int]:
    """For each edge of K_n^r, the bitmask of its m-subsets in K_n^m order."""
    sub_index = complete_edge_index(n, m).index
    masks = []
    for edge in complete_edge_index(n, r).edges:
        mask = 0
        for sub in itertools.combinations(edge, m):
            mask |= 1 << sub_index[sub]
        masks.append(mask)
    return masks


def _min_shadow_with_first(
    masks: list[int], e: int, first: int
) -> tuple[int, tuple[int, ...], int]:
    """Minimum shadow over e-subsets whose smallest edge index is ``first``."""
    best = -1
    best_combo: tuple[int, ...] = ()
    checked = 0
    rest = range(first + 1, len(masks))
    head = masks[first]
    for combo in itertools.combinations(rest, e - 1):
        mask = head
        for i in combo:
            mask |= masks[i]
        size = mask.bit_count()
        checked += 1
        if best < 0 or size < best:
            best = size
            best_combo = (first, *combo)
    return best, best_combo, checked


def min_shadow_exhaustive(
    n: int, r: int, e: int, m: int, caps: Caps = DEFAULT_CAPS
) -> tuple[int, Hypergraph, int]:
    """Exact minimum of |shadow_m| over all e-edge r-graphs on [n].

    Returns (minimum, lexicographically first minimiser, number checked).
    """
    total = math.comb(n, r)
    if not 1 <= e <= total:
        raise PreconditionError(f"e={e} outside [1, C({n},{r})={total}]")
    if not 1 <= m <= r:
        raise PreconditionError(f"shadow level m={m} outside [1, {r}]")
    estimate = math.comb(total, e)
    if estimate > caps.enumeration:
        raise CapExceededError(
            f"enumeration of C({total},{e}) hypergraphs", estimate, caps.enumeration
        )
    masks = _shadow_masks(n, r, m)
    firsts = range(total - e + 1)
    if caps.workers > 1:
        with ThreadPoolExecutor(max_workers=caps.workers) as pool:
            parts = list(
                pool.map(lambda f: _min_shadow_with_first(masks, e, f), firsts)
            )
    else:
        parts = [_min_shadow_with_first(masks, e, f) for f in firsts]
    # parts are in ascending first-edge order, so the strict comparison keeps
    # the lexicographically first minimiser
    best, best_combo, checked = parts[0]
    for size, combo, count in parts[1:]:
        checked += count
        if size < best:
            best, best_combo = size, combo
    index = complete_edge_index(n, r)
    witness = Hypergraph(n, r, tuple(index.edges[i] for i in best_combo))
    return best, witness, checked


def verify_kk_exhaustive(
    n: int, r: int, e: int, m: int, caps: Caps = DEFAULT_CAPS
) -> KKReport:
    """Check the shadow bound against every e-edge r-graph on [n]."""
    bound = kk_shadow_bound(r, e, m)
    min_found, witness, checked = min_shadow_exhaustive(n, r, e, m, caps)
    report = KKReport(n, r, e, m, bound, min_found, witness, checked)
    logger.info(
        f"KK n={n} r={r} e={e} m={m}: bound={bound} min={min_found} "
        f"({checked} checked) {'pass' if report.passed else 'FAIL'}"
    )
    return report


def verify_kk_grid(
    max_n: int = 6, max_r: int = 3, max_e: int = 8, caps: Caps = DEFAULT_CAPS
) -> list[KKReport]:
    """verify_kk_exhaustive over every n <= max_n, 2 <= r <= max_r,
    e <= max_e and 1 <= m < r."""
    reports = []
    for r in range(2, max_r + 1):
        for n in range(r, max_n + 1):
            for e in range(1, min(max_e, math.comb(n, r)) + 1):
                for m in range(1, r):
                    reports.append(verify_kk_exhaustive(n, r, e, m, caps))
    return reports


@dataclass
class InequalitySweep:
    """Outcome of a numeric sweep over an exact inequality."""

    name: str
    checked: int = 0
    skipped: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": self.violations,
            "pass": self.passed,
        }


def verify_binomial_inequality(limit: int = 30) -> InequalitySweep:
    """C(a+b, a) >= ab + 1 for 0 <= a, b <= limit."""
    sweep = InequalitySweep("binomial C(a+b,a) >= ab+1")
    for a in range(limit + 1):
        for b in range(limit + 1):
            sweep.checked += 1
            if math.comb(a + b, a) < a * b + 1:
                sweep.violations.append({"a": a, "b": b})
    return sweep


def verify_convexity_inequality(limit: int = 12) -> InequalitySweep:
    """(a + b + 1 - x) C(x, a) >= ab + 1 for 1 <= a, b <= limit, a < x <= a + b."""
    sweep = InequalitySweep("convexity (a+b+1-x)C(x,a) >= ab+1")
    for a in range(1, limit + 1):
        for b in range(1, limit + 1):
            for x in range(a + 1, a + b + 1):
                sweep.checked += 1
                if (a + b + 1 - x) * math.comb(x, a) < a * b + 1:
                    sweep.violations.append({"a": a, "b": b, "x": x})
    return sweep


def _f_bound_cases(max_r: int, max_delta: int) -> Iterator[tuple[int, int, int, int]]:
    """(r, delta, e, largest admissible a) for the f_{r,delta} shadow bound."""
    for r in range(1, max_r + 1):
        for delta in range(1, max_delta + 1):
            a_max = (r - 1) * (delta - 1) + 1
            top = math.comb(r + delta - 1, r)
            for e in range(1, top):
                largest = min(a_max, top - e)
                if largest >= 1:
                    yield r, delta, e, largest


def verify_f_r_delta_bound(
    max_r: int = 3,
    max_delta: int = 4,
    enumerate_vertices: int = 0,
    caps: Caps = DEFAULT_CAPS,
) -> InequalitySweep:
    """f_{r,delta}(G) >= a whenever |E(G)| <= C(r+delta-1, r) - a.

    Checked on lcG(r, e) and, with ``enumerate_vertices`` > 0, on every
    e-edge hypergraph with that many vertices or fewer. For fixed e the
    minimum of f over all G is attained at the minimum (r-1)-shadow, so the
    enumeration reuses the exhaustive shadow minimum. Cases over the
    enumeration cap are counted as skipped.
    """
    sweep = InequalitySweep("f_{r,delta} shadow bound")
    for r, delta, e, a in _f_bound_cases(max_r, max_delta):
        sweep.checked += 1
        value = f_r_delta(left_compressed(r, e), delta)
        if value < a:
            sweep.violations.append(
                {"r": r, "delta": delta, "e": e, "a": a, "f": value, "source": "lcG"}
            )
        if r == 1:
            continue
        for n in range(r, enumerate_vertices + 1):
            if e > math.comb(n, r):
                continue
            try:
                least, witness, _ = min_shadow_exhaustive(n, r, e, r - 1, caps)
            except CapExceededError:
                sweep.skipped += 1
                continue
            sweep.checked += 1
            value = delta * least - r * e
            if value < a:
                sweep.violations.append(
                    {
                        "r": r,
                        "delta": delta,
                        "e": e,
                        "a": a,
                        "f": value,
                        "source": witness.to_dict(),
                    }
                )
    return sweep


def verify_shadow_delta_star_bound(
    max_vertices: int = 5, max_r: int = 3, caps: Caps = DEFAULT_CAPS
) -> InequalitySweep:
    """|shadow_{r-1}(H)| >= C(r + delta* - 1, r - 1) for every non-empty H."""
    sweep = InequalitySweep("shadow vs minimum positive codegree")
    for r in range(2, max_r + 1):
        for n in range(r, max_vertices + 1):
            for e in range(1, math.comb(n, r) + 1):
                try:
                    graphs = list(enumerate_hypergraphs(n, r, e, caps=caps))
                except CapExceededError:
                    sweep.skipped += 1
                    continue
                for graph in graphs:
                    sweep.checked += 1
                    d = delta_star(graph)
                    need = math.comb(r + d - 1, r - 1)
                    size = shadow_size(graph, r - 1)
                    if size < need:
                        sweep.violations.append(
                            {"graph": graph.to_dict(), "delta_star": d, "shadow": size}
                        )
    return sweep
