"""Count matroids, count polymatroids and their rank oracles.

For a coefficient vector a = (a_0, ..., a_r) the set function

    L_a(G) = a_0 + sum_{i>=1} a_i * |shadow_i(pi(G))|

induces a matroid on any multiplied edge set by declaring B independent when
|C| <= L_a(C) for every non-empty C inside B. With rational a and q the least
common denominator, rank(G^(q)) / q under the integer vector q*a is the count
polymatroid.
"""

import itertools
import math
import random
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceededError, HypergraphFormatError, PreconditionError
from .hypergraph import (
    Edge,
    Hypergraph,
    MultiEdgeSet,
    complete_edge_index,
    copies_in_clique,
    iter_bits,
    shadow_size,
)
from .logger import get_logger
from .reports import format_rational, parse_rational

logger = get_logger(__name__)


@dataclass(frozen=True)
class CountParams:
    """Coefficients a_0..a_r of L_a, kept as exact rationals."""

    r: int
    a: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(Fraction(x) for x in self.a)
        if len(coeffs) != self.r + 1:
            raise PreconditionError(
                f"expected {self.r + 1} coefficients for r={self.r}, got {len(coeffs)}"
            )
        if any(x < 0 for x in coeffs[1:]):
            raise PreconditionError(f"a_i must be >= 0 for i >= 1, got {coeffs}")
        object.__setattr__(self, "a", coeffs)

    @classmethod
    def of(cls, *a: Fraction | int | str) -> "CountParams":
        return cls(len(a) - 1, tuple(parse_rational(x) for x in a))

    @property
    def q(self) -> int:
        """Least positive integer clearing every denominator."""
        return math.lcm(*(x.denominator for x in self.a))

    @property
    def p(self) -> Fraction:
        return self.a[0] + sum(
            (self.a[i] * math.comb(self.r, i) for i in range(1, self.r + 1)),
            Fraction(0),
        )

    def is_integral(self) -> bool:
        return self.q == 1

    def scale(self, factor: Fraction | int) -> "CountParams":
        factor = Fraction(factor)
        if factor <= 0:
            raise PreconditionError(f"scale factor must be positive, got {factor}")
        return CountParams(self.r, tuple(x * factor for x in self.a))

    def scaled(self) -> "CountParams":
        """q*a, the integral vector of the underlying count matroid."""
        return self.scale(self.q)

    def int_coeffs(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise PreconditionError(
                f"coefficients {self.to_dict()['a']} are not integral"
            )
        return tuple(int(x) for x in self.a)

    def to_dict(self) -> dict[str, Any]:
        return {"a": [format_rational(x) for x in self.a], "r": self.r}

    @classmethod
    def from_dict(cls, data: Any) -> "CountParams":
        if not isinstance(data, dict) or "a" not in data or "r" not in data:
            raise HypergraphFormatError('CountParams JSON needs "a" and "r"')
        try:
            return cls(int(data["r"]), tuple(parse_rational(x) for x in data["a"]))
        except PreconditionError as e:
            raise HypergraphFormatError(str(e)) from e


def _check_uniformity(graph: Hypergraph, params: CountParams) -> None:
    if graph.r != params.r:
        raise PreconditionError(
            f"uniformity mismatch: hypergraph r={graph.r}, params r={params.r}"
        )


def eval_L(graph: Hypergraph | MultiEdgeSet, params: CountParams) -> Fraction:
    """L_a(pi(G)); multiplicities never matter."""
    base = graph.projection() if isinstance(graph, MultiEdgeSet) else graph
    _check_uniformity(base, params)
    return params.a[0] + sum(
        (params.a[i] * shadow_size(base, i) for i in range(1, params.r + 1)),
        Fraction(0),
    )


def eval_L_clique(n: int, params: CountParams) -> Fraction:
    """L_a(K_n^r) for n >= r."""
    if n < params.r:
        raise PreconditionError(f"K_{n}^{params.r} has no edges")
    return params.a[0] + sum(
        (params.a[i] * math.comb(n, i) for i in range(1, params.r + 1)), Fraction(0)
    )


class CountMatroidOracle:
    """Rank oracle for the count matroid restricted to a fixed edge universe.

    L over every edge subset of the universe is tabulated once; a subset is a
    bitmask over ``universe.edges``.
    """

    def __init__(
        self, universe: Hypergraph, params: CountParams, caps: Caps = DEFAULT_CAPS
    ):
        _check_uniformity(universe, params)
        self.universe = universe
        self.params = params
        self.coeffs = params.int_coeffs()
        self.size = universe.num_edges
        if self.size > caps.rank_projection:
            raise CapExceededError(
                "count matroid projection size", self.size, caps.rank_projection
            )
        self.caps = caps
        self._rank_cache: dict[tuple[int, int], int] = {}
        self.L = self._tabulate_L()

    def _tabulate_L(self) -> list[int]:
        r = self.params.r
        k = self.size
        L = [self.coeffs[0]] * (1 << k)
        for i in range(1, r + 1):
            a_i = self.coeffs[i]
            if a_i == 0:
                continue
            sub_index = complete_edge_index(self.universe.n, i).index
            level = []
            for edge in self.universe.edges:
                mask = 0
                for sub in itertools.combinations(edge, i):
                    mask |= 1 << sub_index[sub]
                level.append(mask)
            shadows = [0] * (1 << k)
            for s in range(1, 1 << k):
                low = s & -s
                shadows[s] = shadows[s ^ low] | level[low.bit_length() - 1]
                L[s] += a_i * shadows[s].bit_count()
        return L

    def L_value(self, mask: int) -> int:
        return self.L[mask]

    def _independent_after(self, counts: list[int], support: int, j: int) -> bool:
        """Whether the current multiset plus one copy of edge j is independent.

        Projection criterion: a violating C (|C| > L(C)) can be replaced by the
        full preimage of pi(C) inside B, which has the same L and at least as
        many elements; conversely a violating preimage is itself a violating
        C. So it suffices to test |B restricted to S| <= L(S) for every edge
        set S of pi(B). Sets avoiding edge j were tested when B was built.
        """
        jbit = 1 << j
        support |= jbit
        weight = {0: 0}
        sub = 0
        while True:
            # next submask of support in increasing order
            sub = (sub - support) & support
            if sub == 0:
                return True
            low = sub & -sub
            w = weight[sub ^ low] + counts[low.bit_length() - 1] + (low == jbit)
            weight[sub] = w
            if sub & jbit and w > self.L[sub]:
                return False

    def rank(
        self, mask: int, q: int, order: Sequence[tuple[int, int]] | None = None
    ) -> int:
        """Rank of the universe edges in ``mask``, each with multiplicity q.

        ``order`` optionally fixes the greedy element order as (edge bit, copy)
        pairs; the result never depends on it.
        """
        key = (mask, q)
        if order is None and key in self._rank_cache:
            return self._rank_cache[key]
        bits = list(iter_bits(mask))
        if q * len(bits) > self.caps.rank_elements:
            raise CapExceededError(
                "count matroid ground set", q * len(bits), self.caps.rank_elements
            )
        if order is not None:
            return self._greedy(order)
        rank = self._greedy([(j, c) for j in bits for c in range(q)])
        self._rank_cache[key] = rank
        return rank

    def rank_multiset(self, multiplicities: Sequence[int]) -> int:
        """Rank of a multiset given per-universe-edge multiplicities."""
        elements = [(j, c) for j, m in enumerate(multiplicities) for c in range(m)]
        if len(elements) > self.caps.rank_elements:
            raise CapExceededError(
                "count matroid ground set", len(elements), self.caps.rank_elements
            )
        return self._greedy(elements)

    def _greedy(self, elements: Sequence[tuple[int, int]]) -> int:
        counts = [0] * self.size
        support = 0
        rank = 0
        for j, _ in elements:
            if self._independent_after(counts, support, j):
                counts[j] += 1
                support |= 1 << j
                rank += 1
        return rank


def matroid_rank_bruteforce(
    multi: MultiEdgeSet, params: CountParams, caps: Caps = DEFAULT_CAPS
) -> int:
    """Greedy rank of a multiplied edge set under integral coefficients."""
    if multi.total() > caps.rank_elements:
        raise CapExceededError(
            "count matroid ground set", multi.total(), caps.rank_elements
        )
    universe = multi.projection()
    if universe.is_empty():
        return 0
    oracle = CountMatroidOracle(universe, params, caps)
    return oracle.rank_multiset([m for _, m in multi.entries])


def matroid_rank_formula(n: int, params: CountParams, q: int = 1) -> int:
    """Closed-form rank of the count matroid on (K_n^r)^(q)."""
    coeffs = params.int_coeffs()
    if n < params.r:
        return 0
    L = coeffs[0] + sum(coeffs[i] * math.comb(n, i) for i in range(1, params.r + 1))
    p = int(params.p)
    return max(0, min(L, min(q, max(0, p)) * math.comb(n, params.r)))


def poly_rho(
    graph: Hypergraph, params: CountParams, caps: Caps = DEFAULT_CAPS
) -> Fraction:
    """Exact value of the count polymatroid on G."""
    _check_uniformity(graph, params)
    if graph.is_empty():
        return Fraction(0)
    q = params.q
    if q * graph.num_edges > caps.rank_elements:
        raise CapExceededError(
            "count polymatroid ground set", q * graph.num_edges, caps.rank_elements
        )
    oracle = CountMatroidOracle(graph, params.scaled(), caps)
    return Fraction(oracle.rank((1 << graph.num_edges) - 1, q), q)


def poly_rank_formula(n: int, params: CountParams) -> Fraction:
    """Closed-form value of the count polymatroid on K_n^r."""
    if n < params.r:
        return Fraction(0)
    L = eval_L_clique(n, params)
    p = params.p
    clipped = min(Fraction(1), max(Fraction(0), p))
    return max(Fraction(0), min(L, clipped * math.comb(n, params.r)))


class CountPolymatroid:
    """rho(S) = rank(S^(q)) / q for every edge subset S of a fixed universe."""

    def __init__(
        self, universe: Hypergraph, params: CountParams, caps: Caps = DEFAULT_CAPS
    ):
        self.q = params.q
        self.oracle = CountMatroidOracle(universe, params.scaled(), caps)

    def rho(self, mask: int) -> Fraction:
        return Fraction(self.oracle.rank(mask, self.q), self.q)

    def table(self) -> list[Fraction]:
        return [self.rho(mask) for mask in range(1 << self.oracle.size)]


@dataclass
class WsatConditionReport:
    pattern: str
    n: int
    params: CountParams
    copies_checked: int = 0
    passed: bool = True
    failure: dict[str, Any] | None = None
    bound: Fraction | None = None

    @property
    def applicable(self) -> bool:
        return self.params.p >= 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "pattern": self.pattern,
            "n": self.n,
            "params": self.params.to_dict(),
            "copies_checked": self.copies_checked,
            "pass": self.passed,
            "applicable": self.applicable,
            "failure": self.failure,
            "bound": format_rational(self.bound) if self.bound is not None else None,
        }


def _copy_deletion_failure(
    copy_graph: Hypergraph, params: CountParams, caps: Caps
) -> Edge | None:
    """First edge whose deletion lowers rho of the copy, or None."""
    poly = CountPolymatroid(copy_graph, params, caps)
    full = (1 << copy_graph.num_edges) - 1
    whole = poly.rho(full)
    for j, edge in enumerate(copy_graph.edges):
        if poly.rho(full ^ (1 << j)) != whole:
            return edge
    return None


def verify_wsat_condition(
    pattern: Hypergraph, n: int, params: CountParams, caps: Caps = DEFAULT_CAPS
) -> WsatConditionReport:
    """Check rho(H' - e) = rho(H') for every copy H' of the pattern in K_n^r."""
    _check_uniformity(pattern, params)
    report = WsatConditionReport(pattern.label or "H", n, params)
    index = complete_edge_index(n, pattern.r)
    copies = copies_in_clique(pattern, n)
    copy_graphs = [index.hypergraph(c.mask) for c in copies]

    def check(graph: Hypergraph) -> Edge | None:
        return _copy_deletion_failure(graph, params, caps)

    if caps.workers > 1:
        with ThreadPoolExecutor(max_workers=caps.workers) as pool:
            outcomes = list(pool.map(check, copy_graphs))
    else:
        outcomes = [check(g) for g in copy_graphs]
    report.copies_checked = len(copy_graphs)
    for graph, edge in zip(copy_graphs, outcomes, strict=True):
        if edge is not None:
            report.passed = False
            report.failure = {"copy": graph.to_dict()["edges"], "edge": list(edge)}
            break
    if report.passed and report.applicable:
        report.bound = eval_L_clique(n, params)
    logger.info(
        f"count-polymatroid condition for {report.pattern} at n={n}: "
        f"{'pass' if report.passed else 'fail'} over {report.copies_checked} copies"
    )
    return report


def deficient_subgraph(graph: Hypergraph, params: CountParams) -> Hypergraph | None:
    """A non-empty G inside ``graph`` with L_a(G) < |E(G)|, least mask first."""
    _check_uniformity(graph, params)
    oracle = CountMatroidOracle(graph, params.scaled(), DEFAULT_CAPS)
    q = params.q
    for mask in range(1, 1 << graph.num_edges):
        # compare L_a(G) < |E(G)| in the scaled integers
        if oracle.L[mask] < q * mask.bit_count():
            return graph.with_edges(graph.edges[j] for j in iter_bits(mask))
    return None


@dataclass
class AxiomCheck:
    """Violations of the 1-polymatroid axioms found by exhaustive search."""

    checked_pairs: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_polymatroid_axioms(
    values: Sequence[Fraction], size: int, limit: int = 10
) -> AxiomCheck:
    """Exhaustive check of normalisation, monotonicity and submodularity.

    ``values[mask]`` is rho of the edge subset ``mask`` of a size-edge ground
    set. At most ``limit`` violations are collected.
    """
    result = AxiomCheck()
    full = 1 << size
    if len(values) != full:
        raise PreconditionError(f"expected {full} values, got {len(values)}")

    def violate(kind: str, **detail: Any) -> bool:
        result.violations.append({"axiom": kind, **detail})
        return len(result.violations) >= limit

    if values[0] != 0 and violate("empty", value=str(values[0])):
        return result
    for a in range(full):
        if not 0 <= values[a] <= a.bit_count():
            if violate("bound", set=a, value=str(values[a])):
                return result
        for x in range(size):
            bit = 1 << x
            if not a & bit and values[a] > values[a | bit]:
                if violate("monotone", set=a, element=x):
                    return result
    for a in range(full):
        for b in range(a, full):
            result.checked_pairs += 1
            if values[a | b] + values[a & b] > values[a] + values[b]:
                if violate("submodular", a=a, b=b):
                    return result
    return result


def random_rank_orders(
    size: int, q: int, samples: int, seed: int
) -> list[list[tuple[int, int]]]:
    """Shuffled element orders for checking that greedy rank is order-free."""
    rng = random.Random(seed)
    base = [(j, c) for j in range(size) for c in range(q)]
    orders = []
    for _ in range(samples):
        order = base[:]
        rng.shuffle(order)
        orders.append(order)
    return orders
