"""Lower bounds on wsat(n, H) and the quantities they are built from.

Every minimum comes with a witness; ties go to the lexicographically least
witness so reports are reproducible.
"""

import itertools
import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any

from .config import DEFAULT_CAPS, Caps
from .count_polymatroid import CountParams
from .errors import CapExceededError, PreconditionError
from .hypergraph import (
    Hypergraph,
    canonical_key,
    delta_m,
    delta_star,
    iter_bits,
    link,
    shadow,
    shadow_size,
    sparseness,
)
from .logger import get_logger
from .reports import BoundReport, format_rational

if TYPE_CHECKING:
    from .wsat_engine import Family

logger = get_logger(__name__)


def _require_sparseness(graph: Hypergraph, s: int | None) -> int:
    actual = sparseness(graph)
    if s is not None and s != actual:
        raise PreconditionError(f"s={s} given but s(H)={actual}")
    if graph.r < 2 or actual < 2:
        raise PreconditionError(
            f"gamma needs r >= 2 and s(H) >= 2, got r={graph.r}, s={actual}"
        )
    return actual


def _require_host_size(graph: Hypergraph, n: int) -> None:
    if n < len(graph.vertices()):
        raise PreconditionError(f"n={n} is smaller than |V(H)|={len(graph.vertices())}")


def _better(
    value: Fraction, witness: tuple, best: Fraction | None, best_witness: tuple
) -> bool:
    return best is None or value < best or (value == best and witness < best_witness)


def gamma_subgraph(
    graph: Hypergraph, s: int | None = None, caps: Caps = DEFAULT_CAPS
) -> BoundReport:
    """gamma_{s,H} as a minimum over non-empty edge subsets G of H."""
    s = _require_sparseness(graph, s)
    k = graph.num_edges
    if k > caps.gamma_edges:
        raise CapExceededError("gamma subgraph enumeration edges", k, caps.gamma_edges)
    level = shadow(graph, s - 1)
    position = {u: i for i, u in enumerate(level)}
    edge_masks = [
        sum(1 << position[u] for u in itertools.combinations(e, s - 1))
        for e in graph.edges
    ]
    total = len(level)
    shadows = [0] * (1 << k)
    best: Fraction | None = None
    best_witness: tuple = ()
    for g in range(1, 1 << k):
        low = g & -g
        shadows[g] = shadows[g ^ low] | edge_masks[low.bit_length() - 1]
        size = shadows[g].bit_count()
        if size >= total:
            continue
        value = Fraction(k - g.bit_count() - 1, total - size)
        if best is not None and value > best:
            continue
        witness = tuple(graph.edges[j] for j in iter_bits(g))
        if _better(value, witness, best, best_witness):
            best, best_witness = value, witness
    if best is None:
        raise PreconditionError("no subgraph with a smaller shadow exists")
    return BoundReport(
        name="gamma_subgraph",
        value=best,
        formula="min over G (|E(H)|-|E(G)|-1)/(|shadow_{s-1}(H)|-|shadow_{s-1}(G)|)",
        witness=[list(e) for e in best_witness],
    )


def gamma_shadow(
    graph: Hypergraph, s: int | None = None, caps: Caps = DEFAULT_CAPS
) -> BoundReport:
    """gamma_{s,H} as a minimum over admissible sets of (s-1)-shadow elements."""
    s = _require_sparseness(graph, s)
    level = shadow(graph, s - 1)
    total = len(level)
    if total > caps.gamma_edges:
        raise CapExceededError("gamma shadow enumeration size", total, caps.gamma_edges)
    position = {u: i for i, u in enumerate(level)}
    edge_masks = [
        sum(1 << position[u] for u in itertools.combinations(e, s - 1))
        for e in graph.edges
    ]
    keep = math.comb(graph.r, s - 1)
    best: Fraction | None = None
    best_witness: tuple = ()
    for chosen in range(1, 1 << total):
        size = chosen.bit_count()
        if total - size < keep:
            continue
        hit = sum(1 for mask in edge_masks if mask & chosen)
        value = Fraction(hit - 1, size)
        if best is not None and value > best:
            continue
        witness = tuple(level[i] for i in iter_bits(chosen))
        if _better(value, witness, best, best_witness):
            best, best_witness = value, witness
    if best is None:
        raise PreconditionError("no admissible shadow subset exists")
    return BoundReport(
        name="gamma_shadow",
        value=best,
        formula="min over S (|{e : C(e,s-1) meets S}|-1)/|S|",
        witness=[list(u) for u in best_witness],
    )


def gamma_graph_m(graph: Hypergraph, m: int) -> BoundReport:
    """gamma^m_H for a graph without isolated vertices."""
    if graph.r != 2 or graph.is_empty():
        raise PreconditionError("gamma^m needs a non-empty graph")
    if graph.has_isolated_vertices():
        raise PreconditionError(
            "gamma^m needs a graph without isolated vertices",
            witness=sorted(set(range(graph.n)) - set(graph.vertices())),
        )
    if not 0 <= m < graph.n:
        raise PreconditionError(f"m={m} outside [0, {graph.n})")
    best: Fraction | None = None
    best_witness: tuple = ()
    for size in range(1, graph.n - m + 1):
        for u in itertools.combinations(range(graph.n), size):
            us = set(u)
            hit = sum(1 for e in graph.edges if us.intersection(e))
            value = Fraction(hit - 1, size)
            if _better(value, u, best, best_witness):
                best, best_witness = value, u
    assert best is not None
    return BoundReport(
        name=f"gamma^{m}",
        value=best,
        formula="min over U (|{e : e meets U}|-1)/|U| with |V(H)-U| >= m",
        witness=list(best_witness),
    )


def gamma_count_params(graph: Hypergraph, caps: Caps = DEFAULT_CAPS) -> CountParams:
    """a_{s-1} = gamma, a_0 = |E(H)| - 1 - gamma |shadow_{s-1}(H)|, other a_i = 0."""
    s = _require_sparseness(graph, None)
    gamma = gamma_subgraph(graph, s, caps).value
    coeffs = [Fraction(0)] * (graph.r + 1)
    coeffs[s - 1] = gamma
    coeffs[0] = graph.num_edges - 1 - gamma * shadow_size(graph, s - 1)
    return CountParams(graph.r, tuple(coeffs))


def lb_gamma(graph: Hypergraph, n: int, caps: Caps = DEFAULT_CAPS) -> BoundReport:
    """gamma_{s,H} (C(n, s-1) - |shadow_{s-1}(H)|) + |E(H)| - 1."""
    _require_host_size(graph, n)
    s = _require_sparseness(graph, None)
    gamma = gamma_subgraph(graph, s, caps)
    free = math.comb(n, s - 1) - shadow_size(graph, s - 1)
    value = gamma.value * free + graph.num_edges - 1
    return BoundReport(
        name="lb_gamma",
        value=value,
        n=n,
        formula="gamma_{s,H}*(C(n,s-1)-|shadow_{s-1}(H)|)+|E(H)|-1",
        witness={
            "gamma": format_rational(gamma.value),
            "s": s,
            "subgraph": gamma.witness,
        },
    )


def delta_star_coefficient(r: int, delta: int) -> Fraction:
    """delta/r - 1/C(r+delta-1, r-1)."""
    return Fraction(delta, r) - Fraction(1, math.comb(r + delta - 1, r - 1))


def lb_delta_star(graph: Hypergraph, n: int) -> BoundReport:
    """(delta/r - 1/C(r+delta-1, r-1)) C(n, r-1) with delta = delta*(H)."""
    _require_host_size(graph, n)
    delta = delta_star(graph)
    if delta < 1:
        raise PreconditionError("the codegree bound needs a non-empty pattern")
    value = delta_star_coefficient(graph.r, delta) * math.comb(n, graph.r - 1)
    return BoundReport(
        name="lb_delta_star",
        value=value,
        n=n,
        formula="(delta/r-1/C(r+delta-1,r-1))*C(n,r-1)",
        witness={"delta_star": delta},
    )


def lb_trivial(graph: Hypergraph, m: int, n: int) -> BoundReport:
    """(delta_m(H) - 1)/C(r, m) * C(n, m)."""
    _require_host_size(graph, n)
    if not 0 <= m <= graph.r:
        raise PreconditionError(f"m={m} outside [0, {graph.r}]")
    delta = delta_m(graph, m)
    if delta < 1:
        raise PreconditionError("the degree bound needs a non-empty pattern")
    value = Fraction(delta - 1, math.comb(graph.r, m)) * math.comb(n, m)
    return BoundReport(
        name=f"lb_trivial_m{m}",
        value=value,
        n=n,
        formula="(delta_m-1)/C(r,m)*C(n,m)",
        witness={"m": m, "delta_m": delta},
    )


def lb_gamma_graph(graph: Hypergraph, n: int, m: int = 2) -> BoundReport:
    """gamma^m_H (n - |V(H)|) + |E(H)| - 1 for graphs of minimum degree >= 2."""
    compact = graph.compact()
    _require_host_size(compact, n)
    if m not in (1, 2):
        raise PreconditionError(f"graph bound is stated for m in (1, 2), got {m}")
    if compact.r != 2 or compact.is_empty() or delta_m(compact, 1) < 2:
        raise PreconditionError("graph bound needs a graph with minimum degree >= 2")
    gamma = gamma_graph_m(compact, m)
    value = gamma.value * (n - compact.n) + compact.num_edges - 1
    return BoundReport(
        name=f"lb_gamma_graph_m{m}",
        value=value,
        n=n,
        formula=f"gamma^{m}_H*(n-|V(H)|)+|E(H)|-1",
        witness={"gamma": format_rational(gamma.value), "U": gamma.witness},
    )


def all_lower_bounds(
    graph: Hypergraph, n: int, caps: Caps = DEFAULT_CAPS
) -> list[BoundReport]:
    """Every applicable closed-form lower bound for a single pattern."""
    reports = []
    for m in range(graph.r + 1):
        if delta_m(graph, m) >= 1:
            reports.append(lb_trivial(graph, m, n))
    reports.append(lb_delta_star(graph, n))
    if graph.r >= 2 and sparseness(graph) >= 2:
        try:
            reports.append(lb_gamma(graph, n, caps))
        except CapExceededError as e:
            logger.warning(f"skipping lb_gamma: {e}")
    if graph.r == 2 and not graph.is_empty() and delta_m(graph.compact(), 1) >= 2:
        for m in (1, 2):
            reports.append(lb_gamma_graph(graph, n, m))
    return reports


def family_lower_bound(family: "Family", n: int, caps: Caps = DEFAULT_CAPS) -> int:
    """Best proven integer lower bound on wsat(n, family)."""
    r = family.r
    best = 0
    for m in range(r + 1):
        delta = family.min_delta(m)
        if delta >= 1:
            bound = Fraction(delta - 1, math.comb(r, m)) * math.comb(n, m)
            best = max(best, math.ceil(bound))
    if len(family.patterns) == 1:
        pattern = family.patterns[0]
        best = max(best, lb_delta_star(pattern, n).ceiling)
        if r >= 2 and sparseness(pattern) >= 2:
            try:
                best = max(best, lb_gamma(pattern, n, caps).ceiling)
            except CapExceededError as e:
                logger.debug(f"gamma bound skipped: {e}")
    return best


@dataclass
class InequalityCheck:
    name: str
    lhs: Fraction
    rhs: Fraction
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs

    @property
    def slack(self) -> Fraction:
        return self.lhs - self.rhs

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "holds": self.holds,
            **self.detail,
        }


def verify_gamma_delta_inequality(
    graph: Hypergraph, caps: Caps = DEFAULT_CAPS
) -> InequalityCheck:
    """gamma_{r,H} >= delta/r - 1/C(r+delta-1, r-1) for delta = delta*(H) >= 2."""
    delta = delta_star(graph)
    if graph.r < 2 or delta < 2:
        raise PreconditionError(
            f"needs r >= 2 and delta* >= 2, got r={graph.r}, delta*={delta}"
        )
    gamma = gamma_subgraph(graph, graph.r, caps).value
    check = InequalityCheck(
        "gamma vs codegree",
        gamma,
        delta_star_coefficient(graph.r, delta),
        {"pattern": graph.label, "delta_star": delta},
    )
    if not check.holds:
        logger.warning(f"gamma/codegree inequality fails on {graph.to_json()}")
    return check


def _link_family(graph: Hypergraph, s: int, caps: Caps) -> list[Hypergraph]:
    links: list[Hypergraph] = []
    seen: set[Any] = set()
    for u in shadow(graph, s - 1):
        piece = link(graph, u).compact()
        key: Any = piece
        if piece.n <= caps.canon_vertices:
            key = canonical_key(piece, caps)
        if key not in seen:
            seen.add(key)
            links.append(piece.with_label(f"L({','.join(map(str, u))})"))
    return links


def eta(graph: Hypergraph, n_cap: int, caps: Caps = DEFAULT_CAPS) -> BoundReport:
    """eta(H): the limiting wsat of the (s-1)-link family of H.

    Exact when s(H) = r (then delta*(H) - 1) or when H is a single edge.
    Otherwise the family's exact wsat is computed for increasing n up to
    n_cap; the sequence is nonincreasing in theory, so its last value is an
    upper bound on the limit and is reported with that status.
    """
    from .wsat_engine import Family, WsatOptions, wsat_exact

    if graph.is_empty():
        raise PreconditionError("eta needs a non-empty pattern")
    s = sparseness(graph)
    if graph.num_edges == 1:
        return BoundReport("eta", Fraction(0), "single edge", status="exact")
    if s == graph.r:
        return BoundReport(
            "eta", Fraction(delta_star(graph) - 1), "delta*(H)-1", status="exact"
        )
    links = _link_family(graph, s, caps)
    family = Family(tuple(links))
    sequence: list[tuple[int, int]] = []
    for n in range(family.max_vertices, n_cap + 1):
        try:
            value = wsat_exact(n, family, WsatOptions(caps=caps)).value
        except CapExceededError as e:
            logger.warning(f"eta sequence stops before n={n}: {e}")
            break
        sequence.append((n, value))
    if not sequence:
        raise CapExceededError(
            "eta link-family search",
            math.comb(family.max_vertices, family.r),
            caps.wsat_edges,
        )
    values = [v for _, v in sequence]
    monotone = all(a >= b for a, b in itertools.pairwise(values))
    status = (
        "upper bound, sequence nonincreasing" if monotone else "sequence not monotone"
    )
    return BoundReport(
        "eta",
        Fraction(values[-1]),
        "wsat(n, {L_H(U) : U in shadow_{s-1}(H)}) at the largest feasible n",
        n=sequence[-1][0],
        witness={
            "sequence": [list(p) for p in sequence],
            "links": [p.to_dict() for p in links],
        },
        status=status,
    )


def eta_bounds(
    graph: Hypergraph, n: int, n_cap: int = 8, caps: Caps = DEFAULT_CAPS
) -> tuple[BoundReport, BoundReport]:
    """eta/C(r,s-1) C(n,s-1) below wsat and the leading term eta C(n,s-1) above."""
    _require_host_size(graph, n)
    s = sparseness(graph)
    if s < 2:
        raise PreconditionError(f"eta bounds need s(H) >= 2, got {s}")
    value = eta(graph, n_cap, caps)
    base = math.comb(n, s - 1)
    lower = BoundReport(
        "eta_lower",
        value.value / math.comb(graph.r, s - 1) * base,
        "eta/C(r,s-1)*C(n,s-1)",
        n=n,
        witness={"eta": format_rational(value.value)},
        status=value.status,
    )
    upper = BoundReport(
        "eta_upper",
        value.value * base,
        "eta*C(n,s-1)",
        n=n,
        witness={"eta": format_rational(value.value)},
        status="leading term only",
    )
    return lower, upper


@dataclass
class ConjectureReport:
    r: int
    s: int
    k: int
    delta: int
    qualifying: int = 0
    skipped: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)
    min_slack: Fraction | None = None
    tightest: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "s": self.s,
            "k": self.k,
            "delta": self.delta,
            "qualifying": self.qualifying,
            "skipped": self.skipped,
            "violations": self.violations,
            "min_slack": (
                format_rational(self.min_slack) if self.min_slack is not None else None
            ),
            "tightest": self.tightest,
        }


def conjecture_probe(
    r: int, s: int, k: int, corpus: Iterable[Hypergraph], caps: Caps = DEFAULT_CAPS
) -> ConjectureReport:
    """Test gamma_{s,H} >= delta/C(r,s-1) - 1/C(k,s-1) with delta = C(k-s+1, r-s+1)."""
    if not r >= s >= 2:
        raise PreconditionError(f"needs r >= s >= 2, got r={r}, s={s}")
    delta = math.comb(k - s + 1, r - s + 1)
    rhs = Fraction(delta, math.comb(r, s - 1)) - Fraction(1, math.comb(k, s - 1))
    report = ConjectureReport(r, s, k, delta)
    for graph in corpus:
        if graph.r != r or graph.is_empty() or sparseness(graph) != s:
            continue
        if delta_m(graph, s - 1) != delta:
            continue
        try:
            gamma = gamma_subgraph(graph, s, caps).value
        except CapExceededError:
            report.skipped += 1
            continue
        report.qualifying += 1
        slack = gamma - rhs
        if slack < 0:
            report.violations.append(
                {"pattern": graph.to_dict(), "gamma": format_rational(gamma)}
            )
        if report.min_slack is None or slack < report.min_slack:
            report.min_slack = slack
            report.tightest = graph.to_dict()
    logger.info(
        f"conjecture probe r={r} s={s} k={k}: {report.qualifying} patterns, "
        f"{len(report.violations)} violations"
    )
    return report


def clique_gap_trend(
    r: int, delta: int, n_values: Iterable[int]
) -> list[dict[str, Any]]:
    """Normalised gap between wsat(n, K^r_{r-1+delta}) and the codegree bound.

    Uses the closed form C(n,r) - C(n-delta+1, r) for the clique.
    """
    rows = []
    for n in n_values:
        exact = math.comb(n, r) - math.comb(n - delta + 1, r)
        bound = delta_star_coefficient(r, delta) * math.comb(n, r - 1)
        rows.append(
            {
                "n": n,
                "wsat": exact,
                "lb_delta_star": bound,
                "normalized_gap": (exact - bound) / math.comb(n, r - 1),
            }
        )
    return rows
