"""Extremal patterns and weakly saturated hosts built from a base hypergraph.

Given G with s(G) = s, delta_{s-1}(G) = delta and a vertex set P whose
(s-1)-subsets all lie in the shadow of G, ``build_construction_H`` returns
the pattern family {G, H_0, ..., H_m} and ``build_saturated_host`` the host
F on [n] whose closure under that family is K_n^r. The edge count of F
grows like (|G~| - 1)/C(|P|, s-1) * C(n, s-1).
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceededError, PreconditionError
from .hypergraph import (
    MAX_VERTICES,
    Edge,
    Hypergraph,
    VertexSubset,
    clique,
    complete_edge_index,
    delta_m,
    disjoint_union,
    shadow,
    sparseness,
    vertex_subset,
)
from .logger import get_logger
from .reports import format_rational
from .wsat_engine import Family

logger = get_logger(__name__)

__all__ = [
    "Construction",
    "CoverDesign",
    "SaturatedHost",
    "build_construction_H",
    "build_saturated_host",
    "clique",
    "corollary_s_arbitrary_G",
    "example_delta_construction",
    "greedy_cover",
    "host_edge_trend",
    "shell_host",
]


@dataclass
class CoverDesign:
    """k-subsets of [n] covering every t-subset."""

    n: int
    k: int
    t: int
    blocks: list[VertexSubset] = field(default_factory=list)

    def uncovered(self) -> list[VertexSubset]:
        covered = {
            sub for b in self.blocks for sub in itertools.combinations(b, self.t)
        }
        every = itertools.combinations(range(self.n), self.t)
        return [a for a in every if a not in covered]

    def is_valid(self) -> bool:
        return all(len(b) == self.k for b in self.blocks) and not self.uncovered()

    @property
    def counting_bound(self) -> int:
        return math.ceil(Fraction(math.comb(self.n, self.t), math.comb(self.k, self.t)))

    @property
    def ratio(self) -> Fraction:
        """|blocks| / (C(n,t)/C(k,t))."""
        return Fraction(
            len(self.blocks) * math.comb(self.k, self.t), math.comb(self.n, self.t)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "t": self.t,
            "blocks": [list(b) for b in self.blocks],
            "ratio": format_rational(self.ratio),
        }


def greedy_cover(n: int, k: int, t: int, caps: Caps = DEFAULT_CAPS) -> CoverDesign:
    """Greedy covering design; each block maximises newly covered t-sets.

    Ties go to the lexicographically least block.
    """
    if not 0 <= t <= k <= n:
        raise PreconditionError(f"need 0 <= t <= k <= n, got t={t}, k={k}, n={n}")
    candidates = list(itertools.combinations(range(n), k))
    if len(candidates) > caps.enumeration:
        raise CapExceededError(
            "cover candidate blocks", len(candidates), caps.enumeration
        )
    position = {a: i for i, a in enumerate(itertools.combinations(range(n), t))}
    masks = [
        sum(1 << position[a] for a in itertools.combinations(b, t)) for b in candidates
    ]
    uncovered = (1 << len(position)) - 1
    design = CoverDesign(n, k, t)
    while uncovered:
        best, gain = 0, -1
        for i, mask in enumerate(masks):
            new = (mask & uncovered).bit_count()
            if new > gain:
                best, gain = i, new
        design.blocks.append(candidates[best])
        uncovered &= ~masks[best]
    if not design.is_valid():
        raise AssertionError(f"greedy cover left {design.uncovered()} uncovered")
    logger.debug(f"greedy_cover({n},{k},{t}): {len(design.blocks)} blocks")
    return design


@dataclass
class Construction:
    """The pattern family {G, H_0, ..., H_m} of the upper-bound construction."""

    base: Hypergraph
    P: VertexSubset
    s: int
    delta: int
    g_tilde: tuple[Edge, ...]
    e_tilde: Edge
    stages: tuple[Hypergraph, ...]

    @property
    def h0(self) -> Hypergraph:
        return self.stages[0]

    @property
    def parts(self) -> tuple[Hypergraph, ...]:
        return (self.base, *self.stages)

    @property
    def family(self) -> Family:
        return Family(self.parts)

    @property
    def coefficient(self) -> Fraction:
        """(|G~| - 1) / C(|P|, s-1)."""
        return Fraction(len(self.g_tilde) - 1, math.comb(len(self.P), self.s - 1))

    def union(self) -> Hypergraph | None:
        """The disjoint union of all parts, when it fits the vertex cap."""
        if sum(p.n for p in self.parts) > MAX_VERTICES:
            return None
        return disjoint_union(self.parts, label="construction H")

    def to_dict(self) -> dict[str, Any]:
        return {
            "base": self.base.to_dict(),
            "P": list(self.P),
            "s": self.s,
            "delta": self.delta,
            "g_tilde_edges": len(self.g_tilde),
            "e_tilde": list(self.e_tilde),
            "stages": len(self.stages),
            "h0": self.h0.to_dict(),
            "coefficient": format_rational(self.coefficient),
        }


def _check_parts(parts: tuple[Hypergraph, ...], s: int, delta: int) -> None:
    # s and delta_m (m >= 1) of a disjoint union are minima over its parts
    union_s = min(sparseness(p) for p in parts)
    union_delta = min(delta_m(p, s - 1) for p in parts) if s >= 2 else None
    if union_s != s or union_delta != delta:
        raise AssertionError(
            f"construction has s={union_s}, delta_{s - 1}={union_delta}; "
            f"expected s={s}, delta={delta}"
        )


def build_construction_H(
    base: Hypergraph, P: Any, caps: Caps = DEFAULT_CAPS
) -> Construction:
    """Pattern family of the upper-bound construction for (G, P).

    H_0 lives on V(G) plus a disjoint copy W; its edges are the edges of G
    meeting P in at least s-1 vertices and every r-set meeting P in at most
    s-2 vertices. H_i adds the first i missing edges of H_0 in lex order.
    """
    P = vertex_subset(P)
    if base.is_empty():
        raise PreconditionError("base hypergraph must be non-empty")
    s = sparseness(base)
    if s < 2:
        raise PreconditionError(f"base needs s(G) >= 2, got {s}")
    delta = delta_m(base, s - 1)
    if delta < 2:
        raise PreconditionError(f"base needs delta_(s-1)(G) >= 2, got {delta}")
    if len(P) < s - 1:
        raise PreconditionError(f"|P|={len(P)} is smaller than s-1={s - 1}", witness=P)
    if P and P[-1] >= base.n:
        raise PreconditionError(f"P={P} is not inside V(G)", witness=P)
    level = set(shadow(base, s - 1))
    for sub in itertools.combinations(P, s - 1):
        if sub not in level:
            raise PreconditionError(
                f"(s-1)-set {sub} of P is missing from the shadow of G", witness=sub
            )
    size = 2 * base.n
    if size > caps.construction_vertices:
        raise CapExceededError(
            "construction H_0 vertices", size, caps.construction_vertices
        )

    members = set(P)
    g_tilde = tuple(e for e in base.edges if len(members.intersection(e)) >= s - 1)
    filler = [
        e
        for e in complete_edge_index(size, base.r).edges
        if len(members.intersection(e)) <= s - 2
    ]
    h0 = Hypergraph(size, base.r, g_tilde + tuple(filler), "H_0")
    missing = [
        e for e in complete_edge_index(size, base.r).edges if e not in h0.edge_set
    ]
    stages = tuple(
        h0.with_edges(h0.edges + tuple(missing[:i])).with_label(f"H_{i}")
        for i in range(len(missing) + 1)
    )
    construction = Construction(base, P, s, delta, g_tilde, g_tilde[0], stages)
    _check_parts(construction.parts, s, delta)
    logger.info(
        f"construction for {base.label or 'G'}: {len(stages)} stages, "
        f"coefficient {format_rational(construction.coefficient)}"
    )
    return construction


def example_delta_construction(
    r: int, delta: int, caps: Caps = DEFAULT_CAPS
) -> Construction:
    """G = K^r_{r+delta-1} with P = V(G)."""
    if r < 2 or delta < 2:
        raise PreconditionError(
            f"needs r >= 2 and delta >= 2, got r={r}, delta={delta}"
        )
    base = clique(r + delta - 1, r)
    return build_construction_H(base, range(base.n), caps)


def corollary_s_arbitrary_G(r: int, s: int, k: int) -> tuple[Hypergraph, VertexSubset]:
    """Base G on A, B, C with s(G) = s and delta_{s-1}(G) = C(k-s+1, r-s+1).

    |A| = |C| = k, |B| = s, W is the first r-s vertices of C; returns (G, A).
    """
    if not r >= s >= 2:
        raise PreconditionError(f"needs r >= s >= 2, got r={r}, s={s}")
    if k < r + 1:
        raise PreconditionError(f"needs k >= r+1, got k={k}, r={r}")
    n = 2 * k + s
    A = set(range(k))
    B = set(range(k, k + s))
    W = tuple(range(k + s, k + s + r - s))
    edges: set[Edge] = set(itertools.combinations(range(k), r))
    edges.add(tuple(sorted(B)) + W)
    for e in complete_edge_index(n, r).edges:
        if len(A.intersection(e)) <= s - 2 and len(B.intersection(e)) <= s - 1:
            edges.add(e)
    graph = Hypergraph(n, r, tuple(edges), f"G(r={r},s={s},k={k})")
    expected = math.comb(k - s + 1, r - s + 1)
    if sparseness(graph) != s:
        raise AssertionError(f"built G has s={sparseness(graph)}, expected {s}")
    if len(shadow(graph, s - 1)) != math.comb(n, s - 1):
        raise AssertionError("built G has an incomplete (s-1)-shadow")
    if delta_m(graph, s - 1) != expected:
        raise AssertionError(
            f"built G has delta_{s - 1}={delta_m(graph, s - 1)}, expected {expected}"
        )
    return graph, tuple(range(k))


@dataclass
class SaturatedHost:
    host: Hypergraph
    construction: Construction
    Z: VertexSubset
    cover: CoverDesign

    @property
    def n(self) -> int:
        return self.host.n

    @property
    def target(self) -> Hypergraph:
        return clique(self.host.n, self.host.r)

    @property
    def leading_term(self) -> Fraction:
        s = self.construction.s
        return self.construction.coefficient * math.comb(self.n, s - 1)

    @property
    def measured_coefficient(self) -> Fraction:
        return Fraction(self.host.num_edges, math.comb(self.n, self.construction.s - 1))

    @property
    def lower_order_constant(self) -> Fraction:
        """c with |E(F)| = coefficient * C(n, s-1) + c * n^(s-2)."""
        scale = self.n ** (self.construction.s - 2)
        return (self.host.num_edges - self.leading_term) / scale

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "host": self.host.to_dict(),
            "Z": list(self.Z),
            "blocks": len(self.cover.blocks),
            "edges": self.host.num_edges,
            "coefficient": format_rational(self.construction.coefficient),
            "measured": format_rational(self.measured_coefficient),
            "lower_order_constant": format_rational(self.lower_order_constant),
        }


def build_saturated_host(
    construction: Construction, n: int, caps: Caps = DEFAULT_CAPS
) -> SaturatedHost:
    """Host F on [n] weakly saturated for the construction's family.

    Z is the first |V(H_0)| - |P| vertices. F holds every edge with at most
    s-2 vertices outside Z, and for each cover block X a copy of H_0 minus
    e~ on X + Z with P sent onto X and the rest of H_0 onto Z.
    """
    h0 = construction.h0
    if n < h0.n:
        raise PreconditionError(f"n={n} is smaller than |V(H_0)|={h0.n}")
    s, P = construction.s, construction.P
    z_size = h0.n - len(P)
    Z = tuple(range(z_size))
    outside = list(range(z_size, n))
    cover = greedy_cover(len(outside), len(P), s - 1, caps)
    rest = [v for v in range(h0.n) if v not in set(P)]
    z_set = set(Z)
    edges: set[Edge] = {
        e
        for e in complete_edge_index(n, h0.r).edges
        if sum(1 for v in e if v not in z_set) <= s - 2
    }
    kept = [e for e in h0.edges if e != construction.e_tilde]
    for block in cover.blocks:
        image = dict(zip(P, (outside[i] for i in block)))
        image.update(zip(rest, Z))
        edges.update(tuple(sorted(image[v] for v in e)) for e in kept)
    host = Hypergraph(n, h0.r, tuple(edges), f"F(n={n})")
    result = SaturatedHost(host, construction, Z, cover)
    logger.info(
        f"saturated host n={n}: {host.num_edges} edges, {len(cover.blocks)} blocks, "
        f"measured {format_rational(result.measured_coefficient)}"
    )
    return result


def host_edge_trend(
    construction: Construction, n_values: list[int], caps: Caps = DEFAULT_CAPS
) -> list[dict[str, Any]]:
    """|E(F)| against coefficient * C(n, s-1) for each n."""
    rows = []
    for n in n_values:
        host = build_saturated_host(construction, n, caps)
        rows.append(
            {
                "n": n,
                "edges": host.host.num_edges,
                "leading_term": host.leading_term,
                "measured": host.measured_coefficient,
                "lower_order_constant": host.lower_order_constant,
            }
        )
    return rows


def shell_host(
    n: int,
    r: int,
    s: int,
    z_size: int,
    base: Hypergraph | None = None,
    pattern: Hypergraph | None = None,
) -> Hypergraph:
    """base plus every r-set with at most s-1 vertices outside Z = [z_size]."""
    if not 0 <= z_size <= n:
        raise PreconditionError(f"z_size={z_size} outside [0, {n}]")
    if pattern is not None and z_size < len(pattern.vertices()) - s:
        raise PreconditionError(
            f"z_size={z_size} is below |V(H)|-s={len(pattern.vertices()) - s}"
        )
    if base is not None and (base.n != n or base.r != r):
        raise PreconditionError("base must live on the same [n] with the same r")
    edges = {
        e
        for e in complete_edge_index(n, r).edges
        if sum(1 for v in e if v >= z_size) <= s - 1
    }
    if base is not None:
        edges.update(base.edges)
    return Hypergraph(n, r, tuple(edges), f"shell(n={n},Z={z_size})")
