"""Uniform hypergraphs and their basic invariants.

Vertices are the integers 0..n-1. Edges are stored as sorted vertex tuples in
lexicographic order, so two hypergraphs with the same edges compare and
serialise identically.
"""

import itertools
import json
import math
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Any

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceededError, HypergraphFormatError, PreconditionError
from .logger import get_logger

logger = get_logger(__name__)

MAX_VERTICES = 64

Edge = tuple[int, ...]
VertexSubset = tuple[int, ...]


def vertex_subset(members: Iterable[int]) -> VertexSubset:
    """Normalise a collection of distinct vertices to a sorted tuple."""
    items = list(members)
    result = tuple(sorted(set(items)))
    if len(result) != len(items):
        raise PreconditionError(f"vertex subset has repeated members: {items}")
    if any(v < 0 for v in result):
        raise PreconditionError(f"negative vertex in {items}")
    return result


@dataclass(frozen=True)
class Hypergraph:
    """An r-uniform hypergraph on the vertex set [n].

    ``label`` is informational and excluded from equality and hashing.
    r = 0 is allowed only for the links of r-sets (edge set {()} or empty).
    """

    n: int
    r: int
    edges: tuple[Edge, ...] = ()
    label: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.r < 0:
            raise PreconditionError(f"uniformity must be >= 0, got {self.r}")
        if self.n < 0:
            raise PreconditionError(f"vertex count must be >= 0, got {self.n}")
        if self.n > MAX_VERTICES:
            raise CapExceededError("vertex count", self.n, MAX_VERTICES)
        canonical = set()
        for raw in self.edges:
            edge = tuple(sorted(raw))
            if len(edge) != self.r or len(set(edge)) != self.r:
                raise PreconditionError(
                    f"edge {tuple(raw)} is not a set of {self.r} distinct vertices"
                )
            if edge and (edge[0] < 0 or edge[-1] >= self.n):
                raise PreconditionError(f"edge {edge} has a vertex outside [{self.n}]")
            canonical.add(edge)
        object.__setattr__(self, "edges", tuple(sorted(canonical)))

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def is_empty(self) -> bool:
        return not self.edges

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def vertices(self) -> VertexSubset:
        """Vertices lying in at least one edge."""
        return tuple(sorted({v for e in self.edges for v in e}))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def has_isolated_vertices(self) -> bool:
        return len(self.vertices()) < self.n

    def compact(self) -> "Hypergraph":
        """Relabel onto [|V|] where V is the union of the edges."""
        verts = self.vertices()
        index = {v: i for i, v in enumerate(verts)}
        return Hypergraph(
            len(verts),
            self.r,
            tuple(tuple(index[v] for v in e) for e in self.edges),
            self.label,
        )

    def relabel(self, mapping: Sequence[int] | dict[int, int], n: int) -> "Hypergraph":
        """Image under an injective vertex map into [n]."""
        edges = tuple(tuple(mapping[v] for v in e) for e in self.edges)
        return Hypergraph(n, self.r, edges, self.label)

    def with_edges(self, edges: Iterable[Edge]) -> "Hypergraph":
        return Hypergraph(self.n, self.r, tuple(edges), self.label)

    def with_label(self, label: str | None) -> "Hypergraph":
        return Hypergraph(self.n, self.r, self.edges, label)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "n": self.n,
            "r": self.r,
            "edges": [list(e) for e in self.edges],
        }
        if self.label is not None:
            data["label"] = self.label
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Any) -> "Hypergraph":
        """Strict loader: edges must already be in canonical form."""
        if not isinstance(data, dict):
            raise HypergraphFormatError("hypergraph JSON must be an object")
        unknown = set(data) - {"n", "r", "edges", "label"}
        if unknown:
            raise HypergraphFormatError(f"unknown keys: {sorted(unknown)}")
        try:
            n, r, raw_edges = data["n"], data["r"], data["edges"]
        except KeyError as e:
            raise HypergraphFormatError(f"missing key {e.args[0]!r}") from e
        if not isinstance(n, int) or not isinstance(r, int) or r < 1:
            raise HypergraphFormatError("n and r must be integers with r >= 1")
        if not isinstance(raw_edges, list):
            raise HypergraphFormatError("edges must be a list")
        edges: list[Edge] = []
        for i, raw in enumerate(raw_edges):
            if not isinstance(raw, list) or not all(isinstance(v, int) for v in raw):
                raise HypergraphFormatError(f"edge #{i} is not a list of integers")
            edge = tuple(raw)
            if list(edge) != sorted(set(edge)):
                raise HypergraphFormatError(f"edge #{i} {raw} is not sorted ascending")
            if edges and edge <= edges[-1]:
                raise HypergraphFormatError(
                    f"edge #{i} {raw} breaks the canonical edge order"
                )
            edges.append(edge)
        label = data.get("label")
        if label is not None and not isinstance(label, str):
            raise HypergraphFormatError("label must be a string")
        try:
            return cls(n, r, tuple(edges), label)
        except PreconditionError as e:
            raise HypergraphFormatError(str(e)) from e

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise HypergraphFormatError(e.msg, line=e.lineno) from e
        return cls.from_dict(data)


def load_hypergraph(path: str | Path) -> Hypergraph:
    path = Path(path)
    graph = Hypergraph.from_json(path.read_text())
    if graph.label is None:
        graph = graph.with_label(path.stem)
    logger.debug(f"Loaded {graph.label}: n={graph.n} r={graph.r} e={graph.num_edges}")
    return graph


@dataclass(frozen=True)
class MultiEdgeSet:
    """Edges of K_n^r with multiplicities in [1, q]."""

    base_n: int
    base_r: int
    q: int
    entries: tuple[tuple[Edge, int], ...] = ()

    def __post_init__(self) -> None:
        if self.q < 1:
            raise PreconditionError(f"multiplicity cap q must be >= 1, got {self.q}")
        merged: dict[Edge, int] = {}
        for raw, mult in self.entries:
            edge = tuple(sorted(raw))
            if edge in merged:
                raise PreconditionError(f"edge {edge} listed twice")
            if not 1 <= mult <= self.q:
                raise PreconditionError(
                    f"multiplicity {mult} of {edge} outside [1, {self.q}]"
                )
            merged[edge] = mult
        object.__setattr__(self, "entries", tuple(sorted(merged.items())))
        # validates the underlying edges
        self.projection()

    @classmethod
    def from_hypergraph(cls, graph: Hypergraph, q: int) -> "MultiEdgeSet":
        """G^(q): every edge of G with multiplicity q."""
        return cls(graph.n, graph.r, q, tuple((e, q) for e in graph.edges))

    def projection(self) -> Hypergraph:
        """pi: the underlying hypergraph."""
        return Hypergraph(self.base_n, self.base_r, tuple(e for e, _ in self.entries))

    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity(self, edge: Edge) -> int:
        return dict(self.entries).get(tuple(sorted(edge)), 0)

    def elements(self) -> list[tuple[Edge, int]]:
        """Every element (edge, copy index) with copy index in [0, mult)."""
        return [(e, i) for e, m in self.entries for i in range(m)]


@dataclass(frozen=True)
class EdgeIndex:
    """Lexicographic indexing of the edges of K_n^r, for bitmask edge sets."""

    n: int
    r: int
    edges: tuple[Edge, ...]
    index: dict[Edge, int]

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.edges)) - 1

    def mask_of(self, edges: Iterable[Edge]) -> int:
        mask = 0
        for e in edges:
            mask |= 1 << self.index[tuple(sorted(e))]
        return mask

    def edges_of(self, mask: int) -> tuple[Edge, ...]:
        return tuple(self.edges[i] for i in iter_bits(mask))

    def hypergraph(self, mask: int, label: str | None = None) -> Hypergraph:
        return Hypergraph(self.n, self.r, self.edges_of(mask), label)

    def permutation_map(self, perm: Sequence[int]) -> tuple[int, ...]:
        """Edge-index image of every edge under a vertex permutation."""
        return tuple(
            self.index[tuple(sorted(perm[v] for v in e))] for e in self.edges
        )


@lru_cache(maxsize=256)
def complete_edge_index(n: int, r: int) -> EdgeIndex:
    edges = tuple(itertools.combinations(range(n), r))
    return EdgeIndex(n, r, edges, {e: i for i, e in enumerate(edges)})


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def permute_mask(mask: int, edge_map: Sequence[int]) -> int:
    out = 0
    for i in iter_bits(mask):
        out |= 1 << edge_map[i]
    return out


def clique(n: int, r: int, label: str | None = None) -> Hypergraph:
    """K_n^r."""
    if r < 1:
        raise PreconditionError("clique uniformity must be >= 1")
    return Hypergraph(
        n, r, complete_edge_index(n, r).edges, label or f"K_{n}^{r}"
    )


def shadow(graph: Hypergraph, m: int) -> tuple[VertexSubset, ...]:
    """The m-subsets contained in at least one edge, in canonical order."""
    if not 0 <= m <= graph.r:
        raise PreconditionError(f"shadow level m={m} outside [0, {graph.r}]")
    return tuple(
        sorted({sub for e in graph.edges for sub in itertools.combinations(e, m)})
    )


def shadow_size(graph: Hypergraph, m: int) -> int:
    return len(shadow(graph, m))


def link(graph: Hypergraph, subset: Iterable[int]) -> Hypergraph:
    """L_G(U) = {e - U : U subset of e}, an (r - |U|)-uniform hypergraph on [n]."""
    u = vertex_subset(subset)
    if len(u) > graph.r:
        raise PreconditionError(
            f"|U| = {len(u)} exceeds the uniformity {graph.r}", witness=u
        )
    if u and u[-1] >= graph.n:
        raise PreconditionError(f"U = {u} is not a subset of [{graph.n}]", witness=u)
    us = set(u)
    residues = tuple(
        tuple(v for v in e if v not in us) for e in graph.edges if us.issubset(e)
    )
    return Hypergraph(graph.n, graph.r - len(u), residues)


def link_counts(graph: Hypergraph, m: int) -> Counter[VertexSubset]:
    """|L_G(U)| for every m-subset U with a non-empty link."""
    counts: Counter[VertexSubset] = Counter()
    for e in graph.edges:
        counts.update(itertools.combinations(e, m))
    return counts


def delta_m(graph: Hypergraph, m: int) -> int:
    """Minimum positive link size over m-subsets; -1 for the empty hypergraph."""
    if not 0 <= m <= graph.r:
        raise PreconditionError(f"delta level m={m} outside [0, {graph.r}]")
    if graph.is_empty():
        return -1
    return min(link_counts(graph, m).values())


def delta_star(graph: Hypergraph) -> int:
    """Minimum positive codegree; 0 for the empty hypergraph."""
    if graph.is_empty():
        return 0
    return delta_m(graph, graph.r - 1)


def sparseness(graph: Hypergraph) -> int:
    """s(H): least m with delta_m(H) = 1; -1 for the empty hypergraph."""
    if graph.is_empty():
        return -1
    for m in range(graph.r + 1):
        if delta_m(graph, m) == 1:
            return m
    raise AssertionError("delta_r is always 1 for a non-empty hypergraph")


def sparseness_by_subsets(graph: Hypergraph) -> int:
    """s(H) straight from the definition: smallest S inside exactly one edge."""
    if graph.is_empty():
        return -1
    verts = graph.vertices()
    edge_sets = [frozenset(e) for e in graph.edges]
    for size in range(len(verts) + 1):
        for subset in itertools.combinations(verts, size):
            s = frozenset(subset)
            if sum(1 for e in edge_sets if s <= e) == 1:
                return size
    raise AssertionError("an edge itself lies in exactly one edge")


def f_r_delta(graph: Hypergraph, delta: int) -> int:
    """delta * |shadow_{r-1}(G)| - r * |E(G)|."""
    if delta < 1:
        raise PreconditionError(f"delta must be >= 1, got {delta}")
    closed = delta * shadow_size(graph, graph.r - 1) - graph.r * graph.num_edges
    per_shadow = sum(delta - c for c in link_counts(graph, graph.r - 1).values())
    assert closed == per_shadow, "double counting identity violated"
    return closed


def disjoint_union(parts: Sequence[Hypergraph], label: str | None = None) -> Hypergraph:
    """Vertex-disjoint union; part i occupies the next block of vertices."""
    if not parts:
        raise PreconditionError("disjoint union of an empty list")
    r = parts[0].r
    if any(p.r != r for p in parts):
        raise PreconditionError(
            f"mixed uniformities {sorted({p.r for p in parts})} in disjoint union"
        )
    edges: list[Edge] = []
    offset = 0
    for part in parts:
        edges.extend(tuple(v + offset for v in e) for e in part.edges)
        offset += part.n
    return Hypergraph(offset, r, tuple(edges), label)


def canonical_key(graph: Hypergraph, caps: Caps = DEFAULT_CAPS) -> tuple[int, int, int]:
    """Isomorphism-invariant key by exhaustive permutation minimisation."""
    if graph.n > caps.canon_vertices:
        raise CapExceededError(
            "canonical labelling vertices", graph.n, caps.canon_vertices
        )
    index = complete_edge_index(graph.n, graph.r)
    mask = index.mask_of(graph.edges)
    best = mask
    for edge_map in _permutation_maps(graph.n, graph.r):
        image = permute_mask(mask, edge_map)
        if image < best:
            best = image
    return (graph.n, graph.r, best)


def canonical_form(graph: Hypergraph, caps: Caps = DEFAULT_CAPS) -> Hypergraph:
    n, r, mask = canonical_key(graph, caps)
    return complete_edge_index(n, r).hypergraph(mask, graph.label)


def _permutation_maps(n: int, r: int) -> Iterable[tuple[int, ...]]:
    if n <= 7:
        return _cached_permutation_maps(n, r)
    index = complete_edge_index(n, r)
    return (index.permutation_map(p) for p in itertools.permutations(range(n)))


@lru_cache(maxsize=32)
def _cached_permutation_maps(n: int, r: int) -> tuple[tuple[int, ...], ...]:
    index = complete_edge_index(n, r)
    return tuple(index.permutation_map(p) for p in itertools.permutations(range(n)))


def enumerate_hypergraphs(
    n: int,
    r: int,
    e: int,
    up_to_isomorphism: bool = False,
    caps: Caps = DEFAULT_CAPS,
) -> Iterator[Hypergraph]:
    """Every e-edge r-uniform hypergraph on [n], optionally one per iso class."""
    total = math.comb(n, r)
    if not 0 <= e <= total:
        raise PreconditionError(f"e={e} outside [0, C({n},{r})={total}]")
    estimate = math.comb(total, e)
    if estimate > caps.enumeration:
        raise CapExceededError(
            f"enumeration of C({total},{e}) hypergraphs", estimate, caps.enumeration
        )
    index = complete_edge_index(n, r)
    seen: set[tuple[int, int, int]] = set()
    for combo in itertools.combinations(index.edges, e):
        graph = Hypergraph(n, r, combo)
        if up_to_isomorphism:
            key = canonical_key(graph, caps)
            if key in seen:
                continue
            seen.add(key)
        yield graph


@dataclass(frozen=True)
class Copy:
    """A copy of a pattern inside K_n^r.

    ``mask`` is the copy's edge set over complete_edge_index(n, r);
    ``embedding[v]`` is the image of pattern vertex v, -1 when v is isolated.
    """

    mask: int
    embedding: tuple[int, ...]

    def edges(self, n: int, r: int) -> tuple[Edge, ...]:
        return complete_edge_index(n, r).edges_of(self.mask)


@lru_cache(maxsize=512)
def copies_in_clique(pattern: Hypergraph, n: int) -> tuple[Copy, ...]:
    """Every copy of ``pattern`` in K_n^r, one per image edge set.

    Copies come in the order their first embedding appears when injective
    maps are listed lexicographically.
    """
    verts = pattern.vertices()
    if not pattern.edges or len(verts) > n:
        return ()
    index = complete_edge_index(n, pattern.r)
    position = {v: i for i, v in enumerate(verts)}
    local_edges = [tuple(position[v] for v in e) for e in pattern.edges]
    seen: set[int] = set()
    found: list[Copy] = []
    for image in itertools.permutations(range(n), len(verts)):
        mask = 0
        for e in local_edges:
            mask |= 1 << index.index[tuple(sorted(image[i] for i in e))]
        if mask in seen:
            continue
        seen.add(mask)
        embedding = [-1] * pattern.n
        for v, i in position.items():
            embedding[v] = image[i]
        found.append(Copy(mask, tuple(embedding)))
    name = pattern.label or "pattern"
    logger.debug(f"{len(found)} copies of {name} in K_{n}^{pattern.r}")
    return tuple(found)
