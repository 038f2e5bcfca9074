"""Weak saturation: bootstrap closure, copy search and exact wsat(n, H).

Closure is computed greedily. The process is monotone: if adding e to G
creates a new copy of a pattern and G is contained in G' with e missing from
G', then adding e to G' creates that same copy. Hence any edge addable at
some point stays addable until it is added, every maximal greedy run ends in
the same hypergraph, and F is weakly saturated iff its greedy closure is
K_n^r. No search over addition orders is needed.
"""

import itertools
import math
import random
import threading
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Literal

from .bounds import family_lower_bound
from .config import DEFAULT_CAPS, Caps
from .errors import CapExceededError, PreconditionError
from .hypergraph import (
    Edge,
    Hypergraph,
    complete_edge_index,
    copies_in_clique,
    delta_m,
    disjoint_union,
    iter_bits,
    permute_mask,
)
from .logger import get_logger

logger = get_logger(__name__)

SymmetryMode = Literal["none", "generators", "full"]

FULL_SYMMETRY_EDGES = 16
COPY_TABLE_LIMIT = 250_000


@dataclass(frozen=True)
class Family:
    """Non-empty patterns of a common uniformity."""

    patterns: tuple[Hypergraph, ...]

    def __post_init__(self) -> None:
        if not self.patterns:
            raise PreconditionError("a family needs at least one pattern")
        if any(p.is_empty() for p in self.patterns):
            raise PreconditionError("family patterns must be non-empty")
        if len({p.r for p in self.patterns}) != 1:
            raise PreconditionError(
                f"mixed uniformities {sorted({p.r for p in self.patterns})} in family"
            )

    @classmethod
    def of(cls, *patterns: Hypergraph) -> "Family":
        return cls(tuple(patterns))

    @property
    def r(self) -> int:
        return self.patterns[0].r

    @property
    def max_vertices(self) -> int:
        return max(len(p.vertices()) for p in self.patterns)

    @property
    def label(self) -> str:
        return "+".join(p.label or f"H{i}" for i, p in enumerate(self.patterns))

    def min_delta(self, m: int) -> int:
        return min(delta_m(p, m) for p in self.patterns)


def as_family(patterns: Hypergraph | Family) -> Family:
    return patterns if isinstance(patterns, Family) else Family.of(patterns)


@dataclass(frozen=True)
class CertificateStep:
    edge: Edge
    pattern_index: int
    embedding: tuple[int, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "edge": list(self.edge),
            "pattern": self.pattern_index,
            "embedding": list(self.embedding),
        }


@dataclass
class SaturationCertificate:
    """Initial edge set plus the ordered additions of a closure run."""

    initial: Hypergraph
    steps: list[CertificateStep] = field(default_factory=list)

    def replay(self, family: Family) -> Hypergraph:
        """Re-run the additions, checking every witness; returns the end state."""
        present = set(self.initial.edges)
        n = self.initial.n
        for number, step in enumerate(self.steps):
            if step.edge in present:
                raise PreconditionError(f"step {number}: {step.edge} already present")
            if not 0 <= step.pattern_index < len(family.patterns):
                raise PreconditionError(f"step {number}: unknown pattern index")
            pattern = family.patterns[step.pattern_index]
            images = [step.embedding[v] for v in pattern.vertices()]
            if len(set(images)) != len(images) or not all(0 <= w < n for w in images):
                raise PreconditionError(
                    f"step {number}: embedding is not injective into [{n}]"
                )
            copy_edges = {
                tuple(sorted(step.embedding[v] for v in e)) for e in pattern.edges
            }
            if step.edge not in copy_edges:
                raise PreconditionError(f"step {number}: copy misses {step.edge}")
            absent = copy_edges - present - {step.edge}
            if absent:
                raise PreconditionError(
                    f"step {number}: copy edges {sorted(absent)} not yet present",
                    witness=sorted(absent),
                )
            present.add(step.edge)
        return Hypergraph(n, self.initial.r, tuple(present))

    def is_valid(self, family: Family) -> bool:
        try:
            self.replay(family)
        except PreconditionError:
            return False
        return True

    def to_dict(self) -> dict[str, Any]:
        return {
            "initial": self.initial.to_dict(),
            "steps": [s.to_dict() for s in self.steps],
        }


@dataclass
class ClosureResult:
    closure: Hypergraph
    certificate: SaturationCertificate

    @property
    def saturated(self) -> bool:
        return self.closure.num_edges == math.comb(self.closure.n, self.closure.r)


def creates_new_copy(
    host: Hypergraph, pattern: Hypergraph, edge: Edge
) -> tuple[int, ...] | None:
    """An embedding of ``pattern`` into host + edge using ``edge``, or None.

    Backtracking: one pattern edge is sent onto ``edge`` in every vertex
    order, then the other vertices are placed highest pattern degree first,
    checking each pattern edge as soon as all its vertices are placed.
    """
    e = tuple(sorted(edge))
    if pattern.r != host.r or len(e) != host.r:
        raise PreconditionError("edge, host and pattern must share the uniformity")
    if e in host.edge_set:
        raise PreconditionError(f"{e} is already an edge of the host", witness=e)
    if e and (e[0] < 0 or e[-1] >= host.n):
        raise PreconditionError(f"{e} is not inside [{host.n}]", witness=e)
    verts = pattern.vertices()
    if not pattern.edges or len(verts) > host.n:
        return None

    host_edges = host.edge_set
    host_degree = [0] * host.n
    for g in host.edges:
        for w in g:
            host_degree[w] += 1
    for w in e:
        host_degree[w] += 1
    pattern_degree = {v: pattern.degree(v) for v in verts}
    incident = {v: [g for g in pattern.edges if v in g] for v in verts}

    def extend(phi: dict[int, int], used: set[int], order: list[int], idx: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        for w in range(host.n):
            if w in used or host_degree[w] < pattern_degree[v]:
                continue
            phi[v] = w
            ok = True
            for g in incident[v]:
                if all(u in phi for u in g):
                    if tuple(sorted(phi[u] for u in g)) not in host_edges:
                        ok = False
                        break
            if ok:
                used.add(w)
                if extend(phi, used, order, idx + 1):
                    return True
                used.discard(w)
            del phi[v]
        return False

    for f in pattern.edges:
        rest = sorted(
            (v for v in verts if v not in f), key=lambda v: (-pattern_degree[v], v)
        )
        for image in itertools.permutations(e):
            phi = dict(zip(f, image, strict=True))
            if any(pattern_degree[v] > host_degree[w] for v, w in phi.items()):
                continue
            if extend(phi, set(image), rest, 0):
                embedding = [-1] * pattern.n
                for v, w in phi.items():
                    embedding[v] = w
                return tuple(embedding)
    return None


class CopyTable:
    """All pattern copies in K_n^r as edge bitmasks, deduplicated by edge set."""

    def __init__(self, n: int, family: Family):
        self.n = n
        self.family = family
        self.index = complete_edge_index(n, family.r)
        self.full = self.index.full_mask
        self.masks: list[int] = []
        self.owners: list[tuple[int, tuple[int, ...]]] = []
        seen: set[int] = set()
        for i, pattern in enumerate(family.patterns):
            for copy in copies_in_clique(pattern, n):
                if copy.mask in seen:
                    continue
                seen.add(copy.mask)
                self.masks.append(copy.mask)
                self.owners.append((i, copy.embedding))
        self.edge_copies: list[list[int]] = [[] for _ in range(self.index.size)]
        for c, mask in enumerate(self.masks):
            for j in iter_bits(mask):
                self.edge_copies[j].append(c)

    def __len__(self) -> int:
        return len(self.masks)

    def closure_mask(self, start: int) -> int:
        """Greedy closure of an edge bitmask, stopping early at K_n^r."""
        present = start
        masks = self.masks
        missing = [(m & ~present).bit_count() for m in masks]
        queue = [c for c, k in enumerate(missing) if k == 1]
        edge_copies = self.edge_copies
        full = self.full
        while queue:
            c = queue.pop()
            new = masks[c] & ~present
            if not new:
                continue
            present |= new
            if present == full:
                return present
            for d in edge_copies[new.bit_length() - 1]:
                missing[d] -= 1
                if missing[d] == 1:
                    queue.append(d)
        return present

    def closure_steps(
        self, start: int, rng: random.Random | None = None
    ) -> tuple[int, list[CertificateStep]]:
        """Greedy closure recording each addition; ``rng`` randomises the order."""
        present = start
        missing = [(m & ~present).bit_count() for m in self.masks]
        ready = [c for c, k in enumerate(missing) if k == 1]
        if rng is not None:
            rng.shuffle(ready)
        queue: deque[int] = deque(ready)
        steps: list[CertificateStep] = []
        while queue:
            if rng is not None:
                pick = rng.randrange(len(queue))
                queue.rotate(-pick)
            c = queue.popleft()
            new = self.masks[c] & ~present
            if not new:
                continue
            present |= new
            j = new.bit_length() - 1
            pattern_index, embedding = self.owners[c]
            steps.append(CertificateStep(self.index.edges[j], pattern_index, embedding))
            for d in self.edge_copies[j]:
                missing[d] -= 1
                if missing[d] == 1:
                    queue.append(d)
        return present, steps


@lru_cache(maxsize=64)
def copy_table(n: int, family: Family) -> CopyTable:
    table = CopyTable(n, family)
    logger.debug(f"copy table for {family.label} at n={n}: {len(table)} copies")
    return table


def copy_table_estimate(n: int, family: Family) -> int:
    """Number of injective maps the copy table would enumerate."""
    return sum(math.perm(n, len(p.vertices())) for p in family.patterns)


def _closure_by_search(
    graph: Hypergraph, family: Family, rng: random.Random | None
) -> ClosureResult:
    present = set(graph.edges)
    certificate = SaturationCertificate(graph)
    all_edges = complete_edge_index(graph.n, graph.r).edges
    changed = True
    while changed:
        changed = False
        missing = [e for e in all_edges if e not in present]
        if rng is not None:
            rng.shuffle(missing)
        for e in missing:
            current = Hypergraph(graph.n, graph.r, tuple(present))
            for i, pattern in enumerate(family.patterns):
                embedding = creates_new_copy(current, pattern, e)
                if embedding is not None:
                    present.add(e)
                    certificate.steps.append(CertificateStep(e, i, embedding))
                    changed = True
                    break
    closed = Hypergraph(graph.n, graph.r, tuple(present), graph.label)
    return ClosureResult(closed, certificate)


def closure(
    graph: Hypergraph,
    family: Hypergraph | Family,
    seed: int | None = None,
    method: Literal["auto", "table", "search"] = "auto",
) -> ClosureResult:
    """Greedy weak-saturation closure with a replayable certificate.

    ``seed`` shuffles the order in which addable edges are taken; the final
    hypergraph never depends on it. ``method`` picks between the bitmask copy
    table and per-edge backtracking.
    """
    fam = as_family(family)
    if fam.r != graph.r:
        raise PreconditionError(f"host r={graph.r} differs from family r={fam.r}")
    rng = random.Random(seed) if seed is not None else None
    if method == "auto":
        small = copy_table_estimate(graph.n, fam) <= COPY_TABLE_LIMIT
        method = "table" if small else "search"
    if method == "search":
        result = _closure_by_search(graph, fam, rng)
    else:
        table = copy_table(graph.n, fam)
        final, steps = table.closure_steps(table.index.mask_of(graph.edges), rng)
        result = ClosureResult(
            table.index.hypergraph(final, graph.label),
            SaturationCertificate(graph, steps),
        )
    logger.debug(
        f"closure of {graph.num_edges} edges under {fam.label}: "
        f"{result.closure.num_edges} edges after {len(result.certificate.steps)} steps"
    )
    return result


def is_weakly_saturated(graph: Hypergraph, family: Hypergraph | Family) -> bool:
    return closure(graph, family).saturated


def local_degree_requirements(family: Hypergraph | Family) -> dict[int, int]:
    """Least |L_F(U)| every weakly saturated F has at each m-set U.

    The first added edge containing U creates a copy whose link at U has at
    least min delta_m edges, all but the new one already present. Only levels
    with a positive requirement are returned.
    """
    fam = as_family(family)
    requirements = {}
    for m in range(fam.r):
        need = fam.min_delta(m) - 1
        if need > 0:
            requirements[m] = need
    return requirements


@dataclass
class WsatOptions:
    symmetry: SymmetryMode = "generators"
    start_from_bounds: bool = True
    caps: Caps = DEFAULT_CAPS


@dataclass
class WsatResult:
    n: int
    family: Family
    value: int
    witness: Hypergraph
    certificate: SaturationCertificate
    start: int
    leaves_checked: int
    symmetry: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "family": [p.to_dict() for p in self.family.patterns],
            "wsat": self.value,
            "witness": self.witness.to_dict(),
            "certificate": self.certificate.to_dict(),
            "search_start": self.start,
            "leaves_checked": self.leaves_checked,
            "symmetry": self.symmetry,
        }


class _SharedBest:
    """Smallest first-edge index with a witness, written monotonically."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.value: int | None = None

    def offer(self, first: int) -> None:
        with self._lock:
            if self.value is None or first < self.value:
                self.value = first

    def beaten(self, first: int) -> bool:
        value = self.value
        return value is not None and value < first


class _Abort(Exception):
    pass


class _SubsetSearch:
    """Backtracking over k-subsets of the edges of K_n^r in lexicographic order."""

    def __init__(self, n: int, family: Family, options: WsatOptions):
        self.n = n
        self.family = family
        self.table = copy_table(n, family)
        self.index = self.table.index
        self.size = self.index.size
        self.full = self.index.full_mask
        self.rest = [0] * (self.size + 1)
        for j in range(self.size - 1, -1, -1):
            self.rest[j] = self.rest[j + 1] | (1 << j)
        self.levels: list[tuple[int, int, list[int]]] = []
        for m, need in local_degree_requirements(family).items():
            if m == 0:
                continue
            masks = []
            for u in itertools.combinations(range(n), m):
                us = set(u)
                mask = 0
                for j, e in enumerate(self.index.edges):
                    if us.issubset(e):
                        mask |= 1 << j
                masks.append(mask)
            self.levels.append((need, math.comb(family.r, m), masks))
        self.symmetry = options.symmetry
        if self.symmetry == "full" and self.size > FULL_SYMMETRY_EDGES:
            logger.warning(
                f"full symmetry reduction needs C(n,r) <= {FULL_SYMMETRY_EDGES}; "
                "using transposition generators"
            )
            self.symmetry = "generators"
        if self.symmetry == "generators":
            self.perm_maps = [
                self.index.permutation_map(_transposition(n, i)) for i in range(n - 1)
            ]
        elif self.symmetry == "full":
            self.perm_maps = [
                self.index.permutation_map(p) for p in itertools.permutations(range(n))
            ]
        else:
            self.perm_maps = []
        self.leaves = 0
        self._leaf_lock = threading.Lock()

    def feasible(self, chosen: int, rest: int, left: int) -> bool:
        for need, cover, masks in self.levels:
            deficit = 0
            for mu in masks:
                have = (chosen & mu).bit_count()
                if have >= need:
                    continue
                short = need - have
                if min((rest & mu).bit_count(), left) < short:
                    return False
                deficit += short
            if deficit > left * cover:
                return False
        return True

    def canonical(self, chosen: int) -> bool:
        """Whether ``chosen`` is lexicographically least among its images."""
        for edge_map in self.perm_maps:
            image = permute_mask(chosen, edge_map)
            diff = image ^ chosen
            # the lowest differing edge index decides the lexicographic order
            if diff and image & (diff & -diff):
                return False
        return True

    def leaf(self, chosen: int) -> bool:
        with self._leaf_lock:
            self.leaves += 1
        if not self.canonical(chosen):
            return False
        return self.table.closure_mask(chosen) == self.full

    def dfs(
        self, start: int, chosen: int, left: int, first: int, shared: _SharedBest
    ) -> int | None:
        if left == 0:
            return chosen if self.leaf(chosen) else None
        if shared.beaten(first):
            raise _Abort
        for j in range(start, self.size - left + 1):
            new = chosen | (1 << j)
            if not self.feasible(new, self.rest[j + 1], left - 1):
                continue
            found = self.dfs(j + 1, new, left - 1, first, shared)
            if found is not None:
                return found
        return None

    def subtree(self, k: int, first: int, shared: _SharedBest) -> int | None:
        chosen = 1 << first
        if not self.feasible(chosen, self.rest[first + 1], k - 1):
            return None
        try:
            found = self.dfs(first + 1, chosen, k - 1, first, shared)
        except _Abort:
            return None
        if found is not None:
            shared.offer(first)
        return found

    def search(self, k: int, workers: int) -> int | None:
        if k == 0:
            return 0 if self.leaf(0) else None
        if not self.feasible(0, self.full, k):
            return None
        firsts = range(self.size - k + 1)
        shared = _SharedBest()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                found = list(pool.map(lambda f: self.subtree(k, f, shared), firsts))
            for mask in found:
                if mask is not None:
                    return mask
            return None
        for first in firsts:
            mask = self.subtree(k, first, shared)
            if mask is not None:
                return mask
        return None


def _transposition(n: int, i: int) -> list[int]:
    perm = list(range(n))
    perm[i], perm[i + 1] = perm[i + 1], perm[i]
    return perm


def wsat_exact(
    n: int, family: Hypergraph | Family, options: WsatOptions | None = None
) -> WsatResult:
    """Least edge count of a weakly saturated host on [n], with a witness.

    k runs upward from the best proven lower bound; the first k-subset (in
    lexicographic order, modulo the chosen symmetry reduction) whose closure
    is K_n^r is the witness.
    """
    fam = as_family(family)
    options = options or WsatOptions()
    caps = options.caps
    if n < fam.max_vertices:
        raise PreconditionError(
            f"n={n} is smaller than the largest pattern ({fam.max_vertices} vertices)"
        )
    size = math.comb(n, fam.r)
    if size > caps.wsat_edges:
        raise CapExceededError(
            f"exact search over C({n},{fam.r}) edges", size, caps.wsat_edges
        )

    start = family_lower_bound(fam, n) if options.start_from_bounds else 0
    start = max(0, min(start, size))
    logger.info(f"wsat search n={n} family={fam.label}: starting at k={start}")
    search = _SubsetSearch(n, fam, options)
    for k in range(start, size + 1):
        found = search.search(k, caps.workers)
        outcome = "hit" if found is not None else "none"
        logger.debug(f"k={k}: {search.leaves} leaves so far, {outcome}")
        if found is None:
            continue
        witness = search.index.hypergraph(found, f"wsat witness n={n}")
        _, steps = search.table.closure_steps(found)
        result = WsatResult(
            n,
            fam,
            k,
            witness,
            SaturationCertificate(witness, steps),
            start,
            search.leaves,
            search.symmetry,
        )
        logger.info(f"wsat({n}, {fam.label}) = {k} ({search.leaves} leaves checked)")
        return result
    raise AssertionError("K_n^r is always weakly saturated")


def wsat_r1(family: Hypergraph | Family, n: int | None = None) -> int:
    """wsat for 1-uniform families: min |E(H)| - 1."""
    fam = as_family(family)
    if fam.r != 1:
        raise PreconditionError(f"wsat_r1 needs r = 1, got r={fam.r}")
    if n is not None and n < fam.max_vertices:
        raise PreconditionError(f"n={n} is smaller than the largest pattern")
    return min(p.num_edges for p in fam.patterns) - 1


@dataclass
class FamilyUnionReport:
    n: int
    family_value: int
    union_value: int
    union_vertices: int
    r: int

    @property
    def difference(self) -> int:
        return self.union_value - self.family_value

    @property
    def slack(self) -> int:
        return math.comb(self.union_vertices, self.r)

    @property
    def holds(self) -> bool:
        return self.family_value <= self.union_value <= self.family_value + self.slack

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "family": self.family_value,
            "disjoint_union": self.union_value,
            "difference": self.difference,
            "slack": self.slack,
            "holds": self.holds,
        }


def wsat_family_vs_disjoint(
    n: int, family: Family, options: WsatOptions | None = None
) -> FamilyUnionReport:
    """Compare wsat of a family with wsat of the disjoint union of its patterns."""
    union = disjoint_union([p.compact() for p in family.patterns], label="union")
    family_value = wsat_exact(n, family, options).value
    union_value = wsat_exact(n, union, options).value
    report = FamilyUnionReport(n, family_value, union_value, union.n, family.r)
    logger.info(f"family vs disjoint union at n={n}: {report.to_dict()}")
    return report
