"""Pattern corpora: small hypergraphs one per isomorphism class, and files."""

import json
import math
import random
from collections.abc import Iterator
from pathlib import Path
from typing import Any

from .config import DEFAULT_CAPS, Caps
from .errors import HypergraphFormatError, PreconditionError
from .hypergraph import (
    Hypergraph,
    complete_edge_index,
    enumerate_hypergraphs,
    load_hypergraph,
)
from .logger import get_logger

logger = get_logger(__name__)

EXPECTED_FILE = "expected.json"
DEFAULT_CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"


def uniform_corpus(
    r: int, max_vertices: int, caps: Caps = DEFAULT_CAPS
) -> list[Hypergraph]:
    """Non-empty r-graphs without isolated vertices, one per isomorphism class.

    Ordered by vertex count, then edge count.
    """
    if r < 1:
        raise PreconditionError(f"uniformity must be >= 1, got {r}")
    found: list[Hypergraph] = []
    for v in range(r, max_vertices + 1):
        for e in range(1, math.comb(v, r) + 1):
            classes = enumerate_hypergraphs(v, r, e, up_to_isomorphism=True, caps=caps)
            for graph in classes:
                if graph.has_isolated_vertices():
                    continue
                found.append(graph.with_label(f"r{r}v{v}e{e}#{len(found)}"))
    logger.debug(f"uniform corpus r={r} v<={max_vertices}: {len(found)} patterns")
    return found


def graph_corpus(max_vertices: int = 5, caps: Caps = DEFAULT_CAPS) -> list[Hypergraph]:
    return uniform_corpus(2, max_vertices, caps)


def iter_corpus_files(path: str | Path) -> Iterator[Path]:
    directory = Path(path)
    if not directory.is_dir():
        raise PreconditionError(f"corpus directory {directory} does not exist")
    for file in sorted(directory.glob("*.json")):
        if file.name != EXPECTED_FILE:
            yield file


def load_corpus_dir(path: str | Path) -> list[Hypergraph]:
    """Every pattern file in a directory, sorted by file name."""
    graphs = []
    for file in iter_corpus_files(path):
        try:
            graphs.append(load_hypergraph(file))
        except HypergraphFormatError as e:
            raise HypergraphFormatError(f"{file.name}: {e}", e.line) from e
    return graphs


def load_expected(path: str | Path) -> dict[str, Any]:
    """Expected values keyed by pattern label; empty when the file is absent."""
    file = Path(path) / EXPECTED_FILE
    if not file.exists():
        return {}
    try:
        data = json.loads(file.read_text())
    except json.JSONDecodeError as e:
        raise HypergraphFormatError(f"{file.name}: {e.msg}", line=e.lineno) from e
    if not isinstance(data, dict):
        raise HypergraphFormatError(f"{file.name} must hold an object")
    return data


def random_instances(
    count: int, seed: int, r: int = 2, vertices: tuple[int, int] = (4, 6)
) -> list[tuple[Hypergraph, Hypergraph]]:
    """(host, pattern) pairs: a random host on [n] and a random small pattern."""
    rng = random.Random(seed)
    pool = [p for p in uniform_corpus(r, r + 2) if p.num_edges >= 2]
    instances = []
    for _ in range(count):
        n = rng.randint(*vertices)
        pattern = rng.choice(pool)
        edges = [e for e in complete_edge_index(n, r).edges if rng.random() < 0.4]
        host = Hypergraph(n, r, tuple(edges), f"random host n={n}")
        instances.append((host, pattern))
    return instances

