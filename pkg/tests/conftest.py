"""Pytest configuration and fixtures."""

import sys
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config import Caps  # noqa: E402
from src.hypergraph import Hypergraph, clique  # noqa: E402

CORPUS_DIR = Path(__file__).parent.parent / "corpus"


@pytest.fixture
def k3() -> Hypergraph:
    return clique(3, 2, "K3")


@pytest.fixture
def k4() -> Hypergraph:
    return clique(4, 2, "K4")


@pytest.fixture
def k5() -> Hypergraph:
    return clique(5, 2, "K5")


@pytest.fixture
def k4_3() -> Hypergraph:
    """K_4^3, the complete 3-graph on four vertices."""
    return clique(4, 3, "K4_3")


@pytest.fixture
def c4() -> Hypergraph:
    return Hypergraph(4, 2, ((0, 1), (1, 2), (2, 3), (0, 3)), "C4")


@pytest.fixture
def path3() -> Hypergraph:
    """The path with two edges; it has a vertex of degree one."""
    return Hypergraph(3, 2, ((0, 1), (1, 2)), "P3")


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture
def small_caps() -> Caps:
    """Caps small enough that moderate requests trip them."""
    return Caps(
        enumeration=1_000,
        wsat_edges=10,
        lp_edges=6,
        lp_hard=10,
        lp_exact_edges=6,
        gamma_edges=4,
        canon_vertices=5,
        construction_vertices=8,
    )


@pytest.fixture
def mock_env_vars(monkeypatch, tmp_path) -> Path:
    """Point the results store at a temporary file and quiet the logs."""
    db_path = tmp_path / "results.duckdb"
    monkeypatch.setenv("WSAT_DB_PATH", str(db_path))
    monkeypatch.setenv("LOG_LEVEL", "WARNING")
    monkeypatch.delenv("WSAT_CAP_OVERRIDE", raising=False)
    return db_path
