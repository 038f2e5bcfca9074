"""Unit tests for kruskal_katona module."""

import pytest

from src.config import Caps
from src.errors import CapExceededError, PreconditionError
from src.kruskal_katona import (
    kk_shadow_bound,
    left_compressed,
    min_shadow_exhaustive,
    verify_binomial_inequality,
    verify_convexity_inequality,
    verify_f_r_delta_bound,
    verify_kk_exhaustive,
    verify_kk_grid,
    verify_shadow_delta_star_bound,
)


def test_left_compressed_graph():
    """lcG(2, 4) is a triangle plus one pendant edge at vertex 0."""
    graph = left_compressed(2, 4)

    assert graph.edges == ((0, 1), (0, 2), (0, 3), (1, 2))
    assert graph.n == 4


def test_left_compressed_edge_cases():
    assert left_compressed(1, 3).edges == ((0,), (1,), (2,))
    assert left_compressed(3, 4).edges == ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
    with pytest.raises(PreconditionError):
        left_compressed(2, 0)


def test_kk_shadow_bound_values():
    assert kk_shadow_bound(2, 4, 1) == 4
    assert kk_shadow_bound(3, 4, 2) == 6
    assert kk_shadow_bound(3, 5, 2) == 8
    assert kk_shadow_bound(3, 1, 3) == 1
    with pytest.raises(PreconditionError):
        kk_shadow_bound(3, 4, 0)


def test_min_shadow_exhaustive_finds_triangle():
    least, witness, checked = min_shadow_exhaustive(4, 2, 3, 1)

    assert least == 3
    assert witness.edges == ((0, 1), (0, 2), (1, 2))
    assert checked == 20


def test_min_shadow_exhaustive_threads_agree():
    """The pooled search returns the same minimiser as the serial one."""
    serial = min_shadow_exhaustive(5, 3, 4, 2)
    pooled = min_shadow_exhaustive(5, 3, 4, 2, Caps(workers=3))

    assert serial[0] == pooled[0]
    assert serial[1] == pooled[1]
    assert serial[2] == pooled[2]


def test_min_shadow_exhaustive_cap(small_caps):
    with pytest.raises(CapExceededError):
        min_shadow_exhaustive(6, 2, 7, 1, small_caps)


def test_verify_kk_exhaustive_report():
    report = verify_kk_exhaustive(4, 2, 3, 1)

    assert report.passed
    data = report.to_dict()
    assert data["params"] == {"n": 4, "r": 2, "e": 3, "m": 1}
    assert data["bound"] == 3
    assert data["pass"] is True


def test_verify_kk_grid_small():
    reports = verify_kk_grid(max_n=4, max_r=3, max_e=4)

    assert len(reports) == 18
    assert all(r.passed for r in reports)


def test_inequality_sweeps_pass():
    binomial = verify_binomial_inequality(limit=12)
    convexity = verify_convexity_inequality(limit=8)

    assert binomial.passed and binomial.checked == 169
    assert convexity.passed and convexity.checked > 0
    assert convexity.to_dict()["violations"] == []


def test_f_r_delta_bound_on_compressed_graphs():
    sweep = verify_f_r_delta_bound(max_r=3, max_delta=4)

    assert sweep.passed
    assert sweep.checked > 0


@pytest.mark.slow
def test_f_r_delta_bound_exhaustive():
    sweep = verify_f_r_delta_bound(max_r=3, max_delta=3, enumerate_vertices=5)

    assert sweep.passed


@pytest.mark.slow
def test_shadow_delta_star_bound():
    sweep = verify_shadow_delta_star_bound(max_vertices=4, max_r=3)

    assert sweep.passed
    assert sweep.skipped == 0
