"""Unit tests for constructions module."""

from fractions import Fraction

import pytest

from src.constructions import (
    build_construction_H,
    build_saturated_host,
    corollary_s_arbitrary_G,
    example_delta_construction,
    greedy_cover,
    host_edge_trend,
    shell_host,
)
from src.errors import CapExceededError, PreconditionError
from src.hypergraph import clique, delta_m, sparseness
from src.wsat_engine import is_weakly_saturated


def test_greedy_cover_is_valid():
    design = greedy_cover(6, 3, 2)

    assert design.is_valid()
    assert design.counting_bound == 5
    assert len(design.blocks) >= design.counting_bound
    assert design.blocks[0] == (0, 1, 2)


def test_greedy_cover_of_points():
    design = greedy_cover(5, 3, 1)

    assert design.blocks == [(0, 1, 2), (0, 3, 4)]
    assert design.ratio == Fraction(6, 5)
    with pytest.raises(PreconditionError):
        greedy_cover(3, 4, 2)


def test_example_delta_construction_for_triangle():
    """G = K_3 gives H_0 = two disjoint triangles and coefficient 2/3."""
    construction = example_delta_construction(2, 2)

    assert construction.s == 2
    assert construction.delta == 2
    assert construction.h0.n == 6
    assert construction.h0.num_edges == 6
    assert construction.e_tilde == (0, 1)
    assert len(construction.stages) == 10
    assert construction.stages[-1] == clique(6, 2)
    assert construction.coefficient == Fraction(2, 3)
    assert construction.to_dict()["coefficient"] == "2/3"


def test_example_delta_coefficient_matches_codegree_bound():
    construction = example_delta_construction(2, 3)

    assert construction.coefficient == Fraction(3, 2) - Fraction(1, 4)
    with pytest.raises(PreconditionError):
        example_delta_construction(2, 1)


def test_build_construction_preconditions(k3, path3, small_caps):
    with pytest.raises(PreconditionError):
        build_construction_H(path3, [0, 1])
    with pytest.raises(PreconditionError):
        build_construction_H(k3, [])
    with pytest.raises(PreconditionError) as info:
        build_construction_H(k3, [5])
    assert info.value.witness == (5,)
    with pytest.raises(CapExceededError):
        build_construction_H(clique(5, 2), range(5), small_caps)


def test_saturated_host_edge_counts():
    construction = example_delta_construction(2, 2)

    small = build_saturated_host(construction, 8)
    assert small.Z == (0, 1, 2)
    assert small.host.num_edges == 7

    large = build_saturated_host(construction, 12)
    assert large.host.num_edges == 9
    assert large.measured_coefficient == Fraction(3, 4)
    assert large.lower_order_constant == 1
    assert large.to_dict()["blocks"] == 3


def test_saturated_host_closes_to_clique():
    construction = example_delta_construction(2, 2)
    host = build_saturated_host(construction, 6)

    assert host.host.num_edges == 5
    assert is_weakly_saturated(host.host, construction.family)
    with pytest.raises(PreconditionError):
        build_saturated_host(construction, 5)


def test_host_edge_trend():
    rows = host_edge_trend(example_delta_construction(2, 2), [6, 9, 12])

    assert [row["edges"] for row in rows] == [5, 7, 9]
    assert rows[-1]["leading_term"] == 8


def test_corollary_base():
    graph, P = corollary_s_arbitrary_G(3, 2, 4)

    assert graph.n == 10
    assert sparseness(graph) == 2
    assert delta_m(graph, 1) == 3
    assert P == (0, 1, 2, 3)
    with pytest.raises(PreconditionError):
        corollary_s_arbitrary_G(3, 2, 3)


def test_shell_host(k4):
    shell = shell_host(5, 2, 2, z_size=2, pattern=k4)

    assert shell.num_edges == 7
    assert (0, 1) in shell.edge_set
    assert (2, 3) not in shell.edge_set
    with pytest.raises(PreconditionError):
        shell_host(5, 2, 2, z_size=1, pattern=k4)
    with pytest.raises(PreconditionError):
        shell_host(5, 2, 2, z_size=6)
