"""Unit tests for hypergraph module."""

import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import CapExceededError, HypergraphFormatError, PreconditionError
from src.hypergraph import (
    Hypergraph,
    MultiEdgeSet,
    canonical_form,
    canonical_key,
    clique,
    complete_edge_index,
    copies_in_clique,
    delta_m,
    delta_star,
    disjoint_union,
    enumerate_hypergraphs,
    f_r_delta,
    iter_bits,
    link,
    load_hypergraph,
    permute_mask,
    shadow,
    shadow_size,
    sparseness,
    sparseness_by_subsets,
)


def hypergraphs(n: int, r: int):
    """Non-empty r-graphs on [n] drawn as edge subsets of K_n^r."""
    edges = list(itertools.combinations(range(n), r))
    return st.sets(st.sampled_from(edges), min_size=1).map(
        lambda chosen: Hypergraph(n, r, tuple(chosen))
    )


def test_edges_are_canonicalised():
    """Edges are sorted inside and across, duplicates merged."""
    graph = Hypergraph(4, 2, ((2, 1), (0, 3), (1, 2)))

    assert graph.edges == ((0, 3), (1, 2))
    assert graph == Hypergraph(4, 2, ((1, 2), (0, 3)), "other label")


def test_invalid_edges_rejected():
    with pytest.raises(PreconditionError):
        Hypergraph(3, 2, ((0, 0),))
    with pytest.raises(PreconditionError):
        Hypergraph(3, 2, ((0, 3),))
    with pytest.raises(PreconditionError):
        Hypergraph(3, 2, ((0, 1, 2),))


def test_vertex_cap():
    with pytest.raises(CapExceededError):
        Hypergraph(65, 2)


def test_json_roundtrip_and_strict_loader(tmp_path, k4_3):
    """to_json output loads back; non-canonical input is refused."""
    assert Hypergraph.from_json(k4_3.to_json()) == k4_3

    with pytest.raises(HypergraphFormatError, match="not sorted"):
        Hypergraph.from_dict({"n": 3, "r": 2, "edges": [[1, 0]]})
    with pytest.raises(HypergraphFormatError, match="canonical edge order"):
        Hypergraph.from_dict({"n": 3, "r": 2, "edges": [[1, 2], [0, 1]]})
    with pytest.raises(HypergraphFormatError, match="unknown keys"):
        Hypergraph.from_dict({"n": 3, "r": 2, "edges": [], "weights": []})
    with pytest.raises(HypergraphFormatError, match="line 1"):
        Hypergraph.from_json("{not json")

    path = tmp_path / "triangle.json"
    path.write_text(json.dumps({"n": 3, "r": 2, "edges": [[0, 1], [0, 2], [1, 2]]}))
    loaded = load_hypergraph(path)
    assert loaded.label == "triangle"
    assert loaded.num_edges == 3


def test_sparseness_and_links(k3, k4, k4_3, path3, c4):
    """s and the delta_m sequence on the standard small patterns."""
    assert sparseness(k3) == 2
    assert sparseness(k4) == 2
    assert sparseness(c4) == 2
    assert sparseness(k4_3) == 3
    assert sparseness(path3) == 1
    assert sparseness(Hypergraph(2, 2, ((0, 1),))) == 0

    assert [delta_m(k4_3, m) for m in range(4)] == [4, 3, 2, 1]
    assert delta_star(k4) == 3
    assert delta_star(Hypergraph(3, 2)) == 0
    assert sparseness(Hypergraph(3, 2)) == -1


def test_link(k4_3):
    residue = link(k4_3, [0])

    assert residue.r == 2
    assert residue.edges == ((1, 2), (1, 3), (2, 3))
    assert link(k4_3, [0, 1, 2]).edges == ((),)
    with pytest.raises(PreconditionError):
        link(k4_3, [0, 1, 2, 3])


def test_shadow(k4_3):
    assert shadow_size(k4_3, 2) == 6
    assert shadow_size(k4_3, 1) == 4
    assert shadow(k4_3, 0) == ((),)
    with pytest.raises(PreconditionError):
        shadow(k4_3, 4)


def test_f_r_delta(k3):
    assert f_r_delta(k3, 2) == 0
    assert f_r_delta(k3, 3) == 3


def test_disjoint_union(k3, k4):
    union = disjoint_union([k3, k4])

    assert union.n == 7
    assert union.num_edges == 9
    assert (3, 4) in union.edge_set
    with pytest.raises(PreconditionError):
        disjoint_union([k3, clique(4, 3)])


def test_canonical_key_is_isomorphism_invariant(path3):
    other = Hypergraph(3, 2, ((0, 1), (0, 2)))

    assert canonical_key(path3) == canonical_key(other)
    assert canonical_form(path3) == canonical_form(other)
    assert canonical_key(path3) != canonical_key(Hypergraph(3, 2, ((0, 1),)))


def test_enumerate_hypergraphs_counts():
    assert sum(1 for _ in enumerate_hypergraphs(4, 2, 2)) == 15
    assert sum(1 for _ in enumerate_hypergraphs(4, 2, 2, up_to_isomorphism=True)) == 2


def test_enumerate_hypergraphs_cap(small_caps):
    with pytest.raises(CapExceededError):
        list(enumerate_hypergraphs(6, 2, 7, caps=small_caps))


def test_copies_in_clique(k3, path3):
    assert len(copies_in_clique(k3, 4)) == 4
    assert len(copies_in_clique(path3, 4)) == 12
    assert copies_in_clique(k3, 2) == ()
    first = copies_in_clique(k3, 4)[0]
    assert first.edges(4, 2) == ((0, 1), (0, 2), (1, 2))


def test_edge_index_and_bits():
    index = complete_edge_index(4, 2)

    assert index.size == 6
    assert list(iter_bits(0b101001)) == [0, 3, 5]
    swap = index.permutation_map([1, 0, 2, 3])
    mask = index.mask_of([(0, 2)])
    assert index.edges_of(permute_mask(mask, swap)) == ((1, 2),)


def test_multi_edge_set():
    multi = MultiEdgeSet(3, 2, 2, (((1, 0), 2), ((1, 2), 1)))

    assert multi.total() == 3
    assert multi.multiplicity((0, 1)) == 2
    assert multi.projection().edges == ((0, 1), (1, 2))
    assert len(multi.elements()) == 3
    with pytest.raises(PreconditionError):
        MultiEdgeSet(3, 2, 1, (((0, 1), 2),))


@settings(max_examples=60, deadline=None)
@given(hypergraphs(5, 2) | hypergraphs(5, 3))
def test_sparseness_matches_subset_definition(graph):
    """The delta_m characterisation of s agrees with the definition."""
    assert sparseness(graph) == sparseness_by_subsets(graph)


@settings(max_examples=60, deadline=None)
@given(hypergraphs(5, 3), st.integers(min_value=1, max_value=4))
def test_f_r_delta_double_counting(graph, delta):
    """delta |shadow| - r|E| equals the sum of (delta - codegree)."""
    assert f_r_delta(graph, delta) == delta * shadow_size(graph, 2) - 3 * len(graph)
