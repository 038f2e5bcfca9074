"""Unit tests for wsat_engine module."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.config import Caps
from src.errors import CapExceededError, PreconditionError
from src.hypergraph import Hypergraph, clique, sparseness
from src.wsat_engine import (
    CertificateStep,
    Family,
    SaturationCertificate,
    WsatOptions,
    closure,
    copy_table,
    creates_new_copy,
    is_weakly_saturated,
    local_degree_requirements,
    wsat_exact,
    wsat_family_vs_disjoint,
    wsat_r1,
)

K5_EDGES = list(itertools.combinations(range(5), 2))


def test_family_validation(k3):
    with pytest.raises(PreconditionError):
        Family(())
    with pytest.raises(PreconditionError):
        Family.of(k3, Hypergraph(3, 2))
    with pytest.raises(PreconditionError):
        Family.of(k3, clique(4, 3))

    family = Family.of(k3, clique(4, 2, "K4"))
    assert family.r == 2
    assert family.max_vertices == 4
    assert family.label == "K3+K4"
    assert family.min_delta(1) == 2


def test_creates_new_copy(k3, k4):
    cherry = Hypergraph(3, 2, ((0, 1), (0, 2)))
    embedding = creates_new_copy(cherry, k3, (1, 2))
    assert embedding is not None
    assert sorted(embedding) == [0, 1, 2]

    assert creates_new_copy(Hypergraph(4, 2, ((0, 1),)), k3, (2, 3)) is None

    almost = Hypergraph(4, 2, tuple(e for e in k4.edges if e != (2, 3)))
    assert creates_new_copy(almost, k4, (2, 3)) is not None


def test_creates_new_copy_rejects_present_edge(k3):
    with pytest.raises(PreconditionError):
        creates_new_copy(k3, k3, (0, 1))


def test_closure_of_star_is_complete(k3):
    star = Hypergraph(4, 2, ((0, 1), (0, 2), (0, 3)))
    result = closure(star, k3)

    assert result.saturated
    assert result.closure == clique(4, 2)
    assert len(result.certificate.steps) == 3
    assert result.certificate.replay(Family.of(k3)) == clique(4, 2)


def test_closure_of_matching_is_stable(k3):
    matching = Hypergraph(4, 2, ((0, 1), (2, 3)))
    result = closure(matching, k3)

    assert result.closure == matching
    assert not result.saturated
    assert not is_weakly_saturated(matching, k3)


def test_closure_of_complete_host_has_no_steps(k3):
    result = closure(clique(5, 2), k3)

    assert result.saturated
    assert result.certificate.steps == []


def test_closure_methods_agree(c4):
    host = Hypergraph(5, 2, ((0, 1), (1, 2), (2, 3), (3, 4)))

    by_table = closure(host, c4, method="table")
    by_search = closure(host, c4, method="search")
    assert by_table.closure == by_search.closure
    assert by_search.certificate.is_valid(Family.of(c4))


def test_certificate_replay_detects_bad_steps(k3):
    family = Family.of(k3)
    start = Hypergraph(3, 2, ((0, 1),))
    premature = SaturationCertificate(start, [CertificateStep((1, 2), 0, (0, 1, 2))])
    assert not premature.is_valid(family)

    repeated = SaturationCertificate(start, [CertificateStep((0, 1), 0, (0, 1, 2))])
    with pytest.raises(PreconditionError, match="already present"):
        repeated.replay(family)


@settings(max_examples=40, deadline=None)
@given(
    st.sets(st.sampled_from(K5_EDGES)),
    st.lists(st.integers(min_value=0, max_value=10_000), min_size=1, max_size=5),
)
def test_closure_is_order_independent(edges, seeds):
    """Every shuffled greedy run ends in the same hypergraph."""
    host = Hypergraph(5, 2, tuple(edges))
    family = Family.of(clique(3, 2), Hypergraph(4, 2, ((0, 1), (1, 2), (2, 3), (0, 3))))
    reference = closure(host, family).closure

    for seed in seeds:
        result = closure(host, family, seed=seed)
        assert result.closure == reference
        assert result.certificate.replay(family) == reference


def test_copy_table_counts(k3):
    assert len(copy_table(5, Family.of(k3))) == 10


def test_local_degree_requirements(k3, k4, k4_3):
    assert local_degree_requirements(k3) == {0: 2, 1: 1}
    assert local_degree_requirements(k4) == {0: 5, 1: 2}
    assert local_degree_requirements(k4_3) == {0: 3, 1: 2, 2: 1}


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_wsat_triangle(n, k3):
    result = wsat_exact(n, k3)

    assert result.value == n - 1
    assert result.witness.num_edges == n - 1
    assert is_weakly_saturated(result.witness, k3)
    assert result.certificate.is_valid(Family.of(k3))


def test_wsat_nonincreasing_for_sparse_pattern(path3):
    """A pattern with s = 1 never needs more host edges on more vertices."""
    values = [wsat_exact(n, path3).value for n in range(3, 7)]

    assert sparseness(path3) == 1
    assert values == [1, 1, 1, 1]
    assert all(b <= a for a, b in itertools.pairwise(values))


@pytest.mark.parametrize(("n", "expected"), [(4, 5), (5, 7), (6, 9)])
def test_wsat_k4(n, expected, k4):
    assert wsat_exact(n, k4).value == expected


def test_wsat_k4_3(k4_3):
    assert wsat_exact(4, k4_3).value == 3
    assert wsat_exact(5, k4_3).value == 6


@pytest.mark.parametrize("symmetry", ["none", "generators", "full"])
def test_wsat_symmetry_modes_agree(symmetry, k4):
    result = wsat_exact(5, k4, WsatOptions(symmetry=symmetry))

    assert result.value == 7
    assert result.symmetry == symmetry


def test_wsat_without_bounds_start(c4):
    """Searching from k = 0 reaches the same value as the bounded start."""
    bounded = wsat_exact(5, c4)
    unbounded = wsat_exact(5, c4, WsatOptions(start_from_bounds=False))

    assert bounded.value == unbounded.value
    assert unbounded.start == 0
    assert bounded.start <= bounded.value


def test_wsat_threaded_search_matches_serial(k4):
    serial = wsat_exact(5, k4)
    threaded = wsat_exact(5, k4, WsatOptions(caps=Caps(workers=4)))

    assert threaded.value == serial.value
    assert threaded.witness == serial.witness


def test_wsat_preconditions(k4, small_caps):
    with pytest.raises(PreconditionError):
        wsat_exact(3, k4)
    with pytest.raises(CapExceededError):
        wsat_exact(6, k4, WsatOptions(caps=small_caps))


def test_wsat_result_dict(k3):
    data = wsat_exact(4, k3).to_dict()

    assert data["wsat"] == 3
    assert data["n"] == 4
    assert len(data["witness"]["edges"]) == 3
    assert len(data["certificate"]["steps"]) == 3


def test_wsat_r1():
    k3_1 = Hypergraph(3, 1, ((0,), (1,), (2,)))
    k5_1 = Hypergraph(5, 1, tuple((v,) for v in range(5)))
    k2_1 = Hypergraph(2, 1, ((0,), (1,)))

    assert wsat_r1(k3_1) == 2
    assert wsat_r1(Hypergraph(1, 1, ((0,),))) == 0
    assert wsat_r1(Family.of(k5_1, k2_1)) == 1
    assert wsat_exact(5, Family.of(k5_1, k2_1)).value == 1
    with pytest.raises(PreconditionError):
        wsat_r1(clique(3, 2))


def test_family_vs_disjoint_union(k3):
    single = wsat_family_vs_disjoint(5, Family.of(k3))
    assert single.difference == 0

    double = wsat_family_vs_disjoint(6, Family.of(k3, k3))
    assert double.family_value == 5
    assert double.holds
    assert double.to_dict()["slack"] == 15
