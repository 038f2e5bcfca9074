"""Unit tests for bounds module."""

from fractions import Fraction

import pytest

from src.bounds import (
    all_lower_bounds,
    clique_gap_trend,
    conjecture_probe,
    delta_star_coefficient,
    eta,
    eta_bounds,
    family_lower_bound,
    gamma_graph_m,
    gamma_shadow,
    gamma_subgraph,
    lb_delta_star,
    lb_gamma,
    lb_gamma_graph,
    lb_trivial,
    verify_gamma_delta_inequality,
)
from src.corpus import graph_corpus
from src.errors import CapExceededError, PreconditionError
from src.hypergraph import Hypergraph, clique
from src.wsat_engine import Family

# K_4^3 minus one edge: every vertex in two edges, the pair {1, 2} in one.
K4_3_MINUS = Hypergraph(4, 3, ((0, 1, 2), (0, 1, 3), (0, 2, 3)), "K4_3-e")


@pytest.mark.parametrize(
    ("fixture", "expected"),
    [
        ("k3", Fraction(1)),
        ("k4", Fraction(2)),
        ("k5", Fraction(8, 3)),
        ("k4_3", Fraction(2, 3)),
        ("c4", Fraction(1)),
    ],
)
def test_gamma_values(fixture, expected, request):
    """Both minimisations give the same gamma on the standard patterns."""
    graph = request.getfixturevalue(fixture)

    assert gamma_subgraph(graph).value == expected
    assert gamma_shadow(graph).value == expected


def test_gamma_witness_is_lex_least(k4):
    report = gamma_subgraph(k4)

    assert report.witness == [[0, 1]]
    assert report.to_dict()["value"] == "2/1"


def test_gamma_preconditions(k3, path3, small_caps):
    with pytest.raises(PreconditionError, match="s=3 given"):
        gamma_subgraph(k3, s=3)
    with pytest.raises(PreconditionError):
        gamma_subgraph(path3)
    with pytest.raises(CapExceededError):
        gamma_subgraph(clique(5, 2), caps=small_caps)


def test_gamma_graph_m_on_k5(k5):
    assert gamma_graph_m(k5, 1).value == Fraction(9, 4)
    assert gamma_graph_m(k5, 2).value == Fraction(8, 3)
    assert gamma_graph_m(k5, 2).witness == [0, 1, 2]


def test_gamma_graph_m_grows_with_m():
    graphs = [
        g for g in graph_corpus(5) if min(g.degree(v) for v in range(g.n)) >= 2
    ]

    assert graphs
    for graph in graphs:
        one, two = gamma_graph_m(graph, 1).value, gamma_graph_m(graph, 2).value
        assert one <= two, graph.label


def test_gamma_graph_m_rejects_isolated_vertices():
    with pytest.raises(PreconditionError) as info:
        gamma_graph_m(Hypergraph(4, 2, ((0, 1), (0, 2), (1, 2))), 1)
    assert info.value.witness == [3]


def test_closed_form_bounds(k3, k4):
    assert lb_gamma(k3, 5).value == 4
    assert lb_gamma(k4, 6).value == 9
    assert lb_delta_star(k3, 5).value == Fraction(10, 3)
    assert lb_delta_star(k3, 5).ceiling == 4
    assert lb_trivial(k3, 1, 5).value == Fraction(5, 2)
    assert lb_trivial(k3, 0, 5).value == 2
    assert lb_gamma_graph(k4, 6, m=2).value == 9
    assert lb_gamma_graph(k4, 6, m=1).value == Fraction(25, 3)


def test_closed_form_preconditions(k4, path3):
    with pytest.raises(PreconditionError):
        lb_gamma(k4, 3)
    with pytest.raises(PreconditionError):
        lb_trivial(k4, 3, 6)
    with pytest.raises(PreconditionError):
        lb_gamma_graph(path3, 6)
    with pytest.raises(PreconditionError):
        lb_gamma_graph(k4, 6, m=3)


def test_delta_star_coefficient():
    assert delta_star_coefficient(2, 2) == Fraction(2, 3)
    assert delta_star_coefficient(2, 3) == Fraction(5, 4)


def test_all_lower_bounds_below_exact_value(k4):
    """wsat(6, K_4) = 9 and the best bound reaches it."""
    reports = all_lower_bounds(k4, 6)

    assert {r.name for r in reports} == {
        "lb_trivial_m0",
        "lb_trivial_m1",
        "lb_trivial_m2",
        "lb_delta_star",
        "lb_gamma",
        "lb_gamma_graph_m1",
        "lb_gamma_graph_m2",
    }
    assert all(r.ceiling <= 9 for r in reports)
    assert max(r.ceiling for r in reports) == 9


def test_family_lower_bound(k3, k4):
    assert family_lower_bound(Family.of(k3), 5) == 4
    assert family_lower_bound(Family.of(k3, k4), 5) == 3


def test_gamma_delta_inequality(k3, k5, k4_3):
    check = verify_gamma_delta_inequality(k5)

    assert check.holds
    assert check.rhs == Fraction(9, 5)
    assert check.slack == Fraction(13, 15)
    assert verify_gamma_delta_inequality(k3).holds
    assert verify_gamma_delta_inequality(k4_3).rhs == Fraction(1, 2)
    with pytest.raises(PreconditionError):
        verify_gamma_delta_inequality(Hypergraph(3, 2, ((0, 1), (1, 2))))


def test_eta_exact_cases(k3, k4_3):
    assert eta(k3, n_cap=5).value == 1
    assert eta(k3, n_cap=5).status == "exact"
    assert eta(k4_3, n_cap=5).value == 1
    assert eta(Hypergraph(3, 2, ((0, 1),)), n_cap=5).value == 0
    with pytest.raises(PreconditionError):
        eta(Hypergraph(3, 2), n_cap=5)


def test_eta_from_link_family():
    """Links of K_4^3 - e are a triangle and cherries; one edge saturates."""
    report = eta(K4_3_MINUS, n_cap=5)

    assert report.value == 1
    assert report.status == "upper bound, sequence nonincreasing"
    assert report.witness["sequence"] == [[3, 1], [4, 1], [5, 1]]
    assert len(report.witness["links"]) == 2


def test_eta_bounds(k3, path3):
    lower, upper = eta_bounds(k3, 5)

    assert lower.value == Fraction(5, 2)
    assert upper.value == 5
    assert upper.status == "leading term only"

    lower, _ = eta_bounds(K4_3_MINUS, 5, n_cap=5)
    assert lower.value == Fraction(5, 3)
    with pytest.raises(PreconditionError):
        eta_bounds(path3, 5)


def test_conjecture_probe(k3, k4, c4, path3):
    report = conjecture_probe(2, 2, 3, [k3, k4, c4, path3])

    assert report.qualifying == 2
    assert report.violations == []
    assert report.min_slack == Fraction(1, 3)
    assert report.tightest == k3.to_dict()
    assert report.to_dict()["min_slack"] == "1/3"
    with pytest.raises(PreconditionError):
        conjecture_probe(2, 3, 3, [])


def test_clique_gap_trend_converges():
    """For K_4 the normalised gap tends to 3/4 and never closes."""
    rows = clique_gap_trend(2, 3, [4, 10, 100, 1000])

    assert [row["wsat"] for row in rows] == [5, 17, 197, 1997]
    gaps = [row["normalized_gap"] for row in rows]
    assert gaps == sorted(gaps)
    assert gaps[-1] == Fraction(3, 4) - Fraction(3, 1000)
