"""Unit tests for count_polymatroid module."""

from fractions import Fraction

import pytest

from src.bounds import gamma_count_params
from src.count_polymatroid import (
    CountMatroidOracle,
    CountParams,
    CountPolymatroid,
    check_polymatroid_axioms,
    deficient_subgraph,
    eval_L,
    eval_L_clique,
    matroid_rank_bruteforce,
    matroid_rank_formula,
    poly_rank_formula,
    poly_rho,
    random_rank_orders,
    verify_wsat_condition,
)
from src.errors import CapExceededError, HypergraphFormatError, PreconditionError
from src.hypergraph import MultiEdgeSet, clique

GRAPHIC = CountParams.of(-1, 1, 0)
RIGIDITY = CountParams.of(-3, 2, 0)


def test_params_validation_and_scaling():
    params = CountParams.of("1/2", 1)

    assert params.r == 1
    assert params.q == 2
    assert params.scaled().a == (Fraction(1), Fraction(2))
    assert params.p == Fraction(3, 2)
    with pytest.raises(PreconditionError):
        CountParams.of(0, -1, 0)
    with pytest.raises(PreconditionError):
        CountParams(2, (Fraction(1),))
    with pytest.raises(PreconditionError):
        params.int_coeffs()


def test_params_json():
    params = CountParams.of("-13/3", "8/3", 0)

    assert CountParams.from_dict(params.to_dict()) == params
    with pytest.raises(HypergraphFormatError):
        CountParams.from_dict({"a": [1, 2]})


def test_eval_L(k3):
    assert eval_L(k3, GRAPHIC) == 2
    assert eval_L(MultiEdgeSet.from_hypergraph(k3, 3), GRAPHIC) == 2
    assert eval_L_clique(4, RIGIDITY) == 5
    with pytest.raises(PreconditionError):
        eval_L(clique(4, 3), GRAPHIC)


def test_graphic_and_rigidity_ranks(k4):
    """The two classical count matroids on K_4."""
    assert matroid_rank_bruteforce(MultiEdgeSet.from_hypergraph(k4, 1), GRAPHIC) == 3
    assert matroid_rank_bruteforce(MultiEdgeSet.from_hypergraph(k4, 1), RIGIDITY) == 5
    assert matroid_rank_formula(4, GRAPHIC) == 3
    assert matroid_rank_formula(4, RIGIDITY) == 5


def test_rank_with_multiplicities(k3):
    doubled = MultiEdgeSet.from_hypergraph(k3, 2)

    assert matroid_rank_bruteforce(doubled, GRAPHIC) == 2
    assert matroid_rank_formula(3, GRAPHIC, q=2) == 2


def test_rank_independent_of_order(k4):
    oracle = CountMatroidOracle(k4, GRAPHIC)
    full = (1 << k4.num_edges) - 1

    ranks = {
        oracle.rank(full, 2, order)
        for order in random_rank_orders(k4.num_edges, 2, samples=8, seed=3)
    }
    assert ranks == {oracle.rank(full, 2)} == {3}


def test_fractional_polymatroid_on_clique(k5):
    """The gamma parameters of K_5 give rho(K_5) = 9 and p = 1."""
    params = gamma_count_params(k5)

    assert params.a == (Fraction(-13, 3), Fraction(8, 3), Fraction(0))
    assert params.p == 1
    assert poly_rho(k5, params) == 9
    assert poly_rank_formula(5, params) == 9


def test_poly_rho_matches_formula_on_small_cliques():
    for n in (3, 4, 5):
        graph = clique(n, 2)
        assert poly_rho(graph, RIGIDITY) == poly_rank_formula(n, RIGIDITY)
        assert poly_rho(graph, GRAPHIC) == n - 1


def test_oracle_projection_cap():
    with pytest.raises(CapExceededError):
        CountMatroidOracle(clique(7, 2), GRAPHIC)


def test_polymatroid_axioms_hold(k4):
    table = CountPolymatroid(k4, CountParams.of("-5/2", "3/2", 0)).table()
    check = check_polymatroid_axioms(table, k4.num_edges)

    assert check.passed
    assert check.checked_pairs == 64 * 65 // 2


def test_polymatroid_axioms_detect_violations():
    assert not check_polymatroid_axioms([Fraction(0), Fraction(2)], 1).passed
    broken = [Fraction(0), Fraction(1), Fraction(1), Fraction(0)]
    check = check_polymatroid_axioms(broken, 2)
    assert {v["axiom"] for v in check.violations} == {"monotone"}
    with pytest.raises(PreconditionError):
        check_polymatroid_axioms([Fraction(0)], 2)


def test_wsat_condition(k3):
    """The graphic matroid certifies wsat(n, K_3) >= n - 1; rigidity does not."""
    report = verify_wsat_condition(k3, 4, GRAPHIC)

    assert report.passed
    assert report.copies_checked == 4
    assert report.bound == 3
    assert report.to_dict()["bound"] == "3/1"

    failing = verify_wsat_condition(k3, 4, RIGIDITY)
    assert not failing.passed
    assert failing.bound is None
    assert failing.failure is not None


def test_deficient_subgraph(k3, k4):
    assert deficient_subgraph(k3, GRAPHIC) == k3
    assert deficient_subgraph(k4, RIGIDITY) == k4
    assert deficient_subgraph(k4, CountParams.of(0, 2, 0)) is None
