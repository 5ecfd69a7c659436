from __future__ import annotations

import json
import pickle
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from incpcst import (
    INF,
    BadParameter,
    InvalidOrdering,
    NotATree,
    TreeTooLarge,
    alg_profile,
    best_forest,
    best_incremental_ordering,
    build_instance,
    density_greedy_graph,
    density_greedy_tree,
    eccentricity,
    forest_extraction,
    gen_fig1,
    gen_fig5,
    gen_fig6a,
    gen_fig7,
    gen_fig8,
    gen_random_tree,
    is_infinite,
    min_alpha,
    min_mu,
    pareto_frontier,
    validate_ordering,
    verify_competitive,
)
from incpcst.evaluate import (
    budget_scaling_violation,
    fig6a_case_bound,
    format_value,
    piecewise_density_bound,
    profile_csv,
    shifted_lower_bound,
)

from . import oracles
from .conftest import instances, trees

F = Fraction
EPS = F(1, 10)


def test_infinity_sentinel():
    assert INF > F(10**30) and F(0) < INF and INF == INF
    assert max(F(1), INF) is INF and min(F(1), INF) == 1
    assert pickle.loads(pickle.dumps(INF)) is INF
    assert is_infinite(INF) and not is_infinite(F(5))
    assert format_value(INF) == "inf" and format_value(F(3, 2)) == "3/2"


def test_validate_ordering():
    g = gen_fig8(1)
    validate_ordering(g, (0, 1, 2))
    for bad in ((2, 1), (0, 0), (0, 9), (0, 1, 3, 2)):
        with pytest.raises(InvalidOrdering):
            validate_ordering(g, bad)
    with pytest.raises(InvalidOrdering):
        validate_ordering(g, (0,))  # v never reached
    validate_ordering(g, (0,), spanning=False)


def test_profiles():
    g = gen_fig5(EPS)
    order, _ = density_greedy_tree(g)
    assert order == (1, 0)
    assert alg_profile(g, order).breakpoints == ((0, 0), (1, 2), (1 + EPS, 2 + EPS))
    assert alg_profile(g, ()).breakpoints == ((0, 0),)
    h = gen_fig7(EPS)
    prof = alg_profile(h, density_greedy_graph(h)[0])
    assert [prof(b) for b in (0, F(39, 10), 4, 5, 6)] == [0, 0, 2, 4, 6]
    assert prof.first_reaching(3) == 5 and prof.first_reaching(100) is None


def test_light_edge_slack():
    g = gen_fig5(EPS)
    order = (1, 0)
    assert verify_competitive(g, order, 1, 1).holds
    report = verify_competitive(g, order, 1 - EPS - F(1, 1000), 10**6)
    assert not report.holds
    assert (report.witness_budget, report.opt_prize, report.alg_prize) == (EPS, EPS, 0)
    assert min_mu(g, order, 1 - EPS - F(1, 1000)) is INF
    # the light edge becomes affordable exactly at slack 1 - ε
    assert min_alpha(g, order, 1) == 1 - EPS
    assert min_mu(g, order, 1 - EPS) == 1


def test_report_json():
    g = gen_fig5(EPS)
    report = verify_competitive(g, (1, 0), F(1, 2), 2)
    data = json.loads(report.dumps())
    assert data["verdict"] == "violated"
    assert data["witness"] == {"budget": "1/10", "opt_prize": "1/10", "alg_prize": "0/1"}
    assert json.loads(verify_competitive(g, (1, 0), 1, 1).dumps())["verdict"] == "holds"


def test_hub_graph_needs_more_than_eccentricity():
    g = gen_fig7(EPS)
    order = density_greedy_graph(g)[0]
    assert min_mu(g, order, eccentricity(g)) is INF


def test_path_profile_equals_frontier():
    g = build_instance({0: 0, 1: 1, 2: 3}, [(0, 0, 1, 2), (1, 1, 2, 1)], 0)
    assert min_mu(g, (0, 1), 0) == 1
    assert alg_profile(g, (0, 1)).breakpoints == tuple(pareto_frontier(g))


def test_profile_csv():
    rows = profile_csv(gen_fig5(EPS), (1, 0), 1).splitlines()
    assert rows[0] == "B_num,B_den,opt_prize,alg_prize"
    assert rows[1:] == ["0,1,0/1,2/1", "1,10,1/10,21/10", "1,1,2/1,21/10", "11,10,21/10,21/10"]


def test_best_ordering_small_cases():
    single = build_instance({0: 0, 1: 1}, [(0, 0, 1, 1)], 0)
    assert best_incremental_ordering(single, 0) == ((0,), 1)
    order, value = best_incremental_ordering(gen_fig1(1, F(1, 100)), 0)
    assert value == 100 and order == (0, 1)
    assert best_incremental_ordering(gen_fig8(1), 8)[1] == 1


def test_bound_helpers():
    prof = alg_profile(gen_fig5(EPS), (1, 0))
    assert shifted_lower_bound(prof, lambda b: 2 * b, 1, 1) is None
    # below budget 1 the profile is 0 while 2B approaches 2
    assert shifted_lower_bound(prof, lambda b: 2 * b, 0, 1) == 1
    f, total = piecewise_density_bound([(2, 1), (1, EPS)])
    assert total == 1 + EPS and f(F(1, 2)) == 1 and f(1 + EPS / 2) == 2 + EPS / 2 and f(9) == 2 + EPS
    assert fig6a_case_bound(1, 4, F(1, 2)) == 1
    assert fig6a_case_bound(1, 8, F(1, 2)) == F(3, 2)


def test_budget_scaling_check_catches_a_violation():
    # prize sits behind a long edge, so tiny slack cannot reach it
    g = build_instance({0: 0, 1: 0, 2: 8}, [(0, 0, 1, 4), (1, 1, 2, F(1, 4))], 0)
    front = pareto_frontier(g)
    assert budget_scaling_violation(front, eccentricity(g), 2, 1) is None
    assert budget_scaling_violation(front, F(1, 100), 2, 1) is not None


def test_forest_basics():
    g = gen_random_tree(8, 5)
    for k in (1, 2, 3):
        assert forest_extraction(g, 1, k).prize == g.total_prize
    trivial = forest_extraction(g, 0, 1)
    assert trivial.edges == frozenset() and trivial.vertices == {0}
    star = gen_fig6a(1, 2)
    f = best_forest(star, F(1, 2), 3)
    assert f.components == 3 and f.prize == 3 and f.cost == F(1, 2)
    assert best_forest(star, 1, 0) is None
    with pytest.raises(BadParameter):
        forest_extraction(g, F(3, 2), 2)
    with pytest.raises(NotATree):
        forest_extraction(gen_fig8(1), F(1, 2), 2)
    with pytest.raises(TreeTooLarge):
        forest_extraction(gen_random_tree(20, 1), F(1, 2), 2)


@given(instances(max_vertices=5, max_edges=7), st.data())
def test_min_mu_matches_dense_oracle(g, data):
    order = data.draw(st.sampled_from(list(oracles.valid_orderings(g))))
    alpha = data.draw(st.sampled_from([F(0), F(1, 2), eccentricity(g)]))
    expected = oracles.min_mu(g, order, alpha)
    got = min_mu(g, order, alpha)
    assert (got is INF) if expected == float("inf") else got == expected
    assert verify_competitive(g, order, alpha, 1).holds == (got == 1)


@given(instances(max_vertices=5, max_edges=6), st.sampled_from([F(0), F(1), F(3)]))
def test_best_ordering_matches_permutation_search(g, alpha):
    order, value = best_incremental_ordering(g, alpha)
    expected = oracles.best_min_mu(g, alpha)
    validate_ordering(g, order)
    if expected == float("inf"):
        assert value is INF
    else:
        assert value == expected == min_mu(g, order, alpha)


@given(instances(max_vertices=5, max_edges=7), st.data())
def test_min_alpha_is_tight(g, data):
    order = data.draw(st.sampled_from(list(oracles.valid_orderings(g))))
    mu = data.draw(st.sampled_from([F(1), F(2)]))
    a = min_alpha(g, order, mu)
    assert verify_competitive(g, order, a, mu).holds
    if a > 0:
        assert not verify_competitive(g, order, a - F(1, 10**6), mu).holds


@given(instances(max_vertices=5, max_edges=7), st.data())
def test_verify_is_monotone(g, data):
    order = data.draw(st.sampled_from(list(oracles.valid_orderings(g))))
    alpha = data.draw(st.integers(0, 6))
    mu = data.draw(st.integers(1, 3))
    if verify_competitive(g, order, alpha, mu).holds:
        assert verify_competitive(g, order, alpha + 1, mu).holds
        assert verify_competitive(g, order, alpha, mu + 1).holds
    assert verify_competitive(g, order, g.total_cost, 1).holds


@given(trees(max_vertices=7), st.sampled_from([F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]),
       st.integers(1, 4))
def test_forest_bound_holds_on_random_trees(g, lam, k):
    f = forest_extraction(g, lam, k)
    assert f is not None
    assert f.components <= k and 0 in f.vertices and f.cost <= lam * g.total_cost


@given(instances(max_vertices=6, max_edges=8), st.sampled_from([1, 2, 4]),
       st.sampled_from([1, 2, 3]))
def test_budget_scaling_holds(g, delta, h):
    assert budget_scaling_violation(pareto_frontier(g), eccentricity(g), delta, h) is None
