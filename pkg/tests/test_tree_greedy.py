from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given

from incpcst import (
    NoPrizeLeft,
    NotATree,
    build_instance,
    contract,
    density,
    density_greedy_tree,
    eccentricity,
    max_density_rooted_subtree,
    min_max_subtree_tree,
    rooted_subtree,
    validate_ordering,
)
from incpcst.graph import branch
from incpcst.tree_greedy import make_blocks, order_tree

from . import oracles
from .conftest import trees

F = Fraction


@pytest.fixture
def forked():
    # r -0- a -1- b(4) and r -2- c(3)
    return build_instance({0: 0, 1: 0, 2: 4, 3: 3}, [(0, 0, 1, 1), (1, 1, 2, 1), (2, 0, 3, 1)], 0)


def test_greedy_on_small_fork(forked):
    order, trace = density_greedy_tree(forked)
    assert order == (2, 0, 1)
    assert [(s.edge, s.density, sorted(s.extension)) for s in trace.steps] == [
        (2, 3, [2]),
        (0, 2, [0, 1]),
        (1, 4, [1]),
    ]
    assert [(b.edges, b.density, b.anchor) for b in trace.blocks] == [((2,), 3, 0), ((0, 1), 2, 0)]


def test_trace_jsonl(forked):
    _, trace = density_greedy_tree(forked)
    lines = trace.to_jsonl(with_blocks=True).splitlines()
    assert json.loads(lines[0]) == {"iter": 0, "edge": 2, "density": "3/1", "extension": [2]}
    assert json.loads(lines[-1])["blocks"][1] == {"edges": [0, 1], "density": "2/1", "anchor": 0}


def test_max_density_and_min_max(forked):
    t, d = max_density_rooted_subtree(forked)
    assert d == 3 and t.edges == {2}
    assert min_max_subtree_tree(forked).edges == {2}


def test_tie_goes_to_fewest_edges_then_lowest_ids():
    g = build_instance({0: 0, 1: 2, 2: 2}, [(5, 0, 2, 1), (3, 0, 1, 1)], 0)
    assert min_max_subtree_tree(g).edges == {3}


def test_zero_prize_tails_are_left_out():
    g = build_instance({0: 0, 1: 2, 2: 0}, [(0, 0, 1, 1), (1, 1, 2, 1)], 0)
    assert density_greedy_tree(g)[0] == (0,)
    assert order_tree(g, rooted_subtree(g, [0, 1])) == (0, 1)


def test_rejects_non_trees_and_prizeless_trees():
    tri = build_instance({0: 0, 1: 1, 2: 1}, [(0, 0, 1, 1), (1, 1, 2, 1), (2, 0, 2, 1)], 0)
    with pytest.raises(NotATree):
        density_greedy_tree(tri)
    bare = build_instance({0: 0, 1: 0}, [(0, 0, 1, 1)], 0)
    with pytest.raises(NoPrizeLeft):
        min_max_subtree_tree(bare)
    assert max_density_rooted_subtree(bare)[1] == 0
    assert density_greedy_tree(bare)[0] == ()


def test_make_blocks(forked):
    blocks = make_blocks(forked, [(2,), (0, 1)])
    assert [(b.gain, b.cost, b.density) for b in blocks] == [(3, 1, 3), (4, 2, 2)]


@given(trees())
def test_densities_match_oracle(g):
    assert max_density_rooted_subtree(g)[1] == oracles.max_density(g)
    if g.terminals:
        t = min_max_subtree_tree(g)
        assert t.edges in oracles.min_max_subtrees(g)


@given(trees())
def test_min_max_branches_are_no_sparser(g):
    if not g.terminals:
        return
    t = min_max_subtree_tree(g)
    for eid in t.edges:
        sub = branch(g, t, edge=eid)
        d = density(g, sub.edges)
        assert d >= t.density
        if sub.edges != t.edges:
            assert d > t.density


@given(trees())
def test_greedy_trace_invariants(g):
    order, trace = density_greedy_tree(g)
    validate_ordering(g, order)
    for b in trace.blocks:
        assert set(b.edges) == b.extension  # the fixed subtree is appended consecutively
    for a, b in zip(trace.blocks, trace.blocks[1:]):
        assert a.density >= b.density
    i = 0
    for b in trace.blocks:
        for step in trace.steps[i + 1:i + len(b.edges)]:
            assert step.extension < b.extension and step.density > b.density
        i += len(b.edges)
    chosen: set[int] = set()
    for step in trace.steps:
        c = contract(g, chosen)
        assert density(c, step.extension) == step.density
        chosen.add(step.edge)


@given(trees(max_vertices=6))
def test_greedy_is_competitive_with_eccentricity_slack(g):
    order, _ = density_greedy_tree(g)
    assert oracles.min_mu(g, order, eccentricity(g)) == 1


def test_tie_prefers_the_smaller_branch():
    # branch {1, 2} has density 5/10, branch {3} has 1/2 / 1
    g = build_instance({0: 0, 1: 0, 2: 0, 3: 5, 4: F(1, 2)},
                       [(0, 0, 1, 1), (1, 0, 2, 2), (2, 2, 3, 8), (3, 0, 4, 1)], 0)
    assert min_max_subtree_tree(g).edges == {3}
    assert density_greedy_tree(g)[0] == (3, 1, 2)
