from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from incpcst import (
    InstanceTooLarge,
    alg_profile,
    build_instance,
    density,
    density_greedy_graph,
    density_greedy_tree,
    gen_fig7,
    gen_fig8,
    gen_random_graph,
    longest_root_path,
    postprocess_density_order,
    rooted_subtree,
    validate_ordering,
)
from incpcst.graph_greedy import postprocess_blocks

from . import oracles
from .conftest import instances, trees

F = Fraction


def first_root_edge(c):
    """A deliberately poor oracle: the lowest-id edge leaving the root."""
    g = c.graph
    eid = min(e.id for e in g.adjacency[g.root] if not e.is_loop)
    return rooted_subtree(c, [eid])


@pytest.mark.parametrize("eps", [F(1, 10), F(1, 5)])
def test_hub_graph_starts_with_the_hub(eps):
    g = gen_fig7(eps)
    order, trace = density_greedy_graph(g)
    assert order == (0, 1, 2, 3, 7)
    assert trace.blocks[0].density == F(6, 6)
    prof = alg_profile(g, order)
    assert prof.value(F(4) - F(1, 10**9)) == 0
    assert prof.value(4) == 2


def test_gadget_copies():
    assert density_greedy_graph(gen_fig8(1))[0] == (0, 1, 2)
    order, trace = density_greedy_graph(gen_fig8(2))
    assert order == (0, 4, 1, 2, 5, 6)
    assert [b.density for b in trace.blocks] == [1, 1, F(3, 5), F(3, 5)]


def test_trace_steps_share_the_outer_subtree():
    order, trace = density_greedy_graph(gen_fig7(F(1, 10)))
    assert [s.extension for s in trace.steps[:4]] == [frozenset({0, 1, 2, 3})] * 4
    assert trace.steps[4].extension == {7}


def test_size_bound():
    with pytest.raises(InstanceTooLarge):
        density_greedy_graph(gen_random_graph(8, 21, 3))


def test_repair_swaps_blocks_with_a_common_anchor():
    g = build_instance({0: 0, 1: 1, 2: 2}, [(0, 0, 1, 1), (1, 0, 2, 1)], 0)
    order, trace = density_greedy_graph(g, oracle=first_root_edge)
    assert order == (0, 1)
    assert [b.density for b in trace.blocks] == [1, 2]
    assert postprocess_density_order(trace) == (1, 0)


def test_repair_merges_blocks_with_different_anchors():
    g = build_instance({0: 0, 1: 1, 2: 5}, [(0, 0, 1, 1), (1, 1, 2, 1)], 0)
    _, trace = density_greedy_graph(g, oracle=first_root_edge)
    blocks = postprocess_blocks(g, trace.blocks)
    assert len(blocks) == 1
    assert blocks[0].edges == (0, 1) and blocks[0].density == 3


@given(instances(max_vertices=6, max_edges=8))
def test_repair_yields_nonincreasing_blocks(g):
    _, trace = density_greedy_graph(g, oracle=first_root_edge)
    blocks = postprocess_blocks(g, trace.blocks)
    order = tuple(e for b in blocks for e in b.edges)
    validate_ordering(g, order)
    assert sorted(order) == sorted(trace.ordering)
    for a, b in zip(blocks, blocks[1:]):
        assert a.density >= b.density


@given(instances(max_vertices=6, max_edges=8))
def test_exact_greedy_invariants(g):
    order, trace = density_greedy_graph(g)
    validate_ordering(g, order)
    whole = frozenset(order)
    chain = [density(g, b.extension, base_tree=whole) for b in trace.blocks]
    assert chain == sorted(chain, reverse=True)
    assert postprocess_density_order(trace) == order


@given(instances(max_vertices=5, max_edges=7))
def test_exact_greedy_is_two_competitive_with_path_slack(g):
    order, _ = density_greedy_graph(g)
    assert oracles.min_mu(g, order, longest_root_path(g)) <= 2


@given(trees())
def test_matches_tree_greedy_on_trees(g):
    assert density_greedy_graph(g)[0] == density_greedy_tree(g)[0]
