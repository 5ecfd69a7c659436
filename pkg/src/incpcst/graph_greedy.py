"""Density-greedy ordering for general graphs.

Each round fixes a min-max subtree of the contracted graph (exactly, by
enumeration, unless another oracle is plugged in), orders its edges with
the tree greedy, and contracts them.
"""

from __future__ import annotations

from typing import Callable

from .enumeration import subtree_table
from .errors import InstanceTooLarge
from .graph import (
    DEFAULT_MAX_EDGES,
    ContractedGraph,
    Graphish,
    Instance,
    RootedSubtree,
    as_instance,
    contract,
    extend,
    rooted_subtree,
)
from .tree_greedy import (
    Block,
    GreedyTrace,
    TraceStep,
    _make_block,
    order_tree,
)

Oracle = Callable[[ContractedGraph], RootedSubtree]


def min_max_subtree_exact(
    g: Graphish, *, max_edges: int = DEFAULT_MAX_EDGES, backend: str | None = None
) -> RootedSubtree:
    """A maximum-density rooted subtree with the fewest edges.

    Remaining ties go to the lexicographically smallest sorted edge-id tuple.
    """
    table = subtree_table(g, max_edges=max_edges, backend=backend)
    return table.subtree(table.min_max_row())


def density_greedy_graph(
    g: Graphish,
    *,
    oracle: Oracle | None = None,
    max_edges: int = DEFAULT_MAX_EDGES,
    backend: str | None = None,
) -> tuple[tuple[int, ...], GreedyTrace]:
    """Order the edges of a graph by repeated min-max subtree extraction.

    ``oracle`` maps a contracted graph to the subtree to fix next; by default
    the exact enumeration oracle is used.
    """
    inst = as_instance(g)
    if len(inst.reachable_edges) > max_edges:
        raise InstanceTooLarge(
            f"{len(inst.reachable_edges)} edges exceed the enumeration bound of {max_edges}"
        )
    if oracle is None:
        def oracle(c: ContractedGraph) -> RootedSubtree:
            return min_max_subtree_exact(c, max_edges=max_edges, backend=backend)

    trace = GreedyTrace(inst)
    chosen: set[int] = set()
    reached = {inst.root}
    while True:
        c = contract(inst, chosen)
        if not c.graph.terminals:
            break
        t = oracle(c)
        ext = extend(c, t).edges
        order = order_tree(c, t)
        for eid in order:
            trace.steps.append(TraceStep(len(trace.steps), eid, t.density, ext))
        trace.blocks.append(_make_block(inst, order, ext, reached, t.density))
        chosen.update(order)
    return trace.ordering, trace


# ---------------------------------------------------------------------------
# density-order repair for approximate oracles


def _merge(inst: Instance, before: set[int], a: Block, b: Block) -> Block:
    """One block covering both, ordered by the tree greedy inside ``G/before``."""
    c = contract(inst, before)
    edges = order_tree(c, rooted_subtree(c, set(a.edges) | set(b.edges)))
    reached = set(inst.endpoints(before)) | {inst.root}
    return _make_block(inst, edges, a.extension | b.extension, reached)


def _attachment(inst: Instance, blk: Block, reached: set[int]) -> frozenset[int]:
    return inst.endpoints(blk.edges) & reached


def postprocess_blocks(g: Graphish, blocks: list[Block]) -> list[Block]:
    """Make block densities nonincreasing.

    Whenever a block is denser than its predecessor the two are swapped if
    both hang from one and the same previously reached vertex and the later
    block does not pass through the earlier one; otherwise they are merged.
    The scan then steps back one position.
    """
    inst = as_instance(g)
    blocks = list(blocks)
    i = 0
    while i + 1 < len(blocks):
        a, b = blocks[i], blocks[i + 1]
        if b.density <= a.density:
            i += 1
            continue
        before = {e for blk in blocks[:i] for e in blk.edges}
        reached = set(inst.endpoints(before)) | {inst.root}
        at_a = _attachment(inst, a, reached)
        fresh = inst.endpoints(a.edges) - reached
        independent = not (inst.endpoints(b.edges) & fresh)
        if independent and len(at_a) == 1 and _attachment(inst, b, reached) == at_a:
            blocks[i], blocks[i + 1] = b, a
        else:
            blocks[i:i + 2] = [_merge(inst, before, a, b)]
        i = max(i - 1, 0)
    return blocks


def postprocess_density_order(trace: GreedyTrace) -> tuple[int, ...]:
    """The ordering of ``trace`` after the swap/merge repair of its blocks."""
    blocks = postprocess_blocks(trace.instance, trace.blocks)
    return tuple(e for blk in blocks for e in blk.edges)
