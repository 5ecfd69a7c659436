"""Density-greedy ordering for tree instances.

Each iteration contracts the edges chosen so far into the root, fixes a
min-max subtree of the contracted tree, and appends its single
root-incident edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NoPrizeLeft, NotATree
from .graph import (
    ContractedGraph,
    Graphish,
    Instance,
    RootedSubtree,
    as_instance,
    contract,
    empty_subtree,
    extend,
    format_rational,
    rooted_subtree,
    subinstance,
)


@dataclass(frozen=True)
class TraceStep:
    """One greedy iteration: the appended edge and the subtree it came from.

    ``density`` is the density of the fixed subtree in the contracted graph
    of that iteration and ``extension`` its edge set in the input graph.
    """

    iter: int
    edge: int
    density: Fraction
    extension: frozenset[int]

    def to_json(self) -> dict:
        return {
            "iter": self.iter,
            "edge": self.edge,
            "density": format_rational(self.density),
            "extension": sorted(self.extension),
        }


@dataclass(frozen=True)
class Block:
    """A group of consecutively appended edges forming one fixed subtree.

    ``gain`` is the prize of vertices first reached by the block, so
    ``density == gain / cost``; ``anchor`` is the already-connected vertex
    the block hangs from.
    """

    edges: tuple[int, ...]
    extension: frozenset[int]
    density: Fraction
    anchor: int
    cost: Fraction
    gain: Fraction

    def to_json(self) -> dict:
        return {
            "edges": list(self.edges),
            "density": format_rational(self.density),
            "anchor": self.anchor,
        }


@dataclass
class GreedyTrace:
    instance: Instance
    steps: list[TraceStep] = field(default_factory=list)
    blocks: list[Block] = field(default_factory=list)

    @property
    def ordering(self) -> tuple[int, ...]:
        return tuple(s.edge for s in self.steps)

    def jsonl_records(self, *, with_blocks: bool = False) -> list[dict]:
        out = [s.to_json() for s in self.steps]
        if with_blocks:
            out.append({"blocks": [b.to_json() for b in self.blocks]})
        return out

    def to_jsonl(self, *, with_blocks: bool = False) -> str:
        return "".join(
            json.dumps(r, separators=(",", ":")) + "\n"
            for r in self.jsonl_records(with_blocks=with_blocks)
        )


# ---------------------------------------------------------------------------
# maximum density on trees


def _require_tree(g: Instance) -> None:
    if not g.is_tree:
        raise NotATree("the instance contains a cycle or parallel edges")


def _rooted_children(g: Instance) -> tuple[list[int], dict[int, list[tuple[int, int]]]]:
    """BFS order from the root and ``vertex -> [(child, edge id)]``."""
    order = [g.root]
    children: dict[int, list[tuple[int, int]]] = {g.root: []}
    for x in order:
        for e in g.adjacency[x]:
            y = e.other(x)
            if y not in children:
                children[x].append((y, e.id))
                children[y] = []
                order.append(y)
    return order, children


def _best_subtree(
    g: Instance, d: Fraction, order: list[int], children: dict[int, list[tuple[int, int]]]
) -> tuple[dict[int, Fraction], dict[int, list[int]]]:
    """Tree DP for ``max p(T) − d·c(T)``; a child branch is kept iff it gains > 0.

    Returns each vertex's value and the child edges kept below it.
    """
    value: dict[int, Fraction] = {}
    kept: dict[int, list[int]] = {}
    for x in reversed(order):
        v = g.prizes[x]
        keep = []
        for y, eid in children[x]:
            gain = value[y] - d * g.edges[eid].cost
            if gain > 0:
                v += gain
                keep.append(eid)
        value[x] = v
        kept[x] = keep
    return value, kept


def _collect(g: Instance, start: int, kept: dict[int, list[int]]) -> set[int]:
    out: set[int] = set()
    stack = [start]
    while stack:
        x = stack.pop()
        for eid in kept[x]:
            out.add(eid)
            stack.append(g.edges[eid].other(x))
    return out


def _dinkelbach(g: Instance):
    order, children = _rooted_children(g)
    d = Fraction(0)
    best: RootedSubtree | None = None
    while True:
        value, kept = _best_subtree(g, d, order, children)
        if value[g.root] == 0:
            return d, best, order, children, value, kept
        best = rooted_subtree(g, _collect(g, g.root, kept))
        d = best.prize / best.cost


def max_density_rooted_subtree(g: Graphish) -> tuple[RootedSubtree, Fraction]:
    """A rooted subtree of maximum density and that density.

    Dinkelbach iteration over an exact tree DP. Without any reachable prize
    the empty subtree with density 0 is returned.
    """
    inst = as_instance(g)
    _require_tree(inst)
    d, best, *_ = _dinkelbach(inst)
    if best is None:
        return empty_subtree(inst), Fraction(0)
    return best, d


def min_max_subtree_tree(g: Graphish) -> RootedSubtree:
    """An inclusion-minimal maximum-density rooted subtree of a tree.

    Ties between root branches go to the fewest edges, then to the
    lexicographically smallest sorted edge ids, matching the exact oracle.
    """
    inst = as_instance(g)
    _require_tree(inst)
    d, best, _, children, value, kept = _dinkelbach(inst)
    if best is None:
        raise NoPrizeLeft("no prize is reachable from the root")
    # at d* every root branch gains at most 0; those gaining exactly 0
    # (with the strict inner selection) are the min-max subtrees
    tight = [
        _collect(inst, y, kept) | {eid}
        for y, eid in children[inst.root]
        if value[y] - d * inst.edges[eid].cost == 0
    ]
    if not tight:
        raise AssertionError("maximum density not attained by a single branch")
    return rooted_subtree(inst, min(tight, key=lambda es: (len(es), sorted(es))))


def root_edge(g: Instance, tree: RootedSubtree) -> int:
    """The single edge of ``tree`` incident to the root."""
    incident = [e for e in tree.edges if g.root in (g.edges[e].u, g.edges[e].v)]
    if len(incident) != 1:
        raise ValueError(f"tree has {len(incident)} edges at the root")
    return incident[0]


# ---------------------------------------------------------------------------
# the greedy loop


def blocks_from_steps(g: Instance, steps: Sequence[TraceStep]) -> list[Block]:
    """Group steps into blocks: a block opens with a fixed extension and
    closes once all of that extension's edges have been appended."""
    blocks: list[Block] = []
    reached = {g.root}
    i = 0
    while i < len(steps):
        first = steps[i]
        pending = set(first.extension)
        edges: list[int] = []
        while i < len(steps) and pending:
            edges.append(steps[i].edge)
            pending.discard(steps[i].edge)
            i += 1
        blocks.append(_make_block(g, edges, first.extension, reached, first.density))
    return blocks


def _make_block(
    g: Instance,
    edges: Sequence[int],
    extension: Iterable[int],
    reached: set[int],
    density: Fraction | None = None,
) -> Block:
    """Build a block appended after the vertices in ``reached`` (updated in place)."""
    verts = g.endpoints(edges)
    new = verts - reached
    attach = verts & reached
    cost = g.cost_of(edges)
    gain = g.prize_of(new)
    anchor_vertex = min(attach) if len(attach) == 1 else _first_attach(g, edges, reached)
    reached |= verts
    if density is None:
        density = gain / cost if cost else Fraction(0)
    return Block(tuple(edges), frozenset(extension), density, anchor_vertex, cost, gain)


def _first_attach(g: Instance, edges: Sequence[int], reached: set[int]) -> int:
    e = g.edges[edges[0]]
    return e.u if e.u in reached else e.v


def make_blocks(g: Graphish, groups: Iterable[Sequence[int]]) -> list[Block]:
    """Blocks for consecutive ordered edge groups of an incremental ordering."""
    inst = as_instance(g)
    reached = {inst.root}
    return [_make_block(inst, list(grp), grp, reached) for grp in groups]


def density_greedy_tree(g: Graphish) -> tuple[tuple[int, ...], GreedyTrace]:
    """Order the edges of a tree by repeated min-max subtree extraction."""
    inst = as_instance(g)
    _require_tree(inst)
    trace = GreedyTrace(inst)
    chosen: set[int] = set()
    while True:
        c: ContractedGraph = contract(inst, chosen)
        if not c.graph.terminals:
            break
        t = min_max_subtree_tree(c)
        eid = root_edge(c.graph, t)
        trace.steps.append(
            TraceStep(len(trace.steps), eid, t.density, extend(c, t).edges)
        )
        chosen.add(eid)
    trace.blocks = blocks_from_steps(inst, trace.steps)
    return trace.ordering, trace


def bfs_edge_order(g: Graphish, tree: RootedSubtree) -> list[int]:
    """Edges of a rooted tree in breadth-first order from the root."""
    g = as_instance(g)
    seen = {g.root}
    out: list[int] = []
    frontier = [g.root]
    while frontier:
        nxt = []
        for x in frontier:
            for e in g.adjacency[x]:
                if e.id in tree.edges and e.other(x) not in seen:
                    seen.add(e.other(x))
                    out.append(e.id)
                    nxt.append(e.other(x))
        frontier = nxt
    return out


def order_tree(g: Graphish, tree: RootedSubtree) -> tuple[int, ...]:
    """All edges of a rooted tree, ordered by the tree greedy.

    Edges that lead only to zero prize, which the greedy never needs, follow
    in breadth-first order so every prefix stays a rooted subtree.
    """
    order, _ = density_greedy_tree(subinstance(g, tree))
    done = set(order)
    return order + tuple(e for e in bfs_edge_order(g, tree) if e not in done)
