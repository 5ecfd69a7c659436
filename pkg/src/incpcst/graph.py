"""Instances of the rooted prize-collecting Steiner-tree problem.

This module holds the exact-rational graph model shared by every algorithm:
instances, rooted subtrees, contraction into the root and the reverse
extension, densities of (possibly non-rooted) subtrees and forests, branches
of a rooted tree, and the two root metrics used as additive budget slack
(eccentricity and longest simple root path).

Edge identity is by integer id and survives contraction, so a contracted
graph may contain parallel edges and self-loops.
"""

from __future__ import annotations

import heapq
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Union

from .errors import (
    AmbiguousAnchor,
    DuplicateEdgeId,
    ForeignEdgeId,
    InstanceFormatError,
    InstanceTooLarge,
    NegativePrize,
    NonPositiveCost,
    NotARootedSubtree,
    NotATree,
    NotInTree,
    UnknownVertex,
    UnreachablePrizeVertex,
)
from .unionfind import UnionFind

#: Largest edge count accepted by the exponential routines unless overridden.
DEFAULT_MAX_EDGES = 20


def to_fraction(value: object) -> Fraction:
    """Coerce ints, ``"p/q"`` strings and Fractions; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    num, sep, den = text.strip().partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise InstanceFormatError(f"not a rational: {text!r}") from None
    if d == 0:
        raise InstanceFormatError(f"zero denominator: {text!r}")
    return Fraction(n, d)


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class Edge(NamedTuple):
    id: int
    u: int
    v: int
    cost: Fraction

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise ValueError(f"vertex {x} is not an endpoint of edge {self.id}")


@dataclass(frozen=True, eq=False)
class Instance:
    """An undirected multigraph with edge costs, vertex prizes and a root.

    Build validated instances with :func:`build_instance`; the constructor
    itself performs no checks.
    """

    prizes: Mapping[int, Fraction]
    edges: Mapping[int, Edge]
    root: int

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.prizes)

    @cached_property
    def adjacency(self) -> Mapping[int, tuple[Edge, ...]]:
        """Incident edges per vertex in edge-id order (a self-loop appears once)."""
        adj: dict[int, list[Edge]] = {v: [] for v in self.prizes}
        for eid in sorted(self.edges):
            e = self.edges[eid]
            adj[e.u].append(e)
            if not e.is_loop:
                adj[e.v].append(e)
        return MappingProxyType({v: tuple(es) for v, es in adj.items()})

    @cached_property
    def terminals(self) -> frozenset[int]:
        """V*: the vertices carrying positive prize."""
        return frozenset(v for v, p in self.prizes.items() if p > 0)

    @cached_property
    def total_prize(self) -> Fraction:
        return sum(self.prizes.values(), Fraction(0))

    @cached_property
    def total_cost(self) -> Fraction:
        return sum((e.cost for e in self.edges.values()), Fraction(0))

    @cached_property
    def distances(self) -> Mapping[int, Fraction]:
        """Shortest-path cost from the root to every reachable vertex."""
        dist = {self.root: Fraction(0)}
        heap: list[tuple[Fraction, int]] = [(Fraction(0), self.root)]
        done: set[int] = set()
        while heap:
            d, x = heapq.heappop(heap)
            if x in done:
                continue
            done.add(x)
            for e in self.adjacency[x]:
                y = e.other(x)
                nd = d + e.cost
                if y not in dist or nd < dist[y]:
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        return MappingProxyType(dist)

    @cached_property
    def reachable_edges(self) -> frozenset[int]:
        """Non-loop edges inside the root's connected component."""
        reach = self.distances
        return frozenset(
            eid for eid, e in self.edges.items() if not e.is_loop and e.u in reach
        )

    @cached_property
    def is_tree(self) -> bool:
        """True if the graph has no cycle (no loop, no parallel edge)."""
        uf = UnionFind(self.prizes)
        return all(uf.union(e.u, e.v) for e in self.edges.values())

    def edge(self, eid: int) -> Edge:
        try:
            return self.edges[eid]
        except KeyError:
            raise ForeignEdgeId(f"edge {eid} is not in the graph") from None

    def prize_of(self, vertices: Iterable[int]) -> Fraction:
        return sum((self.prizes[v] for v in vertices), Fraction(0))

    def cost_of(self, edge_ids: Iterable[int]) -> Fraction:
        return sum((self.edge(e).cost for e in edge_ids), Fraction(0))

    def endpoints(self, edge_ids: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for eid in edge_ids:
            e = self.edge(eid)
            out.add(e.u)
            out.add(e.v)
        return frozenset(out)

    def __repr__(self) -> str:
        return (
            f"Instance(|V|={len(self.prizes)}, |E|={len(self.edges)}, "
            f"root={self.root})"
        )


def _make_instance(
    prizes: Mapping[int, Fraction], edges: Mapping[int, Edge], root: int
) -> Instance:
    return Instance(MappingProxyType(dict(prizes)), MappingProxyType(dict(edges)), root)


def build_instance(
    vertices: Mapping[int, object] | Iterable[tuple[int, object]],
    edges: Iterable[tuple[int, int, int, object]],
    root: int,
) -> Instance:
    """Validate a raw description and return an :class:`Instance`.

    ``vertices`` maps vertex id to prize, ``edges`` yields
    ``(edge_id, u, v, cost)``. Values may be ints, Fractions or ``"p/q"``
    strings. The root prize is forced to zero.
    """
    items = vertices.items() if isinstance(vertices, Mapping) else vertices
    prizes: dict[int, Fraction] = {}
    for vid, prize in items:
        if vid in prizes:
            raise InstanceFormatError(f"duplicate vertex id {vid}")
        p = to_fraction(prize)
        if p < 0:
            raise NegativePrize(f"vertex {vid} has negative prize {p}")
        prizes[vid] = p
    if root not in prizes:
        raise UnknownVertex(f"root {root} is not a vertex")
    prizes[root] = Fraction(0)

    edge_map: dict[int, Edge] = {}
    for eid, u, v, cost in edges:
        if eid in edge_map:
            raise DuplicateEdgeId(f"edge id {eid} used twice")
        for x in (u, v):
            if x not in prizes:
                raise UnknownVertex(f"edge {eid} refers to unknown vertex {x}")
        c = to_fraction(cost)
        if c <= 0:
            raise NonPositiveCost(f"edge {eid} has non-positive cost {c}")
        edge_map[eid] = Edge(eid, u, v, c)

    inst = _make_instance(prizes, edge_map, root)
    unreachable = sorted(v for v in inst.terminals if v not in inst.distances)
    if unreachable:
        raise UnreachablePrizeVertex(
            f"prize vertices not connected to the root: {unreachable}"
        )
    return inst


# ---------------------------------------------------------------------------
# subgraphs and rooted subtrees


@dataclass(frozen=True)
class Subgraph:
    """A subgraph given by its vertex and edge-id sets."""

    vertices: frozenset[int]
    edges: frozenset[int]

    @classmethod
    def induced(cls, graph: Instance, edge_ids: Iterable[int]) -> Subgraph:
        """The subgraph induced by an edge set (vertices are the endpoints)."""
        edges = frozenset(edge_ids)
        return cls(graph.endpoints(edges), edges)


@dataclass(frozen=True)
class RootedSubtree:
    """A subtree of an instance that contains its root."""

    edges: frozenset[int]
    vertices: frozenset[int]
    cost: Fraction
    prize: Fraction

    @property
    def density(self) -> Fraction:
        return self.prize / self.cost if self.edges else Fraction(0)

    def __len__(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))


Graphish = Union[Instance, "ContractedGraph"]
SubgraphLike = Union[RootedSubtree, Subgraph, Iterable[int]]


def as_instance(g: Graphish) -> Instance:
    return g.graph if isinstance(g, ContractedGraph) else g


def _edge_set(sub: SubgraphLike) -> frozenset[int]:
    if isinstance(sub, (RootedSubtree, Subgraph)):
        return sub.edges
    return frozenset(sub)


def empty_subtree(g: Graphish) -> RootedSubtree:
    g = as_instance(g)
    return RootedSubtree(frozenset(), frozenset({g.root}), Fraction(0), Fraction(0))


def rooted_subtree(g: Graphish, edge_ids: Iterable[int]) -> RootedSubtree:
    """Validate that ``edge_ids`` form a tree through the root and wrap it."""
    g = as_instance(g)
    edges = frozenset(edge_ids)
    uf = UnionFind([g.root])
    for eid in edges:
        e = g.edge(eid)
        if not uf.union(e.u, e.v):
            raise NotARootedSubtree(f"edge {eid} closes a cycle")
    vertices = g.endpoints(edges) | {g.root}
    if any(not uf.connected(v, g.root) for v in vertices):
        raise NotARootedSubtree("edge set is not connected to the root")
    return RootedSubtree(edges, vertices, g.cost_of(edges), g.prize_of(vertices))


def subinstance(g: Graphish, tree: SubgraphLike) -> Instance:
    """The instance consisting of only the given edges and their endpoints."""
    g = as_instance(g)
    edges = _edge_set(tree)
    verts = g.endpoints(edges) | {g.root}
    return _make_instance(
        {v: g.prizes[v] for v in verts}, {e: g.edges[e] for e in edges}, g.root
    )


def components(g: Graphish, edge_ids: Iterable[int]) -> list[frozenset[int]]:
    """Edge sets of the connected components of an edge-induced subgraph."""
    g = as_instance(g)
    edges = list(edge_ids)
    uf = UnionFind()
    for eid in edges:
        e = g.edge(eid)
        uf.union(e.u, e.v)
    groups: dict[int, set[int]] = defaultdict(set)
    for eid in edges:
        groups[uf.find(g.edges[eid].u)].add(eid)
    return [frozenset(s) for s in groups.values()]


# ---------------------------------------------------------------------------
# contraction and extension


@dataclass(frozen=True, eq=False)
class ContractedGraph:
    """``G/T``: the parent graph with a rooted subtree collapsed into the root.

    ``graph`` is a full :class:`Instance` whose edges keep their parent ids;
    ``vertex_map`` sends every parent vertex to its contracted image.
    """

    parent: Instance
    contracted: frozenset[int]
    vertex_map: Mapping[int, int]
    graph: Instance

    @property
    def surviving(self) -> frozenset[int]:
        return frozenset(self.graph.edges)

    def image(self, sub: SubgraphLike) -> Subgraph:
        """``S/T``: the part of a parent subgraph that survives contraction."""
        edges = _edge_set(sub) - self.contracted
        for eid in edges:
            self.parent.edge(eid)
        return Subgraph.induced(self.graph, edges)


def contract(g: Instance, tree: SubgraphLike) -> ContractedGraph:
    """Contract all edges of a rooted subtree of ``g`` into the root."""
    t = tree if isinstance(tree, RootedSubtree) else None
    if t is None:
        try:
            t = rooted_subtree(g, _edge_set(tree))
        except ForeignEdgeId as exc:
            raise NotARootedSubtree(str(exc)) from None
    vmap = {v: (g.root if v in t.vertices else v) for v in g.prizes}
    prizes = {v: g.prizes[v] for v in g.prizes if v not in t.vertices}
    prizes[g.root] = Fraction(0)
    edges = {
        eid: Edge(eid, vmap[e.u], vmap[e.v], e.cost)
        for eid, e in g.edges.items()
        if eid not in t.edges
    }
    return ContractedGraph(
        g, t.edges, MappingProxyType(vmap), _make_instance(prizes, edges, g.root)
    )


def extend(c: ContractedGraph, sub: SubgraphLike) -> Subgraph:
    """``C⁺``: the parent subgraph induced by the edges of ``C``."""
    edges = _edge_set(sub)
    foreign = sorted(e for e in edges if e not in c.graph.edges)
    if foreign:
        raise ForeignEdgeId(f"edges not in the contracted graph: {foreign}")
    return Subgraph.induced(c.parent, edges)


# ---------------------------------------------------------------------------
# densities


def _tree_distances(g: Instance, tree_edges: frozenset[int]) -> dict[int, Fraction]:
    dist = {g.root: Fraction(0)}
    queue = deque([g.root])
    adj: dict[int, list[Edge]] = defaultdict(list)
    for eid in tree_edges:
        e = g.edge(eid)
        adj[e.u].append(e)
        adj[e.v].append(e)
    while queue:
        x = queue.popleft()
        for e in adj[x]:
            y = e.other(x)
            if y not in dist:
                dist[y] = dist[x] + e.cost
                queue.append(y)
    return dist


def anchor(
    g: Graphish, vertices: Iterable[int], *, base_tree: SubgraphLike | None = None
) -> int:
    """The unique vertex of a connected subgraph closest to the root.

    Distances are taken in ``g`` or, when ``base_tree`` is given, inside that
    rooted tree (where the closest vertex is always unique).
    """
    g = as_instance(g)
    verts = list(vertices)
    if base_tree is not None:
        dist = _tree_distances(g, rooted_subtree(g, _edge_set(base_tree)).edges)
        missing = [v for v in verts if v not in dist]
        if missing:
            raise NotInTree(f"vertices {missing} are not in the base tree")
    else:
        dist = g.distances
    best = min(dist[v] for v in verts)
    closest = [v for v in verts if dist[v] == best]
    if len(closest) > 1:
        raise AmbiguousAnchor(
            f"vertices {sorted(closest)} tie at distance {best}; pass a base tree"
        )
    return closest[0]


def density(
    g: Graphish, sub: SubgraphLike, *, base_tree: SubgraphLike | None = None
) -> Fraction:
    """Density of a subtree or forest, ignoring each component's anchor prize.

    ``(Σ p(T_i) − p(r_{T_i})) / Σ c(T_i)``; zero for an empty edge set.
    """
    g = as_instance(g)
    edges = _edge_set(sub)
    if not edges:
        return Fraction(0)
    gain = Fraction(0)
    for comp in components(g, edges):
        verts = g.endpoints(comp)
        gain += g.prize_of(verts) - g.prizes[anchor(g, verts, base_tree=base_tree)]
    return gain / g.cost_of(edges)


# ---------------------------------------------------------------------------
# root metrics


def eccentricity(g: Graphish) -> Fraction:
    """χ: largest shortest-path cost from the root to a reachable vertex."""
    return max(as_instance(g).distances.values())


def longest_root_path(g: Graphish, *, max_edges: int = DEFAULT_MAX_EDGES) -> Fraction:
    """γ: the maximum cost of a simple path that starts at the root.

    Exhaustive depth-first search; refuses graphs above ``max_edges``.
    """
    g = as_instance(g)
    if len(g.reachable_edges) > max_edges:
        raise InstanceTooLarge(
            f"{len(g.reachable_edges)} edges exceed the bound of {max_edges}"
        )
    best = Fraction(0)
    on_path = {g.root}

    def dfs(x: int, length: Fraction) -> None:
        nonlocal best
        if length > best:
            best = length
        for e in g.adjacency[x]:
            y = e.other(x)
            if y in on_path:
                continue
            on_path.add(y)
            dfs(y, length + e.cost)
            on_path.remove(y)

    dfs(g.root, Fraction(0))
    return best


# ---------------------------------------------------------------------------
# branches


def _orient(g: Instance, edges: frozenset[int], top: int) -> dict[int, tuple[int, int]]:
    """Parent pointers ``child -> (parent, edge)`` of a tree hanging from ``top``."""
    adj: dict[int, list[Edge]] = defaultdict(list)
    uf = UnionFind([top])
    for eid in edges:
        e = g.edge(eid)
        if not uf.union(e.u, e.v):
            raise NotATree(f"edge {eid} closes a cycle")
        adj[e.u].append(e)
        adj[e.v].append(e)
    parent: dict[int, tuple[int, int]] = {}
    seen = {top}
    queue = deque([top])
    while queue:
        x = queue.popleft()
        for e in adj[x]:
            y = e.other(x)
            if y not in seen:
                seen.add(y)
                parent[y] = (x, e.id)
                queue.append(y)
    if len(parent) != len(edges):
        raise NotATree("edge set is not connected")
    return parent


def branch(
    g: Graphish,
    tree: SubgraphLike,
    *,
    edge: int | None = None,
    vertex: int | None = None,
    top: int | None = None,
) -> Subgraph:
    """The branch of a tree rooted at an edge or at a vertex.

    The tree hangs from ``top`` (default: its vertex closest to the root).
    An edge branch holds both endpoints of the edge and everything behind it;
    a vertex branch holds the vertex and everything behind it.
    """
    if (edge is None) == (vertex is None):
        raise TypeError("pass exactly one of edge= or vertex=")
    g = as_instance(g)
    edges = _edge_set(tree)
    verts = g.endpoints(edges) if edges else frozenset({g.root if top is None else top})
    if top is None:
        top = anchor(g, verts)
    elif top not in verts:
        raise NotInTree(f"vertex {top} is not in the tree")
    parent = _orient(g, edges, top)

    children: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for child, (par, eid) in parent.items():
        children[par].append((child, eid))

    def below(v: int) -> tuple[set[int], set[int]]:
        vs, es = {v}, set()
        stack = [v]
        while stack:
            x = stack.pop()
            for child, eid in children[x]:
                vs.add(child)
                es.add(eid)
                stack.append(child)
        return vs, es

    if vertex is not None:
        if vertex not in verts:
            raise NotInTree(f"vertex {vertex} is not in the tree")
        vs, es = below(vertex)
        return Subgraph(frozenset(vs), frozenset(es))
    if edge not in edges:
        raise NotInTree(f"edge {edge} is not in the tree")
    e = g.edges[edge]
    child = e.v if parent.get(e.v, (None, None))[1] == edge else e.u
    vs, es = below(child)
    return Subgraph(frozenset(vs | {parent[child][0]}), frozenset(es | {edge}))


# ---------------------------------------------------------------------------
# forests


@dataclass(frozen=True)
class Forest:
    """Vertex-disjoint trees; ``anchors`` lists each component's top vertex."""

    vertices: frozenset[int]
    edges: frozenset[int]
    components: int
    anchors: tuple[int, ...]
    cost: Fraction
    prize: Fraction


def forest(g: Graphish, vertices: Iterable[int], edge_ids: Iterable[int]) -> Forest:
    """Wrap a vertex/edge set as a :class:`Forest`, validating acyclicity."""
    g = as_instance(g)
    edges = frozenset(edge_ids)
    verts = frozenset(vertices) | g.endpoints(edges)
    uf = UnionFind(verts)
    for eid in edges:
        e = g.edges[eid]
        if not uf.union(e.u, e.v):
            raise NotATree(f"edge {eid} closes a cycle")
    groups: dict[int, list[int]] = defaultdict(list)
    for v in verts:
        groups[uf.find(v)].append(v)
    dist = g.distances
    anchors = tuple(sorted(min(vs, key=lambda v: (dist[v], v)) for vs in groups.values()))
    return Forest(verts, edges, len(groups), anchors, g.cost_of(edges), g.prize_of(verts))
