"""Exhaustive enumeration of rooted subtrees and exact queries over it.

The enumeration itself runs in a compiled kernel when ``incpcst._kernel``
is importable and the instance fits its fixed-width arithmetic; otherwise,
or when ``INCPCST_PURE_PYTHON`` is set, the pure-Python kernel is used.
Both kernels produce the same table in the same order.

Costs and prizes are scaled to integers by the lcm of their denominators,
so every query below is exact.
"""

from __future__ import annotations

import math
import os
import weakref
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import _kernel_py
from .errors import InstanceTooLarge, NoPrizeLeft
from .graph import DEFAULT_MAX_EDGES, Graphish, Instance, RootedSubtree, as_instance


def _load_compiled() -> Callable | None:
    if os.environ.get("INCPCST_PURE_PYTHON"):
        return None
    try:
        from ._kernel import enumerate_subtrees
    except ImportError:
        return None
    return enumerate_subtrees


_compiled = _load_compiled()

#: Backend used by default: ``"cython"`` if the extension loaded, else ``"python"``.
BACKEND = "cython" if _compiled is not None else "python"

_KERNEL_LIMIT = 2**62  # sums handled by the int64 kernel
_PRODUCT_LIMIT = 2**31  # sums whose pairwise products stay inside int64


def available_backends() -> tuple[str, ...]:
    return ("cython", "python") if _compiled is not None else ("python",)


def _lcm_of_denominators(values) -> int:
    out = 1
    for x in values:
        out = math.lcm(out, x.denominator)
    return out


class SubtreeTable:
    """Every rooted subtree of an instance as parallel integer arrays.

    Row ``i`` describes one subtree: ``edge_mask[i]`` and ``vertex_mask[i]``
    are bitsets over :attr:`edge_ids` and :attr:`vertex_ids`, ``cost[i]`` and
    ``prize[i]`` are scaled by :attr:`cost_scale` and :attr:`prize_scale`,
    and ``size[i]`` is the edge count. Row 0 is the empty tree.
    """

    def __init__(
        self,
        g: Graphish,
        *,
        cap: int | None = None,
        max_edges: int = DEFAULT_MAX_EDGES,
        backend: str | None = None,
    ) -> None:
        g = as_instance(g)
        self.instance = g
        edge_ids = sorted(g.reachable_edges)
        if len(edge_ids) > max_edges:
            raise InstanceTooLarge(
                f"{len(edge_ids)} edges exceed the enumeration bound of {max_edges}"
            )
        reach = g.distances
        self.vertex_ids = (g.root,) + tuple(sorted(v for v in reach if v != g.root))
        self.edge_ids = tuple(edge_ids)
        vindex = {v: i for i, v in enumerate(self.vertex_ids)}
        edges = [g.edges[e] for e in edge_ids]
        self.cost_scale = _lcm_of_denominators(e.cost for e in edges)
        self.prize_scale = _lcm_of_denominators(g.prizes[v] for v in self.vertex_ids)
        icost = [int(e.cost * self.cost_scale) for e in edges]
        iprize = [int(g.prizes[v] * self.prize_scale) for v in self.vertex_ids]
        eu = [vindex[e.u] for e in edges]
        ev = [vindex[e.v] for e in edges]
        n = len(self.vertex_ids)
        incident: list[list[int]] = [[] for _ in range(n)]
        for i in range(len(edges)):
            if eu[i] == ev[i]:
                continue
            incident[eu[i]].append(i)
            incident[ev[i]].append(i)
        adj_start = [0]
        adj_edge: list[int] = []
        for lst in incident:
            adj_edge.extend(lst)
            adj_start.append(len(adj_edge))

        total_c, total_p = sum(icost), sum(iprize)
        fits_kernel = (
            n <= 64 and len(edges) <= 64
            and total_c < _KERNEL_LIMIT and total_p < _KERNEL_LIMIT
        )
        if backend is None:
            backend = "cython" if (_compiled is not None and fits_kernel) else "python"
        if backend == "cython":
            if _compiled is None:
                raise RuntimeError("compiled kernel is not available")
            if not fits_kernel:
                raise ValueError("instance exceeds the compiled kernel's fixed-width range")
            kernel = _compiled
        elif backend == "python":
            kernel = _kernel_py.enumerate_subtrees
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend

        raw = kernel(n, eu, ev, icost, iprize, adj_start, adj_edge, -1 if cap is None else cap)
        exact = total_c < _PRODUCT_LIMIT and total_p < _PRODUCT_LIMIT
        if exact and n <= 64 and len(edges) <= 64:
            mask_dtype, num_dtype = np.uint64, np.int64
        else:
            mask_dtype = num_dtype = object
        self.edge_mask = np.asarray(raw[0], dtype=mask_dtype)
        self.vertex_mask = np.asarray(raw[1], dtype=mask_dtype)
        self.cost = np.asarray(raw[2], dtype=num_dtype)
        self.prize = np.asarray(raw[3], dtype=num_dtype)
        self.size = np.asarray(raw[4], dtype=np.int64)
        self.terminal_mask = sum(
            1 << i for i, v in enumerate(self.vertex_ids) if g.prizes[v] > 0
        )

    def __len__(self) -> int:
        return len(self.cost)

    # -- row accessors -------------------------------------------------------

    def edges_of(self, i: int) -> tuple[int, ...]:
        mask = int(self.edge_mask[i])
        return tuple(e for b, e in enumerate(self.edge_ids) if (mask >> b) & 1)

    def subtree(self, i: int) -> RootedSubtree:
        vmask = int(self.vertex_mask[i])
        return RootedSubtree(
            frozenset(self.edges_of(i)),
            frozenset(v for b, v in enumerate(self.vertex_ids) if (vmask >> b) & 1),
            Fraction(int(self.cost[i]), self.cost_scale),
            Fraction(int(self.prize[i]), self.prize_scale),
        )

    def cost_of(self, i: int) -> Fraction:
        return Fraction(int(self.cost[i]), self.cost_scale)

    def prize_of(self, i: int) -> Fraction:
        return Fraction(int(self.prize[i]), self.prize_scale)

    def spans_terminals(self, i: int) -> bool:
        return int(self.vertex_mask[i]) & self.terminal_mask == self.terminal_mask

    def __iter__(self) -> Iterator[RootedSubtree]:
        for i in range(len(self)):
            yield self.subtree(i)

    def _pick(self, rows: np.ndarray) -> int:
        """Among candidate rows: fewest edges, then lexicographic edge ids."""
        rows = [int(i) for i in rows]
        fewest = min(int(self.size[i]) for i in rows)
        return min((i for i in rows if self.size[i] == fewest), key=self.edges_of)

    # -- queries -------------------------------------------------------------

    def _dinkelbach(self) -> tuple[int, int]:
        """Maximum scaled ratio prize/cost as ``(num, den)``; ``(0, 1)`` if none."""
        nonempty = self.cost > 0
        if not nonempty.any() or not (self.prize[nonempty] > 0).any():
            return 0, 1
        start = int(np.flatnonzero(nonempty)[np.argmax(self.prize[nonempty])])
        num, den = int(self.prize[start]), int(self.cost[start])
        while True:
            slack = self.prize * den - self.cost * num
            best = int(np.argmax(slack))
            if slack[best] <= 0:
                return num, den
            num, den = int(self.prize[best]), int(self.cost[best])

    def max_density(self) -> Fraction:
        num, den = self._dinkelbach()
        return Fraction(num, den) * self.cost_scale / self.prize_scale

    def min_max_row(self) -> int:
        """Row of an inclusion-minimal maximum-density rooted subtree."""
        num, den = self._dinkelbach()
        if num == 0:
            raise NoPrizeLeft("no rooted subtree collects positive prize")
        tight = (self.prize * den - self.cost * num == 0) & (self.cost > 0)
        return self._pick(np.flatnonzero(tight))

    def best_within_budget_row(self, budget: Fraction) -> int:
        """Row of a maximum-prize subtree with cost at most ``budget``.

        Ties go to minimal cost, then to fewest edges and lexicographic ids.
        """
        if budget < 0:
            raise ValueError("budget must be nonnegative")
        limit = math.floor(budget * self.cost_scale)
        feasible = np.flatnonzero(self.cost <= limit)
        prizes = self.prize[feasible]
        top = prizes.max()
        feasible = feasible[prizes == top]
        costs = self.cost[feasible]
        return self._pick(feasible[costs == costs.min()])

    def frontier(self) -> list[tuple[Fraction, Fraction]]:
        """Nondominated ``(cost, prize)`` pairs, increasing in both."""
        if self.cost.dtype == object:
            pairs = sorted(zip(self.cost.tolist(), self.prize.tolist()),
                           key=lambda cp: (cp[0], -cp[1]))
            costs = [c for c, _ in pairs]
            prizes = [p for _, p in pairs]
        else:
            order = np.lexsort((-self.prize, self.cost))
            costs = self.cost[order].tolist()
            prizes = self.prize[order].tolist()
        out: list[tuple[Fraction, Fraction]] = []
        best = -1
        for c, p in zip(costs, prizes):
            if p > best:
                best = p
                out.append((Fraction(c, self.cost_scale), Fraction(p, self.prize_scale)))
        return out


_cache: "weakref.WeakKeyDictionary[Instance, dict]" = weakref.WeakKeyDictionary()


def subtree_table(
    g: Graphish,
    *,
    cap: int | None = None,
    max_edges: int = DEFAULT_MAX_EDGES,
    backend: str | None = None,
) -> SubtreeTable:
    """Cached :class:`SubtreeTable` for an instance (instances are immutable)."""
    g = as_instance(g)
    if len(g.reachable_edges) > max_edges:
        raise InstanceTooLarge(
            f"{len(g.reachable_edges)} edges exceed the enumeration bound of {max_edges}"
        )
    per_instance = _cache.setdefault(g, {})
    key = (cap, backend)
    if key not in per_instance:
        per_instance[key] = SubtreeTable(g, cap=cap, max_edges=max_edges, backend=backend)
    return per_instance[key]


class SubtreeEnumeration:
    """Single-pass stream over all rooted subtrees (the empty tree first)."""

    def __init__(self, g: Graphish, cap: int | None = None, *,
                 max_edges: int = DEFAULT_MAX_EDGES, backend: str | None = None) -> None:
        self.instance = as_instance(g)
        self.cap = cap
        self.table = subtree_table(g, cap=cap, max_edges=max_edges, backend=backend)

    def __len__(self) -> int:
        return len(self.table)

    def __iter__(self) -> Iterator[RootedSubtree]:
        return iter(self.table)


def enumerate_rooted_subtrees(
    g: Graphish,
    cap: int | None = None,
    *,
    max_edges: int = DEFAULT_MAX_EDGES,
    backend: str | None = None,
) -> SubtreeEnumeration:
    """All rooted subtrees of ``g`` with at most ``cap`` edges."""
    return SubtreeEnumeration(g, cap, max_edges=max_edges, backend=backend)
