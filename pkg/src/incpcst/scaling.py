"""Capacity scaling and the exact budget oracle behind it."""

from __future__ import annotations

import bisect
import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .enumeration import subtree_table
from .graph import (
    DEFAULT_MAX_EDGES,
    Graphish,
    Instance,
    RootedSubtree,
    as_instance,
    eccentricity,
    format_rational,
)
from .tree_greedy import order_tree
from .unionfind import UnionFind


@dataclass(frozen=True)
class ScalingStep:
    i: int
    budget: Fraction
    tree: frozenset[int]
    prize: Fraction
    cost: Fraction
    appended: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "budget": format_rational(self.budget),
            "tree": sorted(self.tree),
            "prize": format_rational(self.prize),
            "cost": format_rational(self.cost),
            "appended": list(self.appended),
        }


@dataclass
class ScalingTrace:
    instance: Instance
    chi: Fraction
    steps: list[ScalingStep] = field(default_factory=list)

    @property
    def ordering(self) -> tuple[int, ...]:
        return tuple(e for s in self.steps for e in s.appended)

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(s.to_json(), separators=(",", ":")) + "\n" for s in self.steps
        )


@dataclass(frozen=True)
class ParetoFrontier:
    """Nondominated ``(cost, prize)`` pairs, strictly increasing in both."""

    points: tuple[tuple[Fraction, Fraction], ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def costs(self) -> list[Fraction]:
        return [c for c, _ in self.points]

    def opt(self, budget: Fraction) -> Fraction:
        """Best prize of a rooted subtree with cost at most ``budget``."""
        i = bisect.bisect_right(self.costs, budget)
        return self.points[i - 1][1] if i else Fraction(0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cost_num", "cost_den", "prize_num", "prize_den"])
        for c, p in self.points:
            w.writerow([c.numerator, c.denominator, p.numerator, p.denominator])
        return buf.getvalue()


def pareto_frontier(
    g: Graphish, *, max_edges: int = DEFAULT_MAX_EDGES, backend: str | None = None
) -> ParetoFrontier:
    """The exact budget-to-best-prize profile, as its nondominated points."""
    table = subtree_table(g, max_edges=max_edges, backend=backend)
    return ParetoFrontier(tuple(table.frontier()))


def optimal_budget_subtree(
    g: Graphish,
    budget: Fraction,
    *,
    max_edges: int = DEFAULT_MAX_EDGES,
    backend: str | None = None,
) -> RootedSubtree:
    """A maximum-prize rooted subtree of cost at most ``budget``.

    Ties go to the cheapest, then fewest edges, then smallest edge ids.
    """
    table = subtree_table(g, max_edges=max_edges, backend=backend)
    return table.subtree(table.best_within_budget_row(Fraction(budget)))


def capacity_scaling(
    g: Graphish, *, max_edges: int = DEFAULT_MAX_EDGES, backend: str | None = None
) -> tuple[tuple[int, ...], ScalingTrace]:
    """Concatenate best subtrees for budgets ``χ, 2χ, 4χ, …``.

    Each subtree is ordered by the tree greedy; edges already present or
    joining two already-connected vertices are skipped. Stops once every
    prize vertex is connected to the root.
    """
    inst = as_instance(g)
    table = subtree_table(inst, max_edges=max_edges, backend=backend)
    chi = eccentricity(inst)
    trace = ScalingTrace(inst, chi)
    if chi == 0 or not inst.terminals:
        return (), trace
    uf = UnionFind([inst.root])
    i = 0
    while not all(uf.connected(v, inst.root) for v in inst.terminals):
        budget = 2**i * chi
        t = table.subtree(table.best_within_budget_row(budget))
        appended = []
        for eid in order_tree(inst, t):
            e = inst.edges[eid]
            if uf.union(e.u, e.v):
                appended.append(eid)
        trace.steps.append(ScalingStep(i, budget, t.edges, t.prize, t.cost, tuple(appended)))
        i += 1
    return trace.ordering, trace
