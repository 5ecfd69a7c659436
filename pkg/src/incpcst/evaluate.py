"""Exact evaluation of incremental orderings against the budget optimum.

An ordering ``π`` collects, at budget ``B``, the prize of its longest
prefix whose cost is at most ``B``. It is ``(α, μ)``-competitive when
``μ·ALG(B + α) ≥ OPT(B)`` for every budget ``B ≥ 0``. Both sides are
right-continuous step functions and ``OPT`` only jumps at frontier costs,
so checking those costs decides the condition exactly.
"""

from __future__ import annotations

import bisect
import csv
import functools
import io
import itertools
import json
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .enumeration import subtree_table
from .errors import BadParameter, InvalidOrdering, NotATree, TreeTooLarge
from .graph import (
    DEFAULT_MAX_EDGES,
    Forest,
    Graphish,
    Instance,
    as_instance,
    forest,
    format_rational,
)
from .scaling import ParetoFrontier, pareto_frontier


@functools.total_ordering
class _Infinity:
    """Sentinel for an unbounded ratio; larger than every number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        return False

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __hash__(self) -> int:
        return hash("incpcst.INF")

    def __repr__(self) -> str:
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_infinite(x: object) -> bool:
    return x is INF


def format_value(x: Fraction | _Infinity) -> str:
    return "inf" if x is INF else format_rational(x)


def _ratio(need: Fraction, have: Fraction) -> Fraction | _Infinity:
    if need <= 0:
        return Fraction(0)
    if have <= 0:
        return INF
    return need / have


# ---------------------------------------------------------------------------
# step profiles


@dataclass(frozen=True)
class StepProfile:
    """Right-continuous nondecreasing step function ``budget -> prize``."""

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    @property
    def budgets(self) -> list[Fraction]:
        return [b for b, _ in self.breakpoints]

    def value(self, budget: Fraction) -> Fraction:
        i = bisect.bisect_right(self.budgets, budget)
        return self.breakpoints[i - 1][1] if i else Fraction(0)

    __call__ = value

    def first_reaching(self, target: Fraction) -> Fraction | None:
        """Smallest budget at which the profile is at least ``target``."""
        for b, p in self.breakpoints:
            if p >= target:
                return b
        return None


def validate_ordering(g: Graphish, ordering: Sequence[int], *, spanning: bool = True) -> None:
    """Raise :class:`InvalidOrdering` unless every prefix is a rooted subtree.

    With ``spanning`` the full ordering must also reach every prize vertex.
    """
    g = as_instance(g)
    reached = {g.root}
    seen: set[int] = set()
    for pos, eid in enumerate(ordering):
        if eid not in g.edges:
            raise InvalidOrdering(f"position {pos}: edge {eid} is not in the graph")
        if eid in seen:
            raise InvalidOrdering(f"position {pos}: edge {eid} repeats")
        seen.add(eid)
        e = g.edges[eid]
        if (e.u in reached) == (e.v in reached):
            raise InvalidOrdering(
                f"position {pos}: edge {eid} does not extend the prefix tree"
            )
        reached.add(e.v if e.u in reached else e.u)
    if spanning:
        missing = sorted(g.terminals - reached)
        if missing:
            raise InvalidOrdering(f"prize vertices never reached: {missing}")


def alg_profile(g: Graphish, ordering: Sequence[int]) -> StepProfile:
    """Prize of the longest affordable prefix, as a step function of budget."""
    g = as_instance(g)
    validate_ordering(g, ordering, spanning=False)
    reached = {g.root}
    cost = prize = Fraction(0)
    points = [(cost, prize)]
    for eid in ordering:
        e = g.edges[eid]
        new = e.v if e.u in reached else e.u
        reached.add(new)
        cost += e.cost
        prize += g.prizes[new]
        points.append((cost, prize))
    return StepProfile(tuple(points))


# ---------------------------------------------------------------------------
# competitiveness


@dataclass(frozen=True)
class CompetitiveReport:
    alpha: Fraction
    mu: Fraction
    holds: bool
    witness_budget: Fraction | None = None
    opt_prize: Fraction | None = None
    alg_prize: Fraction | None = None
    checked: int = 0

    @property
    def verdict(self) -> str:
        return "holds" if self.holds else "violated"

    def to_json(self) -> dict:
        out = {
            "alpha": format_rational(self.alpha),
            "mu": format_rational(self.mu),
            "verdict": self.verdict,
            "checked_budgets": self.checked,
        }
        if not self.holds:
            out["witness"] = {
                "budget": format_rational(self.witness_budget),
                "opt_prize": format_rational(self.opt_prize),
                "alg_prize": format_rational(self.alg_prize),
            }
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _frontier(g: Graphish, frontier: ParetoFrontier | None, max_edges: int) -> ParetoFrontier:
    return frontier if frontier is not None else pareto_frontier(g, max_edges=max_edges)


def verify_competitive(
    g: Graphish,
    ordering: Sequence[int],
    alpha: Fraction,
    mu: Fraction,
    *,
    frontier: ParetoFrontier | None = None,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> CompetitiveReport:
    """Check ``μ·ALG(B + α) ≥ OPT(B)`` at every frontier cost ``B``.

    The first failing budget is reported as the witness.
    """
    alpha, mu = Fraction(alpha), Fraction(mu)
    front = _frontier(g, frontier, max_edges)
    prof = alg_profile(g, ordering)
    for budget, best in front:
        have = prof.value(budget + alpha)
        if mu * have < best:
            return CompetitiveReport(alpha, mu, False, budget, best, have, len(front))
    return CompetitiveReport(alpha, mu, True, checked=len(front))


def min_mu(
    g: Graphish,
    ordering: Sequence[int],
    alpha: Fraction,
    *,
    frontier: ParetoFrontier | None = None,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> Fraction | _Infinity:
    """Smallest ``μ ≥ 1`` for which the ordering is ``(α, μ)``-competitive.

    :data:`INF` when some budget has positive optimum but the ordering
    collects nothing at ``B + α``.
    """
    front = _frontier(g, frontier, max_edges)
    prof = alg_profile(g, ordering)
    worst: Fraction | _Infinity = Fraction(1)
    for budget, best in front:
        worst = max(worst, _ratio(best, prof.value(budget + Fraction(alpha))))
    return worst


def min_alpha(
    g: Graphish,
    ordering: Sequence[int],
    mu: Fraction,
    *,
    frontier: ParetoFrontier | None = None,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> Fraction | _Infinity:
    """Smallest ``α ≥ 0`` for which the ordering is ``(α, μ)``-competitive.

    For a frontier point ``(B, P)`` the least workable shift is the first
    breakpoint ``b`` of the ordering's profile with ``μ·ALG(b) ≥ P``, minus
    ``B``; the answer is the largest such shift over all points.
    """
    mu = Fraction(mu)
    front = _frontier(g, frontier, max_edges)
    prof = alg_profile(g, ordering)
    need = Fraction(0)
    for budget, best in front:
        b = prof.first_reaching(best / mu)
        if b is None:
            return INF
        need = max(need, b - budget)
    return need


def profile_csv(
    g: Graphish,
    ordering: Sequence[int],
    alpha: Fraction = Fraction(0),
    *,
    frontier: ParetoFrontier | None = None,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> str:
    """``B_num,B_den,opt_prize,alg_prize`` rows at the frontier costs.

    ``alg_prize`` is the ordering's prize at ``B + alpha``.
    """
    front = _frontier(g, frontier, max_edges)
    prof = alg_profile(g, ordering)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["B_num", "B_den", "opt_prize", "alg_prize"])
    for budget, best in front:
        w.writerow([
            budget.numerator,
            budget.denominator,
            format_rational(best),
            format_rational(prof.value(budget + Fraction(alpha))),
        ])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# lower-bound checks on profiles


def shifted_lower_bound(
    profile: StepProfile,
    bound: Callable[[Fraction], Fraction],
    shift: Fraction,
    upto: Fraction,
) -> Fraction | None:
    """Check ``profile(B + shift) ≥ bound(B)`` for all ``B`` in ``[0, upto]``.

    ``bound`` must be continuous and nondecreasing, so on each step of the
    profile only the right end of the matching budget range matters.
    Returns ``None`` when the inequality holds, else a budget where it fails
    (or is approached arbitrarily closely).
    """
    points = profile.breakpoints
    for j, (b, value) in enumerate(points):
        lo = max(Fraction(0), b - shift)
        if lo > upto:
            break
        if j + 1 < len(points):
            hi = points[j + 1][0] - shift
            if hi <= 0:
                continue
            right = min(hi, upto)
        else:
            right = upto
        if value < bound(right):
            return right
    return None


def piecewise_density_bound(
    blocks: Iterable[tuple[Fraction, Fraction]],
) -> tuple[Callable[[Fraction], Fraction], Fraction]:
    """Piecewise-linear bound built from consecutive ``(density, cost)`` pieces.

    Returns ``(f, total_cost)`` with ``f(B) = Σ_{i<j} d_i c_i + d_j (B − C_{j−1})``
    on the ``j``-th piece.
    """
    pieces = list(blocks)
    starts = [Fraction(0)]
    bases = [Fraction(0)]
    for d, c in pieces:
        starts.append(starts[-1] + c)
        bases.append(bases[-1] + d * c)

    def f(budget: Fraction) -> Fraction:
        j = bisect.bisect_right(starts, budget) - 1
        if j >= len(pieces):
            return bases[-1]
        return bases[j] + pieces[j][0] * (budget - starts[j])

    return f, starts[-1]


def budget_scaling_violation(
    front: ParetoFrontier, chi: Fraction, delta: Fraction, h: int
) -> Fraction | None:
    """Check ``OPT(B + hχ) ≥ (1 − 2^{−h})·OPT(δB)/δ`` for all ``B ≥ 0``.

    The right side only changes at ``c/δ`` for frontier costs ``c``, so
    those budgets together with the frontier costs decide it.
    Returns a failing budget or ``None``.
    """
    factor = (1 - Fraction(1, 2**h)) / delta
    budgets = sorted({c for c, _ in front} | {c / delta for c, _ in front})
    for budget in budgets:
        if front.opt(budget + h * chi) < factor * front.opt(delta * budget):
            return budget
    return None


def fig6a_case_bound(chi: Fraction, k: int, alpha: Fraction) -> Fraction | _Infinity:
    """Least multiplicative factor any ordering of the heavy-edge star can reach.

    An ordering that places the heavy edge after ``ℓ`` light edges needs at
    least ``2`` when ``ℓχ/k > α`` and ``(χ + (ℓ−2)χ/k − α)·k/(ℓχ)``
    otherwise (unbounded for ``ℓ = 0``); the minimum over ``ℓ``, floored at
    1, bounds every ordering. Valid for ``χ/2 ≤ α < χ``.
    """
    chi, alpha = Fraction(chi), Fraction(alpha)
    best: Fraction | _Infinity = INF
    for ell in range(k + 1):
        if chi * ell / k > alpha:
            case: Fraction | _Infinity = Fraction(2)
        elif ell == 0:
            case = INF
        else:
            case = (chi + Fraction(ell - 2, k) * chi - alpha) * Fraction(k, ell) / chi
        best = min(best, case)
    return max(Fraction(1), best)


# ---------------------------------------------------------------------------
# forests inside a tree


_forest_cache: "weakref.WeakKeyDictionary[Instance, tuple]" = weakref.WeakKeyDictionary()


def _forest_candidates(g: Instance, max_edges: int):
    """Every edge subset with its cost, vertex set, prize and tree count."""
    if not g.is_tree:
        raise NotATree("forest extraction needs a tree")
    edges = sorted(g.reachable_edges)
    if len(edges) > max_edges:
        raise TreeTooLarge(f"{len(edges)} edges exceed the forest search bound of {max_edges}")
    if g in _forest_cache:
        return _forest_cache[g]
    cands = []
    for size in range(len(edges) + 1):
        for subset in itertools.combinations(edges, size):
            verts = g.endpoints(subset) | {g.root}
            cands.append((g.cost_of(subset), subset, verts, g.prize_of(verts),
                          len(verts) - len(subset)))
    by_prize = [v for v in sorted(g.prizes, key=lambda v: (-g.prizes[v], v)) if g.prizes[v] > 0]
    _forest_cache[g] = cands, by_prize
    return cands, by_prize


def best_forest(
    g: Graphish, budget: Fraction, k: int, *, max_edges: int = 16
) -> Forest | None:
    """Maximum-prize forest with cost ``≤ budget``, ``≤ k`` trees, one holding the root.

    Trees may be single vertices. Ties go to lower cost, then fewer edges,
    then smaller edge ids. ``None`` if ``k < 1``.
    """
    g = as_instance(g)
    if k < 1:
        return None
    cands, by_prize = _forest_candidates(g, max_edges)
    best_key = None
    best = None
    for cost, subset, verts, prize, comps in cands:
        if cost > budget or comps > k:
            continue
        extra = [v for v in by_prize if v not in verts][: k - comps]
        total = prize + g.prize_of(extra)
        key = (-total, cost, len(subset), subset)
        if best_key is None or key < best_key:
            best_key, best = key, (verts | set(extra), subset)
    return forest(g, *best)


def forest_extraction(
    g: Graphish, lam: Fraction, k: int, *, max_edges: int = 16
) -> Forest | None:
    """A forest with ``≤ k`` trees (one holding the root), cost ``≤ λ·c(T)``
    and prize ``≥ (1 − 2^{1−k})·λ·p(T)``, found by exhaustive search.

    The returned forest is the best one within the cost bound; ``None``
    if even that misses the prize bound.
    """
    g = as_instance(g)
    lam = Fraction(lam)
    if not 0 <= lam <= 1 or k < 1:
        raise BadParameter("need 0 ≤ λ ≤ 1 and k ≥ 1")
    f = best_forest(g, lam * g.total_cost, k, max_edges=max_edges)
    target = (1 - Fraction(2, 2**k)) * lam * g.total_prize
    return f if f is not None and f.prize >= target else None


# ---------------------------------------------------------------------------
# best ordering by dynamic programming over rooted subtrees


def best_incremental_ordering(
    g: Graphish,
    alpha: Fraction,
    *,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> tuple[tuple[int, ...], Fraction | _Infinity]:
    """An ordering with the least :func:`min_mu` for slack ``alpha``.

    Prefixes of an ordering form a chain of rooted subtrees, each one edge
    larger than the last. The ratio a frontier point contributes depends
    only on the step of the chain its shifted budget ``B + α`` falls into,
    so the best chain is a min-max path in the lattice of rooted subtrees.
    """
    inst = as_instance(g)
    alpha = Fraction(alpha)
    table = subtree_table(inst, max_edges=max_edges)
    front = pareto_frontier(inst, max_edges=max_edges)
    shifted = [c + alpha for c, _ in front]
    prizes = [p for _, p in front]
    top_x, top_p = shifted[-1], prizes[-1]

    def seg(lo: Fraction, hi: Fraction, have: Fraction):
        # points with lo <= B + α < hi; prizes increase, so the last one rules
        j = bisect.bisect_left(shifted, hi) - 1
        if j < 0 or shifted[j] < lo:
            return Fraction(0)
        return _ratio(prizes[j], have)

    n = len(table)
    cost = [table.cost_of(i) for i in range(n)]
    prize = [table.prize_of(i) for i in range(n)]
    emask = [int(m) for m in table.edge_mask]
    vmask = [int(m) for m in table.vertex_mask]
    row_of = {m: i for i, m in enumerate(emask)}
    vindex = {v: b for b, v in enumerate(table.vertex_ids)}
    ends = [
        (1 << vindex[inst.edges[e].u], 1 << vindex[inst.edges[e].v])
        for e in table.edge_ids
    ]

    value: list = [None] * n
    parent: list[tuple[int, int] | None] = [None] * n
    value[0] = Fraction(0)
    order = sorted(range(n), key=lambda i: int(table.size[i]))
    best_row, best_val = None, None
    for i in order:
        if value[i] is None:
            continue
        if table.spans_terminals(i):
            total = max(value[i], _ratio(top_p, prize[i]) if top_x >= cost[i] else Fraction(0))
            if best_val is None or total < best_val:
                best_row, best_val = i, total
            continue
        for b, (mu_, mv_) in enumerate(ends):
            if (emask[i] >> b) & 1 or bool(vmask[i] & mu_) == bool(vmask[i] & mv_):
                continue
            j = row_of[emask[i] | (1 << b)]
            cand = max(value[i], seg(cost[i], cost[j], prize[i]))
            if value[j] is None or cand < value[j]:
                value[j] = cand
                parent[j] = (i, table.edge_ids[b])
    edges: list[int] = []
    row = best_row
    while parent[row] is not None:
        row, eid = parent[row]
        edges.append(eid)
    return tuple(reversed(edges)), max(Fraction(1), best_val)
