"""Instance generators: the fixed lower-bound constructions and random families.

Vertex 0 is always the root. Edge and vertex ids of the fixed
constructions are part of their contract, since tests and orderings refer
to them:

* ``fig1``: edge 0 = root–1 (cost χ/2, prize δ), edge 1 = root–2 (cost χ, prize 1)
* ``fig5``: edge 0 = root–1 (cost ε, prize ε), edge 1 = root–2 (cost 1, prize 2)
* ``fig6a``: edge 0 = root–1 (cost χ, prize 2χ), edge i = root–(i+1) (cost and prize χ/k)
* ``fig6b``: edge 0 = root–1 (cost 1/2, prize 1), edge 1 = root–2 (cost 1, prize k)
* ``fig7``: hub 1 behind edge 0 (cost 3); prize-2 vertices 2, 3, 4 hang from the
  hub by edges 1, 2, 3 (cost 1) and from the root by edges 4, 5, 6 (cost 3+ε);
  vertex 5 (prize ε) hangs from the root by edge 7 (cost 2ε)
* ``fig8``: copy ``i`` has u = 3i+1, w = 3i+2, v = 3i+3 and edges
  4i = root–u (cost 3), 4i+1 = root–w (cost 2), 4i+2 = w–v (cost 3),
  4i+3 = w–u (cost 2); u and v carry prize 3
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import BadParameter
from .graph import Instance, build_instance, format_rational, parse_rational, to_fraction


def _frac(name: str, value: object) -> Fraction:
    try:
        return to_fraction(value)
    except (TypeError, ValueError) as exc:
        raise BadParameter(f"{name}: {exc}") from None


def _int(name: str, value: object, low: int) -> int:
    x = _frac(name, value)
    if x.denominator != 1 or x < low:
        raise BadParameter(f"{name} must be an integer ≥ {low}, got {value}")
    return int(x)


def gen_fig1(chi: object = 1, delta: object = Fraction(1, 100)) -> Instance:
    """Two root edges: cost χ/2 to prize δ and cost χ to prize 1."""
    chi, delta = _frac("chi", chi), _frac("delta", delta)
    if chi <= 0 or not 0 < delta < 1:
        raise BadParameter("need chi > 0 and 0 < delta < 1")
    return build_instance({0: 0, 1: delta, 2: 1}, [(0, 0, 1, chi / 2), (1, 0, 2, chi)], 0)


def gen_fig5(eps: object = Fraction(1, 10)) -> Instance:
    """A cheap light edge (cost and prize ε) next to a cost-1, prize-2 edge."""
    eps = _frac("eps", eps)
    if eps <= 0:
        raise BadParameter("need eps > 0")
    return build_instance({0: 0, 1: eps, 2: 2}, [(0, 0, 1, eps), (1, 0, 2, 1)], 0)


def gen_fig6a(chi: object = 1, k: object = 2) -> Instance:
    """One heavy edge (cost χ, prize 2χ) and ``k`` light edges (cost and prize χ/k)."""
    chi, k = _frac("chi", chi), _int("k", k, 1)
    if chi <= 0:
        raise BadParameter("need chi > 0")
    prizes = {0: Fraction(0), 1: 2 * chi}
    edges = [(0, 0, 1, chi)]
    for i in range(1, k + 1):
        prizes[i + 1] = chi / k
        edges.append((i, 0, i + 1, chi / k))
    return build_instance(prizes, edges, 0)


def gen_fig6b(k: object = 2) -> Instance:
    """Root edges of cost 1/2 (prize 1) and cost 1 (prize ``k``)."""
    k = _frac("k", k)
    if k < 1:
        raise BadParameter("need k ≥ 1")
    return build_instance({0: 0, 1: 1, 2: k}, [(0, 0, 1, Fraction(1, 2)), (1, 0, 2, 1)], 0)


def gen_fig7(eps: object = Fraction(1, 10)) -> Instance:
    """Hub graph on which the density-greedy needs slack beyond the eccentricity."""
    eps = _frac("eps", eps)
    if not 0 < eps < Fraction(1, 3):
        raise BadParameter("need 0 < eps < 1/3")
    prizes = {0: 0, 1: 0, 2: 2, 3: 2, 4: 2, 5: eps}
    edges = [(0, 0, 1, 3)]
    edges += [(i, 1, i + 1, 1) for i in (1, 2, 3)]
    edges += [(i, 0, i - 2, 3 + eps) for i in (4, 5, 6)]
    edges.append((7, 0, 5, 2 * eps))
    return build_instance(prizes, edges, 0)


def gen_fig8(n: object = 1) -> Instance:
    """``n`` copies of a four-edge gadget glued at the root."""
    n = _int("n", n, 1)
    prizes: dict[int, object] = {0: 0}
    edges = []
    for i in range(n):
        u, w, v = 3 * i + 1, 3 * i + 2, 3 * i + 3
        prizes.update({u: 3, w: 0, v: 3})
        edges += [(4 * i, 0, u, 3), (4 * i + 1, 0, w, 2), (4 * i + 2, w, v, 3), (4 * i + 3, w, u, 2)]
    return build_instance(prizes, edges, 0)


# ---------------------------------------------------------------------------
# random families

DEFAULT_SCALE = 4  # values are multiples of 1/DEFAULT_SCALE
DEFAULT_TOP = 12  # up to DEFAULT_TOP/DEFAULT_SCALE
DEFAULT_ZERO_PRIZE = 0.25


def _value(rng: random.Random, q: int, top: int) -> Fraction:
    return Fraction(rng.randint(1, top), q)


def _prize(rng: random.Random, q: int, top: int, zero: float) -> Fraction:
    return Fraction(0) if rng.random() < zero else _value(rng, q, top)


def gen_random_tree(
    n: object,
    seed: int,
    *,
    q: int = DEFAULT_SCALE,
    top: int = DEFAULT_TOP,
    zero_prize: float = DEFAULT_ZERO_PRIZE,
) -> Instance:
    """Random tree on ``n`` vertices; vertex ``v`` hangs from a random earlier one."""
    n = _int("n", n, 1)
    rng = random.Random(seed)
    prizes = {0: Fraction(0)}
    edges = []
    for v in range(1, n):
        edges.append((v - 1, rng.randrange(v), v, _value(rng, q, top)))
        prizes[v] = _prize(rng, q, top, zero_prize)
    return build_instance(prizes, edges, 0)


def gen_random_graph(
    n: object,
    m: object,
    seed: int,
    *,
    q: int = DEFAULT_SCALE,
    top: int = DEFAULT_TOP,
    zero_prize: float = DEFAULT_ZERO_PRIZE,
) -> Instance:
    """Random connected simple graph: a random spanning tree plus extra edges."""
    n = _int("n", n, 1)
    m = _int("m", m, 0)
    if not n - 1 <= m <= n * (n - 1) // 2:
        raise BadParameter(f"a connected simple graph on {n} vertices needs {n - 1} to "
                           f"{n * (n - 1) // 2} edges, got {m}")
    rng = random.Random(seed)
    prizes = {0: Fraction(0)}
    pairs: set[tuple[int, int]] = set()
    edges = []
    perm = list(range(1, n))
    rng.shuffle(perm)
    order = [0] + perm
    for i in range(1, n):
        v, u = order[i], order[rng.randrange(i)]
        pairs.add((min(u, v), max(u, v)))
        edges.append((len(edges), u, v, _value(rng, q, top)))
    free = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in pairs]
    for a, b in rng.sample(free, m - (n - 1)):
        edges.append((len(edges), a, b, _value(rng, q, top)))
    for v in range(1, n):
        prizes[v] = _prize(rng, q, top, zero_prize)
    return build_instance(prizes, edges, 0)


# ---------------------------------------------------------------------------
# textual generator specs


@dataclass(frozen=True)
class _Family:
    build: Callable[..., Instance]
    params: tuple[str, ...]
    required: tuple[str, ...] = ()
    integer: tuple[str, ...] = ()


FAMILIES: dict[str, _Family] = {
    "fig1": _Family(gen_fig1, ("chi", "delta")),
    "fig5": _Family(gen_fig5, ("eps",)),
    "fig6a": _Family(gen_fig6a, ("chi", "k"), integer=("k",)),
    "fig6b": _Family(gen_fig6b, ("k",)),
    "fig7": _Family(gen_fig7, ("eps",)),
    "fig8": _Family(gen_fig8, ("n",), integer=("n",)),
    "random-tree": _Family(gen_random_tree, ("n", "seed"), ("n", "seed"), ("n", "seed")),
    "random-graph": _Family(
        gen_random_graph, ("n", "m", "seed"), ("n", "m", "seed"), ("n", "m", "seed")
    ),
}


@dataclass(frozen=True)
class GeneratorSpec:
    """A family tag plus parameters, written ``family:key=value,...``.

    Example: ``fig7:eps=1/10`` or ``random-graph:n=8,m=12,seed=7``.
    """

    family: str
    params: dict[str, Fraction] = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str) -> GeneratorSpec:
        family, _, rest = text.strip().partition(":")
        if family not in FAMILIES:
            raise BadParameter(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
        fam = FAMILIES[family]
        params: dict[str, Fraction] = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or key not in fam.params:
                raise BadParameter(f"bad parameter {item!r} for {family}")
            try:
                params[key] = parse_rational(value.strip())
            except ValueError as exc:
                raise BadParameter(f"{key}: {exc}") from None
        return cls(family, params)

    def with_seed(self, seed: int) -> GeneratorSpec:
        return GeneratorSpec(self.family, {**self.params, "seed": Fraction(seed)})

    def build(self) -> Instance:
        fam = FAMILIES[self.family]
        missing = [p for p in fam.required if p not in self.params]
        if missing:
            raise BadParameter(f"{self.family} needs {', '.join(missing)}")
        kwargs: dict[str, object] = {}
        for key, value in self.params.items():
            if key in fam.integer:
                if value.denominator != 1:
                    raise BadParameter(f"{key} must be an integer")
                kwargs[key] = int(value)
            else:
                kwargs[key] = value
        return fam.build(**kwargs)

    def __str__(self) -> str:
        body = ",".join(f"{k}={_short(v)}" for k, v in self.params.items())
        return f"{self.family}:{body}" if body else self.family


def _short(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else format_rational(x)
