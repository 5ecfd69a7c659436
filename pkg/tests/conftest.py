from __future__ import annotations

import os
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from incpcst import build_instance

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def rationals(low: int = 1, high: int = 8, den: int = 4):
    return st.builds(Fraction, st.integers(low, high), st.integers(1, den))


@st.composite
def instances(draw, max_vertices: int = 6, max_edges: int = 8, tree: bool = False,
              allow_loops: bool = False):
    """Small connected instances; parallel edges allowed unless ``tree``."""
    n = draw(st.integers(1, max_vertices))
    edges = []
    for v in range(1, n):
        edges.append((len(edges), draw(st.integers(0, v - 1)), v, draw(rationals())))
    if not tree and n > 1:
        extra = draw(st.integers(0, max(0, max_edges - len(edges))))
        for _ in range(extra):
            u = draw(st.integers(0, n - 1))
            v = draw(st.integers(0, n - 1))
            if u == v and not allow_loops:
                continue
            edges.append((len(edges), u, v, draw(rationals())))
    prizes = {0: 0}
    for v in range(1, n):
        prizes[v] = draw(st.one_of(st.just(Fraction(0)), rationals(0, 8, 3)))
    return build_instance(prizes, edges, 0)


def trees(max_vertices: int = 7):
    return instances(max_vertices=max_vertices, tree=True)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
