"""Compare the compiled and pure-Python subtree enumeration kernels.

    python benchmarks/bench_enumeration.py [--repeat 3]

Each row enumerates all rooted subtrees of one instance with both kernels,
checks that the tables agree, and reports the best wall time of each.
"""

from __future__ import annotations

import argparse
import time

from incpcst import SubtreeTable, available_backends, build_instance, gen_random_graph, gen_random_tree


def grid(w: int, h: int):
    vid = {(x, y): y * w + x for y in range(h) for x in range(w)}
    edges = []
    for (x, y), v in vid.items():
        for dx, dy in ((1, 0), (0, 1)):
            if (x + dx, y + dy) in vid:
                edges.append((len(edges), v, vid[(x + dx, y + dy)], 1 + (x + y) % 3))
    return build_instance({v: v % 4 for v in vid.values()}, edges, 0)


CASES = [
    ("tree n=12", lambda: gen_random_tree(12, 1)),
    ("tree n=18", lambda: gen_random_tree(18, 2)),
    ("graph n=8 m=12", lambda: gen_random_graph(8, 12, 3)),
    ("graph n=9 m=14", lambda: gen_random_graph(9, 14, 4)),
    ("graph n=10 m=16", lambda: gen_random_graph(10, 16, 5)),
    ("grid 4x4", lambda: grid(4, 4)),
]


def best_time(g, backend: str, repeat: int) -> tuple[float, SubtreeTable]:
    best, table = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        table = SubtreeTable(g, backend=backend, max_edges=64)
        best = min(best, time.perf_counter() - start)
    return best, table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the Python kernel is available")
    print(f"{'instance':<18}{'subtrees':>10}" + "".join(f"{b + ' ms':>14}" for b in backends)
          + ("   speedup" if len(backends) > 1 else ""))
    for name, make in CASES:
        g = make()
        times, tables = {}, {}
        for b in backends:
            times[b], tables[b] = best_time(g, b, args.repeat)
        if len(backends) > 1:
            a, p = tables["cython"], tables["python"]
            assert a.edge_mask.tolist() == p.edge_mask.tolist(), name
            assert a.cost.tolist() == p.cost.tolist() and a.prize.tolist() == p.prize.tolist(), name
        row = f"{name:<18}{len(tables[backends[0]]):>10}"
        row += "".join(f"{times[b] * 1e3:>14.2f}" for b in backends)
        if len(backends) > 1:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
