"""Pure-Python rooted-subtree enumeration (fallback for the compiled kernel).

Both kernels take the same arguments and emit subtrees in the same order.
Vertices are indices ``0..n-1`` with the root at 0; edges are indices into
``eu``/``ev``; ``adj_start``/``adj_edge`` is a CSR incidence list without
self-loops. Costs and prizes are integers (pre-scaled by the caller).
"""

from __future__ import annotations

from typing import Sequence


def enumerate_subtrees(
    n: int,
    eu: Sequence[int],
    ev: Sequence[int],
    cost: Sequence[int],
    prize: Sequence[int],
    adj_start: Sequence[int],
    adj_edge: Sequence[int],
    cap: int = -1,
) -> tuple[list[int], list[int], list[int], list[int], list[int]]:
    """Return ``(edge_masks, vertex_masks, costs, prizes, sizes)``.

    Each rooted subtree, the empty one included, is produced exactly once:
    a node of the search outputs its tree, then for the i-th frontier edge
    recurses with that edge added and frontier edges ``0..i-1`` dropped.
    """
    out_e: list[int] = []
    out_v: list[int] = []
    out_c: list[int] = []
    out_p: list[int] = []
    out_k: list[int] = []

    def outside(f: int, vmask: int) -> int:
        return ev[f] if (vmask >> eu[f]) & 1 else eu[f]

    def rec(frontier: list[int], emask: int, vmask: int, c: int, p: int, k: int) -> None:
        out_e.append(emask)
        out_v.append(vmask)
        out_c.append(c)
        out_p.append(p)
        out_k.append(k)
        if k == cap:
            return
        for i, e in enumerate(frontier):
            w = outside(e, vmask)
            nxt = [f for f in frontier[i + 1:] if outside(f, vmask) != w]
            vm = vmask | (1 << w)
            for j in range(adj_start[w], adj_start[w + 1]):
                g = adj_edge[j]
                o = ev[g] if eu[g] == w else eu[g]
                if not (vm >> o) & 1:
                    nxt.append(g)
            rec(nxt, emask | (1 << e), vm, c + cost[e], p + prize[w], k + 1)

    if n > 0:
        rec([adj_edge[j] for j in range(adj_start[0], adj_start[1])], 0, 1, 0, 0, 0)
    return out_e, out_v, out_c, out_p, out_k
