# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled rooted-subtree enumeration.

Same contract and output order as ``incpcst._kernel_py.enumerate_subtrees``;
limited to at most 64 vertices and edges and to sums that fit in int64.
"""

from libc.stdint cimport int32_t, int64_t, uint64_t
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memcpy

import numpy as np

cdef struct Ctx:
    int n
    int m
    int cap
    int* eu
    int* ev
    int64_t* cost
    int64_t* prize
    int* adj_start
    int* adj_edge
    int* fbuf
    Py_ssize_t count
    Py_ssize_t capacity
    uint64_t* out_e
    uint64_t* out_v
    int64_t* out_c
    int64_t* out_p
    int32_t* out_k
    int failed


cdef int grow(Ctx* ctx) nogil:
    cdef Py_ssize_t cap = ctx.capacity * 2 if ctx.capacity else 1024
    cdef void* p
    p = realloc(ctx.out_e, cap * sizeof(uint64_t))
    if p == NULL:
        return -1
    ctx.out_e = <uint64_t*>p
    p = realloc(ctx.out_v, cap * sizeof(uint64_t))
    if p == NULL:
        return -1
    ctx.out_v = <uint64_t*>p
    p = realloc(ctx.out_c, cap * sizeof(int64_t))
    if p == NULL:
        return -1
    ctx.out_c = <int64_t*>p
    p = realloc(ctx.out_p, cap * sizeof(int64_t))
    if p == NULL:
        return -1
    ctx.out_p = <int64_t*>p
    p = realloc(ctx.out_k, cap * sizeof(int32_t))
    if p == NULL:
        return -1
    ctx.out_k = <int32_t*>p
    ctx.capacity = cap
    return 0


cdef inline int outside(Ctx* ctx, int f, uint64_t vmask) nogil:
    if (vmask >> ctx.eu[f]) & 1:
        return ctx.ev[f]
    return ctx.eu[f]


cdef void rec(Ctx* ctx, int depth, int flen, uint64_t emask, uint64_t vmask,
              int64_t c, int64_t p, int k) nogil:
    cdef int i, j, e, f, g, o, w, nlen
    cdef uint64_t vm
    cdef int* frontier
    cdef int* nxt
    if ctx.failed:
        return
    if ctx.count == ctx.capacity and grow(ctx) != 0:
        ctx.failed = 1
        return
    ctx.out_e[ctx.count] = emask
    ctx.out_v[ctx.count] = vmask
    ctx.out_c[ctx.count] = c
    ctx.out_p[ctx.count] = p
    ctx.out_k[ctx.count] = k
    ctx.count += 1
    if k == ctx.cap:
        return
    frontier = ctx.fbuf + depth * ctx.m
    nxt = ctx.fbuf + (depth + 1) * ctx.m
    for i in range(flen):
        e = frontier[i]
        w = outside(ctx, e, vmask)
        nlen = 0
        for j in range(i + 1, flen):
            f = frontier[j]
            if outside(ctx, f, vmask) != w:
                nxt[nlen] = f
                nlen += 1
        vm = vmask | ((<uint64_t>1) << w)
        for j in range(ctx.adj_start[w], ctx.adj_start[w + 1]):
            g = ctx.adj_edge[j]
            o = ctx.ev[g] if ctx.eu[g] == w else ctx.eu[g]
            if not ((vm >> o) & 1):
                nxt[nlen] = g
                nlen += 1
        rec(ctx, depth + 1, nlen, emask | ((<uint64_t>1) << e), vm,
            c + ctx.cost[e], p + ctx.prize[w], k + 1)


def enumerate_subtrees(int n, eu, ev, cost, prize, adj_start, adj_edge, int cap=-1):
    """Return ``(edge_masks, vertex_masks, costs, prizes, sizes)`` as numpy arrays."""
    cdef Ctx ctx
    cdef int m = len(eu)
    cdef int i
    if n > 64 or m > 64:
        raise ValueError("the compiled kernel handles at most 64 vertices and edges")
    ctx.n = n
    ctx.m = m if m > 0 else 1
    ctx.cap = cap
    ctx.count = 0
    ctx.capacity = 0
    ctx.failed = 0
    ctx.out_e = NULL
    ctx.out_v = NULL
    ctx.out_c = NULL
    ctx.out_p = NULL
    ctx.out_k = NULL
    ctx.eu = <int*>malloc(ctx.m * sizeof(int))
    ctx.ev = <int*>malloc(ctx.m * sizeof(int))
    ctx.cost = <int64_t*>malloc(ctx.m * sizeof(int64_t))
    ctx.prize = <int64_t*>malloc((n + 1) * sizeof(int64_t))
    ctx.adj_start = <int*>malloc((n + 1) * sizeof(int))
    ctx.adj_edge = <int*>malloc((2 * ctx.m) * sizeof(int))
    ctx.fbuf = <int*>malloc((n + 2) * ctx.m * sizeof(int))
    try:
        if (ctx.eu == NULL or ctx.ev == NULL or ctx.cost == NULL or ctx.prize == NULL
                or ctx.adj_start == NULL or ctx.adj_edge == NULL or ctx.fbuf == NULL):
            raise MemoryError()
        for i in range(m):
            ctx.eu[i] = eu[i]
            ctx.ev[i] = ev[i]
            ctx.cost[i] = cost[i]
        for i in range(n):
            ctx.prize[i] = prize[i]
        for i in range(n + 1):
            ctx.adj_start[i] = adj_start[i]
        for i in range(len(adj_edge)):
            ctx.adj_edge[i] = adj_edge[i]
        if n > 0:
            for i in range(ctx.adj_start[0], ctx.adj_start[1]):
                ctx.fbuf[i - ctx.adj_start[0]] = ctx.adj_edge[i]
            with nogil:
                rec(&ctx, 0, ctx.adj_start[1] - ctx.adj_start[0], 0, 1, 0, 0, 0)
        if ctx.failed:
            raise MemoryError()
        out_e = np.empty(ctx.count, dtype=np.uint64)
        out_v = np.empty(ctx.count, dtype=np.uint64)
        out_c = np.empty(ctx.count, dtype=np.int64)
        out_p = np.empty(ctx.count, dtype=np.int64)
        out_k = np.empty(ctx.count, dtype=np.int32)
        if ctx.count:
            _copy(out_e, ctx.out_e, ctx.count * sizeof(uint64_t))
            _copy(out_v, ctx.out_v, ctx.count * sizeof(uint64_t))
            _copy(out_c, ctx.out_c, ctx.count * sizeof(int64_t))
            _copy(out_p, ctx.out_p, ctx.count * sizeof(int64_t))
            _copy(out_k, ctx.out_k, ctx.count * sizeof(int32_t))
        return out_e, out_v, out_c, out_p, out_k
    finally:
        free(ctx.eu)
        free(ctx.ev)
        free(ctx.cost)
        free(ctx.prize)
        free(ctx.adj_start)
        free(ctx.adj_edge)
        free(ctx.fbuf)
        free(ctx.out_e)
        free(ctx.out_v)
        free(ctx.out_c)
        free(ctx.out_p)
        free(ctx.out_k)


cdef void _copy(arr, void* src, size_t nbytes):
    cdef unsigned char[::1] view = arr.view(np.uint8)
    memcpy(&view[0], src, nbytes)
