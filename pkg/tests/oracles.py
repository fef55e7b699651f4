"""Slow, obviously-correct reference implementations used to cross-check the library."""

import itertools

import numpy as np

from scw.complex import inv


def _readings(cx):
    """Every (face, full cyclic reading) pair, over all starts and both directions."""
    out = []
    for fid, bd in cx.faces2.items():
        n = len(bd)
        for i in range(n):
            out.append((fid, tuple(bd[(i + k) % n] for k in range(n))))
            out.append((fid, tuple(inv(bd[(i - 1 - k) % n]) for k in range(n))))
    return out


def brute_is_piece(cx, steps, readings=None):
    """A path is a piece iff it starts two cyclic readings that differ as words."""
    steps = tuple(steps)
    readings = _readings(cx) if readings is None else readings
    words = {w for _, w in readings if len(w) >= len(steps) and w[: len(steps)] == steps}
    return len(words) >= 2


def brute_plength(cx, steps, readings=None):
    """Minimum over all 2^(L-1) cut sets of the number of parts, when all parts are pieces."""
    steps = tuple(steps)
    readings = _readings(cx) if readings is None else readings
    n = len(steps)
    if n == 0:
        return 0
    best = float("inf")
    cache = {}
    for mask in range(1 << (n - 1)):
        cuts = [0] + [k + 1 for k in range(n - 1) if mask >> k & 1] + [n]
        parts = [steps[a:b] for a, b in zip(cuts, cuts[1:])]
        if len(parts) >= best:
            continue
        ok = True
        for p in parts:
            if p not in cache:
                cache[p] = brute_is_piece(cx, p, readings)
            if not cache[p]:
                ok = False
                break
        if ok:
            best = len(parts)
    return best


def floyd_warshall(cx):
    """All-pairs face distances by Floyd-Warshall; returns (ids, matrix with inf)."""
    ids = sorted(cx.face_ids)
    n = len(ids)
    verts = [cx.face_vertices[f] for f in ids]
    d = np.full((n, n), np.inf)
    for i in range(n):
        d[i, i] = 0
        for j in range(i + 1, n):
            if verts[i] & verts[j]:
                d[i, j] = d[j, i] = 1
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return ids, d


def shortest_by_deepening(cx, a, b, limit):
    """Length of the shortest face path a -> b found by iterative-deepening DFS (None past limit)."""
    if a == b:
        return 0
    nbrs = {}
    for f in cx.face_ids:
        nbrs[f] = sorted(g for g in cx.face_ids if g != f and cx.face_vertices[f] & cx.face_vertices[g])

    def dfs(x, depth, seen):
        if depth == 0:
            return x == b
        for y in nbrs[x]:
            if y not in seen:
                seen.add(y)
                if dfs(y, depth - 1, seen):
                    return True
                seen.discard(y)
        return False

    for depth in range(1, limit + 1):
        if dfs(a, depth, {a}):
            return depth
    return None


def brute_hull(cx, seeds):
    ids, d = floyd_warshall(cx)
    index = {f: i for i, f in enumerate(ids)}
    cur = {index[s] for s in seeds}
    while True:
        grow = set(cur)
        for a, b in itertools.combinations(sorted(cur), 2):
            if np.isfinite(d[a, b]):
                grow |= {int(x) for x in np.flatnonzero(d[a] + d[b] == d[a, b])}
        if grow == cur:
            return {ids[i] for i in cur}
        cur = grow


def brute_has_short_induced_cycle(lk, lengths=(4, 5)):
    """Does some 4- or 5-subset of the link induce a cycle graph?"""
    import networkx as nx

    nodes = sorted(lk.nodes, key=str)
    for k in lengths:
        for sub in itertools.combinations(nodes, k):
            h = lk.subgraph(sub)
            if h.number_of_edges() == k and all(d == 2 for _, d in h.degree) and nx.is_connected(h):
                return True
    return False
