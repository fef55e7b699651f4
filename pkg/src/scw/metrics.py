"""The face metric: distances, intervals, convexity, hulls and neighbourhoods.

Faces are 2-cells and isolated 1-cells; two faces are adjacent when they share a
vertex.  Unreachable distances are reported as ``None``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .complex import CellComplex, ComplexError, EdgePath, Step, Subcomplex
from .pieces import piece_index

UNREACHABLE = -1


class NotAFaceError(ComplexError):
    """Raised when an id is not a face (e.g. a 1-cell lying on a 2-cell)."""


class FaceGraph:
    def __init__(self, cx: CellComplex):
        self.cx = cx
        self.nodes: list[str] = sorted(cx.face_ids)
        self.index = {f: i for i, f in enumerate(self.nodes)}
        nbrs: list[set[int]] = [set() for _ in self.nodes]
        for v, fs in cx.vertex_faces.items():
            ids = [self.index[f] for f in fs]
            for a in ids:
                nbrs[a].update(ids)
        for a, s in enumerate(nbrs):
            s.discard(a)
        self.adj: list[list[int]] = [sorted(s) for s in nbrs]
        self._rows: dict[int, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.nodes)

    def idx(self, fid: str) -> int:
        try:
            return self.index[fid]
        except KeyError:
            if fid in self.cx.edges:
                raise NotAFaceError(f"{fid!r} is a 1-cell lying on a 2-cell, not a face") from None
            raise NotAFaceError(f"unknown face {fid!r}") from None

    def row(self, a: int) -> np.ndarray:
        """BFS distances from node ``a`` (``UNREACHABLE`` where disconnected)."""
        r = self._rows.get(a)
        if r is None:
            r = np.full(len(self.nodes), UNREACHABLE, dtype=np.int64)
            r[a] = 0
            q = deque([a])
            while q:
                x = q.popleft()
                dx = r[x] + 1
                for y in self.adj[x]:
                    if r[y] == UNREACHABLE:
                        r[y] = dx
                        q.append(y)
            r.flags.writeable = False
            self._rows[a] = r
        return r

    def dist(self, a: int, b: int) -> int | None:
        d = int(self.row(a)[b])
        return None if d == UNREACHABLE else d

    def interval_mask(self, a: int, b: int) -> np.ndarray:
        ra, rb = self.row(a), self.row(b)
        d = ra[b]
        if d == UNREACHABLE:
            raise ComplexError("faces lie in different components")
        return (ra >= 0) & (rb >= 0) & (ra + rb == d)

    def networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(
            (self.nodes[a], self.nodes[b]) for a in range(len(self.nodes)) for b in self.adj[a] if a < b
        )
        return g


def face_graph(cx: CellComplex) -> FaceGraph:
    if "face_graph" not in cx._cache:
        cx._cache["face_graph"] = FaceGraph(cx)
    return cx._cache["face_graph"]


def face_distance(cx: CellComplex, f1: str, f2: str) -> int | None:
    fg = face_graph(cx)
    return fg.dist(fg.idx(f1), fg.idx(f2))


@dataclass(frozen=True)
class Interval:
    endpoints: tuple[str, str]
    distance: int
    members: frozenset[str]

    def to_json(self) -> dict:
        return {
            "endpoints": list(self.endpoints),
            "distance": self.distance,
            "members": sorted(self.members),
        }


def interval(cx: CellComplex, f1: str, f2: str) -> Interval:
    fg = face_graph(cx)
    a, b = fg.idx(f1), fg.idx(f2)
    mask = fg.interval_mask(a, b)
    return Interval((f1, f2), int(fg.row(a)[b]), frozenset(fg.nodes[i] for i in np.flatnonzero(mask)))


def is_geodesic(cx: CellComplex, seq: Sequence[str]) -> bool:
    if not seq:
        return False
    fg = face_graph(cx)
    ids = [fg.idx(f) for f in seq]
    if any(ids[i + 1] not in fg.adj[ids[i]] for i in range(len(ids) - 1)):
        return False
    return fg.dist(ids[0], ids[-1]) == len(ids) - 1


def sub_faces(cx: CellComplex, sub: Subcomplex) -> list[int]:
    fg = face_graph(cx)
    return sorted(fg.index[f] for f in sub.face_set(cx))


def meeting_faces(cx: CellComplex, sub: Subcomplex) -> list[int]:
    """Faces intersecting ``sub``."""
    fg = face_graph(cx)
    out = set()
    for v in sub.vertices:
        out.update(fg.index[f] for f in cx.vertex_faces.get(v, ()))
    return sorted(out)


def convexity_witness(cx: CellComplex, sub: Subcomplex) -> tuple[str, str, str] | None:
    """A triple (R, R', F) with F on a geodesic from R to R' but outside ``sub``."""
    fg = face_graph(cx)
    inside = sub_faces(cx, sub)
    if len(inside) < 2:
        return None
    member = np.zeros(len(fg), dtype=bool)
    member[inside] = True
    rows = np.stack([fg.row(a) for a in inside])
    for i, a in enumerate(inside):
        ra = rows[i]
        da = ra[inside]
        # mask[j, x]: x lies on a geodesic from a to inside[j]
        mask = (ra[None, :] >= 0) & (rows >= 0) & (ra[None, :] + rows == da[:, None]) & (da[:, None] >= 0)
        bad = mask & ~member[None, :]
        if bad.any():
            j, x = np.argwhere(bad)[0]
            return fg.nodes[a], fg.nodes[inside[j]], fg.nodes[x]
    return None


def is_face_convex(cx: CellComplex, sub: Subcomplex) -> bool:
    return convexity_witness(cx, sub) is None


def hull_faces(cx: CellComplex, seeds: Iterable[str]) -> frozenset[str]:
    """Least set of faces containing ``seeds`` and closed under intervals."""
    fg = face_graph(cx)
    start = sorted({fg.idx(f) for f in seeds})
    if not start:
        raise ComplexError("hull needs at least one seed face")
    base = fg.row(start[0])
    if any(base[s] == UNREACHABLE for s in start):
        raise ComplexError("hull seeds lie in different components")
    inside = np.zeros(len(fg), dtype=bool)
    order: list[int] = []
    pending = deque(start)
    for s in start:
        inside[s] = True
    # each new face is paired with every face already in the set
    while pending:
        a = pending.popleft()
        ra = fg.row(a)
        if order:
            rows = np.stack([fg.row(b) for b in order])
            d = ra[order]
            mask = (ra[None, :] + rows == d[:, None]).any(axis=0)
            for x in np.flatnonzero(mask & ~inside):
                inside[x] = True
                pending.append(int(x))
        order.append(a)
    return frozenset(fg.nodes[i] for i in np.flatnonzero(inside))


def hull(cx: CellComplex, seeds: Iterable[str]) -> Subcomplex:
    return Subcomplex.closure(cx, hull_faces(cx, seeds))


def neighbourhood(cx: CellComplex, sub: Subcomplex, r: int) -> frozenset[str]:
    """Faces within distance ``r`` of a face of ``sub``.

    A subcomplex without faces (vertices and non-isolated edges only) is
    represented by the faces meeting it.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    fg = face_graph(cx)
    core = sub_faces(cx, sub) or meeting_faces(cx, sub)
    if not core:
        return frozenset()
    rows = np.stack([fg.row(a) for a in core])
    near = ((rows >= 0) & (rows <= r)).any(axis=0)
    return frozenset(fg.nodes[i] for i in np.flatnonzero(near))


def quasiconvexity_witness(cx: CellComplex, sub: Subcomplex, k: int, endpoints: str = "meeting"):
    """A geodesic-interval face outside ``N_k(sub)``, as (R, R', F), or None.

    ``endpoints`` is ``"meeting"`` (geodesics between faces intersecting sub) or
    ``"inside"`` (geodesics between faces of sub).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    fg = face_graph(cx)
    if endpoints == "meeting":
        ends = meeting_faces(cx, sub)
    elif endpoints == "inside":
        ends = sub_faces(cx, sub)
    else:
        raise ValueError(f"unknown endpoint mode {endpoints!r}")
    near = np.zeros(len(fg), dtype=bool)
    near[[fg.index[f] for f in neighbourhood(cx, sub, k)]] = True
    for i, a in enumerate(ends):
        ra = fg.row(a)
        for b in ends[i + 1 :]:
            if ra[b] == UNREACHABLE:
                continue
            bad = fg.interval_mask(a, b) & ~near
            if bad.any():
                return fg.nodes[a], fg.nodes[b], fg.nodes[int(np.flatnonzero(bad)[0])]
    return None


def is_k_quasiconvex(cx: CellComplex, sub: Subcomplex, k: int, endpoints: str = "meeting") -> bool:
    return quasiconvexity_witness(cx, sub, k, endpoints) is None


def diameter(cx: CellComplex, faces: Iterable[str]) -> float | None:
    """Largest pairwise face distance; None for an empty set, inf if disconnected."""
    fg = face_graph(cx)
    ids = sorted(fg.idx(f) for f in faces)
    if not ids:
        return None
    best = 0
    for a in ids:
        d = fg.row(a)[ids]
        if (d == UNREACHABLE).any():
            return math.inf
        best = max(best, int(d.max()))
    return best


def coarse_intersection_diameter(cx: CellComplex, sub1: Subcomplex, sub2: Subcomplex, r: int) -> float | None:
    return diameter(cx, neighbourhood(cx, sub1, r) & neighbourhood(cx, sub2, r))


def hull_spread(cx: CellComplex, sub: Subcomplex, hull_set: Iterable[str]) -> int | None:
    """Largest distance from a hull face to the faces of ``sub``."""
    fg = face_graph(cx)
    core = sub_faces(cx, sub) or meeting_faces(cx, sub)
    rows = np.stack([fg.row(a) for a in core])
    rows = np.where(rows == UNREACHABLE, np.iinfo(np.int64).max, rows)
    nearest = rows.min(axis=0)
    vals = [int(nearest[fg.idx(f)]) for f in hull_set]
    return max(vals) if vals else None


# -- traces ---------------------------------------------------------------


def _face_steps(cx: CellComplex, fid: str) -> list[Step]:
    if fid in cx.faces2:
        return list(dict.fromkeys(s for st in cx.faces2[fid] for s in (st, (st[0], -st[1]))))
    return [(fid, 1), (fid, -1)]


def exists_trace(cx: CellComplex, sub: Subcomplex, geodesic: Sequence[str]) -> EdgePath | None:
    """A path in ``sub`` decomposing as P_1...P_m with P_i in face i, or None."""
    if not is_geodesic(cx, geodesic):
        raise ComplexError("input sequence is not a face geodesic")
    # reach[v] = (previous layer vertex or None, steps taken in this layer)
    layers: list[dict[str, tuple[str | None, list[Step]]]] = []
    prev: dict[str, object] | None = None
    for i, fid in enumerate(geodesic):
        fverts = cx.face_vertices[fid] & sub.vertices
        steps = [s for s in _face_steps(cx, fid) if s[0] in sub.edges]
        if prev is None:
            seeds = sorted(fverts)
        else:
            seeds = sorted(v for v in prev if v in fverts)
        reach: dict[str, tuple[str | None, list[Step]]] = {}
        q = deque()
        for v in seeds:
            reach[v] = (v, [])
            q.append(v)
        while q:
            v = q.popleft()
            for s in steps:
                if cx.tail(s) == v:
                    w = cx.head(s)
                    if w not in reach:
                        reach[w] = (reach[v][0], reach[v][1] + [s])
                        q.append(w)
        if not reach:
            return None
        layers.append(reach)
        prev = reach
    # walk back from any end vertex
    end = sorted(layers[-1])[0]
    pieces: list[list[Step]] = []
    v = end
    for reach in reversed(layers):
        origin, steps = reach[v]
        pieces.append(steps)
        v = origin
    start = v
    path = [s for p in reversed(pieces) for s in p]
    return EdgePath(tuple(path), start)


# -- local convexity ------------------------------------------------------


def check_no_missing(cx: CellComplex, sub: Subcomplex, mode: str, i: int, reversible: bool = True) -> list[dict]:
    """2-cells outside ``sub`` with a boundary arc Q in ``sub`` that forces them in.

    ``mode="shells"`` checks decompositions QS with plength(S) <= i;
    ``mode="complements"`` checks those with plength(Q) >= i.  Q ranges over all
    boundary arcs including trivial ones (a single vertex) and the whole cycle.
    """
    if mode not in ("shells", "complements"):
        raise ValueError(f"unknown mode {mode!r}")
    idx = piece_index(cx, reversible)
    out = []
    for fid in sorted(cx.faces2):
        if fid in sub.faces:
            continue
        bd = cx.faces2[fid]
        n = len(bd)
        for a in range(n):
            if cx.tail(bd[a]) not in sub.vertices:
                continue
            for length in range(0, n + 1):
                if length == n and a > 0:
                    break
                if length and bd[(a + length - 1) % n][0] not in sub.edges:
                    break
                q = tuple(bd[(a + k) % n] for k in range(length))
                s = tuple(bd[(a + length + k) % n] for k in range(n - length))
                if mode == "shells":
                    hit = idx.plength(s) <= i
                else:
                    hit = idx.plength(q) >= i
                if hit:
                    out.append({"face": fid, "start": a, "length": length})
                    break
            if out and out[-1]["face"] == fid:
                break
    return out
