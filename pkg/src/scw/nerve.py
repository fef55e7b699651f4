"""Nerve of the face-intersection relation, link checks and flat pullback.

Only the 1-skeleton of the nerve is stored; it is a flag complex, so a link is
determined by the induced graph on a vertex's neighbours.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx

from .complex import CellComplex, ComplexError, Subcomplex
from .generators import hex_ball, hex_neighbours
from .metrics import face_graph
from .pieces import petal_decompositions

MAX_LINK_DEGREE = 64


class NerveError(ComplexError):
    pass


def nerve(cx: CellComplex) -> nx.Graph:
    return face_graph(cx).networkx()


def nerve_to_json(g: nx.Graph) -> dict:
    return {
        "nodes": sorted(g.nodes),
        "edges": sorted([sorted(e) for e in g.edges]),
    }


def tri_graph(r: int) -> nx.Graph:
    """1-skeleton of the triangular-lattice ball of radius ``r``."""
    pts = set(hex_ball(r))
    g = nx.Graph()
    g.add_nodes_from(pts)
    for p in pts:
        for q in hex_neighbours(*p):
            if q in pts:
                g.add_edge(p, q)
    return g


def tri_radius(n: int) -> int | None:
    """``r`` with ``3r^2 + 3r + 1 == n``, if any."""
    r = 0
    while 3 * r * r + 3 * r + 1 < n:
        r += 1
    return r if 3 * r * r + 3 * r + 1 == n else None


def link(g: nx.Graph, x) -> nx.Graph:
    return g.subgraph(g[x]).copy()


def induced_short_cycle(lk: nx.Graph, lengths=(4, 5)) -> list | None:
    """A chordless cycle in ``lk`` whose length is in ``lengths``, or None."""
    if lk.number_of_nodes() > MAX_LINK_DEGREE:
        raise NerveError(f"link has {lk.number_of_nodes()} vertices, above the cap of {MAX_LINK_DEGREE}")
    nodes = sorted(lk.nodes, key=str)
    rank = {v: i for i, v in enumerate(nodes)}
    adj = {v: set(lk[v]) for v in nodes}
    longest = max(lengths)

    def grow(path):
        # path is chordless; its first vertex has the least rank on the cycle
        for w in sorted(adj[path[-1]], key=rank.get):
            if rank[w] <= rank[path[0]] or w in path:
                continue
            if any(w in adj[p] for p in path[1:-1]):
                continue
            if len(path) >= 2 and path[0] in adj[w]:
                if len(path) + 1 in lengths:
                    return path + [w]
                continue
            if len(path) + 1 < longest:
                got = grow(path + [w])
                if got:
                    return got
        return None

    for v in nodes:
        got = grow([v])
        if got:
            return got
    return None


def link_is_6_large(g: nx.Graph, x) -> tuple[bool, list | None]:
    cyc = induced_short_cycle(link(g, x))
    return cyc is None, cyc


def boundary_faces(cx: CellComplex) -> set[str]:
    """Faces carrying an edge that lies on at most one 2-cell."""
    out = set()
    for fid in cx.face_ids:
        if any(len(cx.edge_faces[e]) <= 1 for e in cx.face_edges[fid]):
            out.add(fid)
    return out


def interior_faces(cx: CellComplex, margin: int = 2) -> list[str]:
    fg = face_graph(cx)
    bnd = [fg.index[f] for f in boundary_faces(cx)]
    if not bnd:
        return list(fg.nodes)
    import numpy as np

    rows = np.stack([fg.row(b) for b in bnd])
    rows = np.where(rows < 0, np.iinfo(np.int64).max, rows)
    near = rows.min(axis=0)
    return [fg.nodes[i] for i in range(len(fg)) if near[i] >= margin]


def local_systolic_report(cx: CellComplex, interior_only: bool = False) -> list[dict]:
    g = nerve(cx)
    verts = interior_faces(cx) if interior_only else sorted(g.nodes)
    out = []
    for x in verts:
        ok, cyc = link_is_6_large(g, x)
        if not ok:
            out.append({"vertex": x, "cycle": cyc})
    return out


# -- honeycomb patches ----------------------------------------------------


def _shared_arc(cx: CellComplex, f: str, g: str) -> tuple[int, int] | None:
    """(start, length) of the single boundary arc of ``f`` made of edges shared with ``g``."""
    bd = cx.faces2[f]
    n = len(bd)
    common = cx.face_edges[f] & cx.face_edges[g]
    marks = [bd[i][0] in common for i in range(n)]
    if not any(marks):
        return None
    if all(marks):
        return 0, n
    starts = [i for i in range(n) if marks[i] and not marks[i - 1]]
    if len(starts) != 1:
        return None
    s = starts[0]
    length = 0
    while marks[(s + length) % n]:
        length += 1
    return s, length


@dataclass
class PatchCheck:
    ok: bool
    reason: str = ""
    radius: int | None = None
    witness: str | None = None


def honeycomb_patch_check(cx: CellComplex, sub: Subcomplex) -> PatchCheck:
    """Is ``sub`` a ball in a honeycomb whose hexsides may be subdivided?"""
    cells = sorted(sub.faces)
    if not cells:
        return PatchCheck(False, "no 2-cells")
    if Subcomplex.closure(cx, cells) != sub:
        return PatchCheck(False, "not the closure of its 2-cells")
    r = tri_radius(len(cells))
    if r is None:
        return PatchCheck(False, f"{len(cells)} 2-cells is not a centred hexagonal number")
    for f in cells:
        if len(cx.faces2[f]) < 6:
            return PatchCheck(False, "boundary shorter than six", r, f)
        if len(set(s[0] for s in cx.faces2[f])) != len(cx.faces2[f]):
            return PatchCheck(False, "boundary repeats an edge", r, f)
    share = nx.Graph()
    share.add_nodes_from(cells)
    arcs: dict[tuple[str, str], tuple[int, int]] = {}
    for f, g in itertools.combinations(cells, 2):
        if not (cx.face_vertices[f] & cx.face_vertices[g]):
            continue
        a, b = _shared_arc(cx, f, g), _shared_arc(cx, g, f)
        if a is None or b is None:
            return PatchCheck(False, "intersecting 2-cells not sharing a single arc", r, f)
        shared_vs = cx.face_vertices[f] & cx.face_vertices[g]
        if len(shared_vs) != a[1] + 1:
            return PatchCheck(False, "2-cells meet outside their shared arc", r, f)
        arcs[f, g], arcs[g, f] = a, b
        share.add_edge(f, g)
    if not nx.is_isomorphic(share, tri_graph(r)):
        return PatchCheck(False, "adjacency is not a triangular ball", r)
    for f in cells:
        nb = sorted(share[f])
        n = len(cx.faces2[f])
        spans = sorted((arcs[f, g][0], arcs[f, g][1], g) for g in nb)
        used = set()
        for start, ln, _ in spans:
            used.update((start + k) % n for k in range(ln))
        covered = sum(sp[1] for sp in spans)
        if len(used) != covered:
            return PatchCheck(False, "shared arcs overlap", r, f)
        touching = [
            (spans[k][0] + spans[k][1]) % n == spans[(k + 1) % len(spans)][0] for k in range(len(spans))
        ]
        if len(spans) == 6 and (covered != n or not all(touching)):
            return PatchCheck(False, "shared arcs do not tile an interior boundary", r, f)
        if len(spans) < 6 and n - covered < 6 - len(spans):
            return PatchCheck(False, "free boundary too short", r, f)
        for k, touch in enumerate(touching):
            if touch and len(spans) > 1 and not share.has_edge(spans[k][2], spans[(k + 1) % len(spans)][2]):
                return PatchCheck(False, "neighbour order inconsistent", r, f)
    for f, g, h in itertools.combinations(cells, 3):
        if share.has_edge(f, g) and share.has_edge(g, h) and share.has_edge(f, h):
            common = cx.face_vertices[f] & cx.face_vertices[g] & cx.face_vertices[h]
            if len(common) != 1:
                return PatchCheck(False, "three mutually adjacent 2-cells do not meet in one vertex", r, f)
    return PatchCheck(True, "", r)


def is_honeycomb_patch(cx: CellComplex, sub: Subcomplex) -> bool:
    return honeycomb_patch_check(cx, sub).ok


def honeycomb_triangles(cx: CellComplex) -> list[tuple[str, str, str]]:
    """Triples of 2-cells pairwise sharing edges and meeting in exactly one vertex."""
    fs = sorted(cx.faces2)
    edge_nb: dict[str, set[str]] = {f: set() for f in fs}
    for e, owners in cx.edge_faces.items():
        for a, b in itertools.combinations(owners, 2):
            if a != b:
                edge_nb[a].add(b)
                edge_nb[b].add(a)
    out = []
    for a in fs:
        for b in sorted(edge_nb[a]):
            if b <= a:
                continue
            for c in sorted(edge_nb[a] & edge_nb[b]):
                if c <= b:
                    continue
                ab = cx.face_edges[a] & cx.face_edges[b]
                bc = cx.face_edges[b] & cx.face_edges[c]
                ac = cx.face_edges[a] & cx.face_edges[c]
                if ab == bc or bc == ac or ab == ac:
                    continue
                common = cx.face_vertices[a] & cx.face_vertices[b] & cx.face_vertices[c]
                if len(common) == 1:
                    out.append((a, b, c))
    return out


def maximal_honeycomb_patches(cx: CellComplex) -> list[Subcomplex]:
    """Unions of edge-adjacent honeycomb triangles that form honeycomb balls."""
    tris = honeycomb_triangles(cx)
    g = nx.Graph()
    by_pair: dict[frozenset, list[int]] = {}
    for i, t in enumerate(tris):
        g.add_node(i)
        for p in itertools.combinations(t, 2):
            by_pair.setdefault(frozenset(p), []).append(i)
    for ids in by_pair.values():
        for a, b in itertools.combinations(ids, 2):
            g.add_edge(a, b)
    out = []
    for comp in nx.connected_components(g):
        cells = sorted({f for i in comp for f in tris[i]})
        sub = Subcomplex.closure(cx, cells)
        if is_honeycomb_patch(cx, sub):
            out.append(sub)
    return sorted(out, key=lambda s: sorted(s.faces))


# -- pullback -------------------------------------------------------------


@dataclass
class PullbackResult:
    ok: bool
    patch: Subcomplex | None = None
    witness: str | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {"ok": self.ok, "reason": self.reason, "witness": self.witness}
        out["patch"] = self.patch.to_json() if self.patch is not None else None
        return out


def pullback_flat(cx: CellComplex, vertices, g: nx.Graph | None = None) -> PullbackResult:
    """Pull a triangular patch of the nerve back to a honeycomb patch of ``cx``."""
    g = nerve(cx) if g is None else g
    verts = sorted(set(vertices))
    missing = [v for v in verts if v not in g]
    if missing:
        raise NerveError(f"{missing[0]!r} is not a nerve vertex")
    r = tri_radius(len(verts))
    h = g.subgraph(verts)
    if r is None or not nx.is_isomorphic(h, tri_graph(r)):
        raise NerveError("vertex set does not induce a triangular patch")
    for v in verts:
        if v not in cx.faces2:
            return PullbackResult(False, None, v, "vertex is an isolated 1-cell, not a 2-cell")
    for v in verts:
        nb = set(h[v])
        if len(nb) != 6:
            continue
        if not _petal_structure(cx, v, nb, h):
            return PullbackResult(False, None, v, "no six petal-piece decomposition with these petals")
    patch = Subcomplex.closure(cx, verts)
    check = honeycomb_patch_check(cx, patch)
    if not check.ok:
        return PullbackResult(False, None, check.witness, check.reason)
    return PullbackResult(True, patch)


def _petal_structure(cx: CellComplex, v: str, nb: set[str], h: nx.Graph) -> bool:
    for dec in petal_decompositions(cx, v):
        # choose one petal per piece, all distinct, consecutive ones adjacent in the patch
        options = [sorted(set(p) & nb) for p in dec.petals]
        if any(not o for o in options):
            continue
        for choice in itertools.product(*options):
            if len(set(choice)) != 6:
                continue
            if all(h.has_edge(choice[k], choice[(k + 1) % 6]) for k in range(6)):
                return True
    return False

