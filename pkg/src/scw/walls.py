"""Walls built by closing opposite pairs, their carriers, halfspaces and wall-segments."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .complex import CellComplex, ComplexError, Subcomplex, cycles_equivalent, EdgeCycle
from .metrics import face_distance, face_graph, interval
from .pieces import opposite_in, opposite_pairs, piece_index

log = logging.getLogger(__name__)


class WallError(ComplexError):
    pass


@dataclass
class Wall:
    edges: frozenset[str]
    kind: str = "wall"
    log: list[tuple[str, str]] = field(default_factory=list)
    conflicts: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.conflicts

    def to_json(self) -> dict:
        out = {
            "edges": sorted(self.edges),
            "kind": self.kind,
            "log": [{"face": f, "chosen": e} for f, e in self.log],
        }
        if self.conflicts:
            out["conflicts"] = self.conflicts
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Wall":
        try:
            return cls(
                frozenset(data["edges"]),
                data.get("kind", "wall"),
                [(d["face"], d["chosen"]) for d in data.get("log", [])],
            )
        except (KeyError, TypeError) as exc:
            raise ComplexError(f"malformed wall JSON: {exc}") from exc


def opposites(cx: CellComplex, fid: str, e: str) -> list[str]:
    out = []
    for a, b in opposite_pairs(cx, fid):
        if a == e:
            out.append(b)
        elif b == e:
            out.append(a)
    return sorted(out)


def _face_problem(cx: CellComplex, fid: str, edges: set[str]) -> str | None:
    """Why ``fid`` breaks the semi-wall condition for ``edges``, if it does."""
    here = sorted(cx.face_edges[fid] & edges)
    if len(here) > 2:
        return f"{len(here)} wall edges"
    if len(here) == 2 and not opposite_in(cx, fid, *here):
        return "two non-opposite wall edges"
    return None


def wall_violations(cx: CellComplex, edges: frozenset[str] | set[str], kind: str = "wall") -> list[dict]:
    """2-cells meeting ``edges`` other than in 0 or 2 opposite edges (1 allowed for semi-walls)."""
    out = []
    es = set(edges)
    for fid in sorted(cx.faces2):
        here = sorted(cx.face_edges[fid] & es)
        if not here:
            continue
        problem = _face_problem(cx, fid, es)
        if problem is None and len(here) == 1 and kind == "wall":
            problem = "one wall edge"
        if problem:
            out.append({"face": fid, "edges": here, "problem": problem})
    return out


def _close(cx: CellComplex, edges: set[str], log_: list, pick=None) -> list[dict]:
    """Grow ``edges`` until no 2-cell meets it in exactly one edge; returns conflicts."""
    conflicts = []
    dead: set[str] = set()
    while True:
        todo = None
        for e in sorted(edges):
            for fid in cx.edge_faces[e]:
                if fid in dead:
                    continue
                if len(cx.face_edges[fid] & edges) == 1:
                    todo = (fid, e)
                    break
            if todo:
                break
        if todo is None:
            return conflicts
        fid, e = todo
        cands = opposites(cx, fid, e)
        good = []
        for c in cands:
            trial = edges | {c}
            if all(_face_problem(cx, g, trial) is None for g in cx.edge_faces[c]):
                good.append(c)
        if pick is not None and good:
            choice = pick(fid, e, good)
        elif good:
            choice = good[0]
        else:
            conflicts.append({"face": fid, "edge": e, "candidates": cands})
            dead.add(fid)
            continue
        edges.add(choice)
        log_.append((fid, choice))


def extend_to_wall(cx: CellComplex, e1: str, e2: str) -> Wall:
    """Close the opposite pair ``{e1, e2}`` to a wall, choosing least-id opposites."""
    common = sorted(set(cx.edge_faces.get(e1, ())) & set(cx.edge_faces.get(e2, ())))
    if e1 == e2 or not any(opposite_in(cx, f, e1, e2) for f in common):
        raise WallError(f"{e1!r} and {e2!r} are not opposite in any 2-cell")
    edges = {e1, e2}
    steps: list[tuple[str, str]] = []
    conflicts = _close(cx, edges, steps)
    for v in wall_violations(cx, edges):
        if v not in conflicts:
            conflicts.append(v)
    if conflicts:
        log.info("wall through %s, %s has %d conflicts", e1, e2, len(conflicts))
    return Wall(frozenset(edges), "wall", steps, conflicts)


def wall_from_face(cx: CellComplex, e: str, fid: str) -> Wall:
    opp = opposites(cx, fid, e)
    if not opp:
        raise WallError(f"{e!r} has no opposite in {fid!r}")
    return extend_to_wall(cx, e, opp[0])


def enumerate_walls(cx: CellComplex, e1: str, e2: str, limit: int = 1000) -> list[Wall]:
    """Every conflict-free wall obtainable from the seed pair by some choice sequence."""
    found: dict[frozenset, Wall] = {}
    stack = [({e1, e2}, [])]
    seen_states = set()
    while stack and len(found) < limit:
        edges, steps = stack.pop()
        key = frozenset(edges)
        if key in seen_states:
            continue
        seen_states.add(key)
        todo = None
        for e in sorted(edges):
            for fid in cx.edge_faces[e]:
                if len(cx.face_edges[fid] & edges) == 1:
                    todo = (fid, e)
                    break
            if todo:
                break
        if todo is None:
            if not wall_violations(cx, key) and key not in found:
                found[key] = Wall(key, "wall", steps)
            continue
        fid, e = todo
        for c in reversed(opposites(cx, fid, e)):
            trial = edges | {c}
            if all(_face_problem(cx, g, trial) is None for g in cx.edge_faces[c]):
                stack.append((trial, steps + [(fid, c)]))
    return sorted(found.values(), key=lambda w: sorted(w.edges))


def all_walls(cx: CellComplex) -> list[Wall]:
    """Canonical walls through every opposite pair of every 2-cell, deduplicated."""
    seen: dict[frozenset, Wall] = {}
    covered: set[tuple[str, str]] = set()
    for fid in sorted(cx.faces2):
        for a, b in opposite_pairs(cx, fid):
            if (a, b) in covered:
                continue
            w = extend_to_wall(cx, a, b)
            if w.edges not in seen:
                seen[w.edges] = w
            if w.ok:
                for g in cx.faces2:
                    here = sorted(cx.face_edges[g] & w.edges)
                    if len(here) == 2:
                        covered.add(tuple(here))
    return sorted(seen.values(), key=lambda w: sorted(w.edges))


# -- carriers and halfspaces ----------------------------------------------


@dataclass(frozen=True)
class Carrier:
    sub: Subcomplex
    interior_edges: frozenset[str]
    interior_faces: frozenset[str]

    def to_json(self) -> dict:
        return {
            "carrier": self.sub.to_json(),
            "interior": {"edges": sorted(self.interior_edges), "faces": sorted(self.interior_faces)},
        }


def carrier(cx: CellComplex, wall: Wall) -> Carrier:
    unknown = sorted(e for e in wall.edges if e not in cx.edges)
    if unknown:
        raise ComplexError(f"unknown edge {unknown[0]!r}")
    faces = {f for e in wall.edges for f in cx.edge_faces[e]}
    isolated = {e for e in wall.edges if not cx.edge_faces[e]}
    sub = Subcomplex.closure(cx, faces | isolated)
    return Carrier(sub, frozenset(wall.edges), frozenset(faces))


class _DSU:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _cell_components(cx: CellComplex, vertices, edges, faces) -> list[tuple[set, set, set]]:
    """Connected components of a union of open cells (vertices, edges, 2-cells)."""
    dsu = _DSU()
    vertices, edges, faces = set(vertices), set(edges), set(faces)
    for v in vertices:
        dsu.add(("v", v))
    for e in edges:
        dsu.add(("e", e))
        for v in (cx.edges[e].src, cx.edges[e].dst):
            if v in vertices:
                dsu.union(("e", e), ("v", v))
    for f in faces:
        dsu.add(("f", f))
        for s in cx.faces2[f]:
            if s[0] in edges:
                dsu.union(("f", f), ("e", s[0]))
            v = cx.tail(s)
            if v in vertices:
                dsu.union(("f", f), ("v", v))
    groups: dict = {}
    for x in dsu.parent:
        groups.setdefault(dsu.find(x), []).append(x)
    out = []
    for members in groups.values():
        vs = {x[1] for x in members if x[0] == "v"}
        es = {x[1] for x in members if x[0] == "e"}
        fs = {x[1] for x in members if x[0] == "f"}
        out.append((vs, es, fs))
    out.sort(key=lambda c: min([("v", v) for v in c[0]] + [("e", e) for e in c[1]] + [("f", f) for f in c[2]]))
    return out


def complement_components(cx: CellComplex, wall: Wall) -> list[Subcomplex]:
    """Components of X minus the open interior of the wall's carrier."""
    car = carrier(cx, wall)
    comps = _cell_components(
        cx,
        cx.vertices,
        [e for e in cx.edges if e not in car.interior_edges],
        [f for f in cx.faces2 if f not in car.interior_faces],
    )
    return [Subcomplex(frozenset(v), frozenset(e), frozenset(f)) for v, e, f in comps]


@dataclass(frozen=True)
class HalfspacePair:
    left: Subcomplex
    right: Subcomplex
    carrier: Subcomplex

    def to_json(self) -> dict:
        return {"left": self.left.to_json(), "right": self.right.to_json(), "carrier": self.carrier.to_json()}


def halfspaces(cx: CellComplex, wall: Wall) -> HalfspacePair:
    comps = complement_components(cx, wall)
    if len(comps) != 2:
        raise WallError(f"complement of the wall interior has {len(comps)} components, expected 2")
    car = carrier(cx, wall).sub
    left, right = (c | car for c in comps)
    assert (left | right) == Subcomplex.whole(cx)
    assert left.face_set(cx) & right.face_set(cx) == car.face_set(cx)
    return HalfspacePair(left, right, car)


def _piece_partners(cx: CellComplex, fid: str, e: str) -> set[str]:
    """Edges of ``fid`` lying in a common boundary piece with ``e``."""
    idx = piece_index(cx)
    bd = cx.faces2[fid]
    n = len(bd)
    out = {e}
    for p in [i for i, s in enumerate(bd) if s[0] == e]:
        for start in range(p - n + 1, p + 1):
            for length in range(p - start + 1, n + 1):
                arc = tuple(bd[(start + k) % n] for k in range(length))
                if idx.is_piece(arc):
                    out.update(s[0] for s in arc)
    return out


def wall_split(cx: CellComplex, wall: Wall, e1: str, e2: str) -> tuple[Subcomplex, Subcomplex]:
    """The parts W(e1), W(e2) of the carrier left after cutting across the 2-cells holding both."""
    if e1 not in wall.edges or e2 not in wall.edges:
        raise WallError("both edges must lie in the wall")
    car = carrier(cx, wall)
    cut = [f for f in sorted(car.interior_faces) if {e1, e2} <= cx.face_edges[f]]
    if not cut:
        raise WallError(f"{e1!r} and {e2!r} do not lie in a common carrier 2-cell")
    removed_edges: set[str] = set()
    for f in cut:
        keep = _piece_partners(cx, f, e1) | _piece_partners(cx, f, e2)
        removed_edges.update(cx.face_edges[f] - keep)
    comps = _cell_components(
        cx,
        car.sub.vertices,
        car.sub.edges - removed_edges,
        car.sub.faces - set(cut),
    )
    parts = [Subcomplex(frozenset(v), frozenset(e), frozenset(f)) for v, e, f in comps]
    w1 = next(p for p in parts if e1 in p.edges)
    w2 = next(p for p in parts if e2 in p.edges)
    return w1, w2


# -- wall-segments ----------------------------------------------------------


@dataclass(frozen=True)
class WallSegment:
    faces: tuple[str, ...]
    links: tuple[str, ...]

    def to_json(self) -> dict:
        return {"faces": list(self.faces), "links": list(self.links)}


@dataclass(frozen=True)
class BentSegment:
    first: WallSegment
    second: WallSegment

    @property
    def faces(self) -> tuple[str, ...]:
        return self.first.faces + self.second.faces[1:]

    def to_json(self) -> dict:
        return {"first": self.first.to_json(), "second": self.second.to_json()}


def segment_problem(cx: CellComplex, seg: WallSegment) -> str | None:
    f, l = seg.faces, seg.links
    if not f:
        return "empty segment"
    if len(l) != len(f) - 1:
        return "need one link per consecutive pair"
    for x in f:
        if x not in cx.faces2:
            return f"{x!r} is not a 2-cell"
    for i, e in enumerate(l):
        if e not in cx.face_edges[f[i]] or e not in cx.face_edges[f[i + 1]]:
            return f"link {e!r} not shared by {f[i]!r} and {f[i + 1]!r}"
        if cycles_equivalent(EdgeCycle(cx.faces2[f[i]]), EdgeCycle(cx.faces2[f[i + 1]])):
            return f"{f[i]!r} and {f[i + 1]!r} have the same boundary"
    for i in range(len(l) - 1):
        if not opposite_in(cx, f[i + 1], l[i], l[i + 1]):
            return f"{l[i]!r} and {l[i + 1]!r} not opposite in {f[i + 1]!r}"
    return None


def verify_wall_segment(cx: CellComplex, seg: WallSegment) -> bool:
    """Is the segment the unique face geodesic between its ends?"""
    problem = segment_problem(cx, seg)
    if problem:
        raise WallError(f"invalid wall-segment: {problem}")
    f = seg.faces
    iv = interval(cx, f[0], f[-1])
    if iv.distance != len(f) - 1 or iv.members != frozenset(f):
        return False
    fg = face_graph(cx)
    for i in range(len(f)):
        for j in range(i + 2, len(f)):
            if fg.index[f[j]] in fg.adj[fg.index[f[i]]]:
                return False
    return True


def bent_problem(cx: CellComplex, bent: BentSegment) -> str | None:
    for arm in (bent.first, bent.second):
        p = segment_problem(cx, arm)
        if p:
            return p
    if bent.first.faces[-1] != bent.second.faces[0]:
        return "arms do not share the bend face"
    if len(bent.first.faces) >= 2 and len(bent.second.faces) >= 2:
        a, c = bent.first.faces[-2], bent.second.faces[1]
        if cx.face_vertices[a] & cx.face_vertices[c]:
            return "faces on either side of the bend intersect"
    return None


def verify_bent_segment(cx: CellComplex, bent: BentSegment) -> bool:
    problem = bent_problem(cx, bent)
    if problem:
        raise WallError(f"invalid bent wall-segment: {problem}")
    f = bent.faces
    return face_distance(cx, f[0], f[-1]) == len(f) - 1


def segment_in_wall(cx: CellComplex, wall: Wall, r1: str, r2: str) -> WallSegment | None:
    """Shortest chain of opposite wall edges joining two carrier 2-cells."""
    if r1 == r2:
        return WallSegment((r1,), ())
    start = sorted(cx.face_edges[r1] & wall.edges)
    goal = cx.face_edges[r2] & wall.edges
    # state = (edge, 2-cell through which we arrived)
    prev: dict[str, tuple[str | None, str | None]] = {e: (None, None) for e in start}
    q = deque(start)
    hit = None
    while q:
        e = q.popleft()
        if e in goal:
            hit = e
            break
        for f in sorted(cx.edge_faces[e]):
            for g in sorted(cx.face_edges[f] & wall.edges):
                if g != e and g not in prev and opposite_in(cx, f, e, g):
                    prev[g] = (e, f)
                    q.append(g)
    if hit is None:
        return None
    links, faces = [hit], []
    while prev[links[-1]][0] is not None:
        e, f = prev[links[-1]]
        faces.append(f)
        links.append(e)
    links.reverse()
    faces.reverse()
    seq = [r1] + faces + [r2]
    return WallSegment(tuple(seq), tuple(links))


def straight_segments(cx: CellComplex, wall: Wall) -> list[WallSegment]:
    """Wall-segments between every pair of distinct carrier 2-cells of a wall."""
    cells = sorted({f for e in wall.edges for f in cx.edge_faces[e]})
    out = []
    for i, a in enumerate(cells):
        for b in cells[i + 1 :]:
            seg = segment_in_wall(cx, wall, a, b)
            if seg is not None and segment_problem(cx, seg) is None:
                out.append(seg)
    return out


def bent_segments(cx: CellComplex, walls: Sequence[Wall], max_arm: int | None = None) -> list[BentSegment]:
    """Bent wall-segments whose arms run along two walls crossing at a common 2-cell."""
    segs: dict[str, list[WallSegment]] = {}
    for w in walls:
        for s in straight_segments(cx, w):
            for seq in (s, WallSegment(s.faces[::-1], s.links[::-1])):
                if max_arm is None or len(seq.faces) - 1 <= max_arm:
                    segs.setdefault(seq.faces[-1], []).append(seq)
    out = []
    for b in sorted(segs):
        arms = segs[b]
        for first in arms:
            for second in arms:
                rev = WallSegment(second.faces[::-1], second.links[::-1])
                bent = BentSegment(first, rev)
                if bent_problem(cx, bent) is None and len(set(bent.faces)) == len(bent.faces):
                    out.append(bent)
    return out
