"""Disc diagrams over an ambient complex: spurs, shells, ladders, reducedness, and
the classification of a reduced diagram by its shells and spurs.

A diagram is a planar complex given with a rotation system: for each vertex the
cyclic order of outgoing darts (a dart is a step leaving that vertex).  Faces are
traced by ``next(d) = rotation_successor(reverse(d))``; the orbits must be exactly
the 2-cell boundaries plus the outer boundary cycle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import networkx as nx

from .complex import (
    CellComplex,
    ComplexError,
    Step,
    Subcomplex,
    complex_from_json,
    complex_to_json,
    inv,
    least_rotation,
    validate,
)
from .pieces import Lift, check_cn, piece_index

THREE_OR_MORE = "three-or-more"
LADDER = "ladder"
VIOLATION = "VIOLATION"


class DiagramError(ComplexError):
    pass


@dataclass
class DiscDiagram:
    complex: CellComplex
    rotation: dict[str, list[Step]]
    boundary: tuple[Step, ...]
    vertex_map: dict[str, str] = field(default_factory=dict)
    edge_map: dict[str, Step] = field(default_factory=dict)
    face_map: dict[str, str] = field(default_factory=dict)

    def image(self, step: Step) -> Step:
        e, d = self.edge_map[step[0]]
        return (e, d * step[1])

    def to_json(self) -> dict:
        out = complex_to_json(self.complex)
        out["rotation"] = {v: [{"edge": e, "dir": d} for e, d in ds] for v, ds in self.rotation.items()}
        out["boundary"] = [{"edge": e, "dir": d} for e, d in self.boundary]
        out["map"] = {
            "vertices": dict(self.vertex_map),
            "edges": {e: {"edge": t[0], "dir": t[1]} for e, t in self.edge_map.items()},
            "faces": dict(self.face_map),
        }
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DiscDiagram":
        cx = complex_from_json(data)
        try:
            rot = {str(v): [(str(s["edge"]), int(s["dir"])) for s in ds] for v, ds in data["rotation"].items()}
            bd = tuple((str(s["edge"]), int(s["dir"])) for s in data["boundary"])
            mp = data.get("map", {})
            vm = {str(k): str(v) for k, v in mp.get("vertices", {}).items()}
            em = {str(k): (str(v["edge"]), int(v["dir"])) for k, v in mp.get("edges", {}).items()}
            fm = {str(k): str(v) for k, v in mp.get("faces", {}).items()}
        except (KeyError, TypeError, AttributeError) as exc:
            raise DiagramError(f"malformed diagram JSON: {exc}") from exc
        return cls(cx, rot, bd, vm, em, fm)


def _darts(cx: CellComplex) -> list[Step]:
    return [(e, d) for e in cx.edges for d in (1, -1)]


def _core_cycle(cx: CellComplex) -> list[Step]:
    """Darts on 2-cell edges not used by 2-cells, chained into one cycle."""
    used = {s for bd in cx.faces2.values() for s in bd}
    free = [d for d in _darts(cx) if d not in used and cx.edge_faces[d[0]]]
    if not free:
        return []
    out_of: dict[str, list[Step]] = {}
    for d in free:
        out_of.setdefault(cx.tail(d), []).append(d)
    if any(len(v) > 1 for v in out_of.values()):
        raise DiagramError("outer boundary passes a vertex twice; supply the boundary explicitly")
    start = min(free)
    cyc = [start]
    while True:
        nxt = out_of[cx.head(cyc[-1])][0]
        if nxt == start:
            break
        cyc.append(nxt)
        if len(cyc) > len(free):
            raise DiagramError("outer darts do not close up")
    if len(cyc) != len(free):
        raise DiagramError("outer boundary is not a single cycle")
    return cyc


def outer_boundary(cx: CellComplex) -> tuple[Step, ...]:
    """Boundary cycle of a disc diagram: the 2-cell outline with trees of free edges spliced in.

    Free edges hanging off a vertex are toured (out and back) just before the
    outline leaves that vertex, in sorted order.
    """
    tree_at: dict[str, list[str]] = {}
    for e in cx.isolated_edges:
        ed = cx.edges[e]
        tree_at.setdefault(ed.src, []).append(e)
        tree_at.setdefault(ed.dst, []).append(e)
    done: set[str] = set()

    def tour(v: str) -> list[Step]:
        out = []
        for e in sorted(tree_at.get(v, ())):
            if e in done:
                continue
            done.add(e)
            d = (e, 1) if cx.edges[e].src == v else (e, -1)
            out.append(d)
            out.extend(tour(cx.head(d)))
            out.append(inv(d))
        return out

    core = _core_cycle(cx)
    if core:
        cyc = []
        for d in core:
            cyc.extend(tour(cx.tail(d)))
            cyc.append(d)
    else:
        start = min(cx.vertices) if cx.vertices else None
        cyc = tour(start) if start is not None else []
    if len(done) != len(cx.isolated_edges):
        raise DiagramError("free edges not attached to the outer boundary")
    return tuple(cyc)


def rotation_from_faces(cx: CellComplex, boundary: tuple[Step, ...]) -> dict[str, list[Step]]:
    """Rotation system making the 2-cells and ``boundary`` the face orbits."""
    succ: dict[Step, Step] = {}
    for bd in list(cx.faces2.values()) + [boundary]:
        n = len(bd)
        for i in range(n):
            r = inv(bd[i])
            if r in succ:
                raise DiagramError(f"dart {bd[i]!r} traversed twice by the faces")
            succ[r] = bd[(i + 1) % n]
    rot: dict[str, list[Step]] = {}
    for v in cx.vertices:
        outgoing = [d for d in _darts(cx) if cx.tail(d) == v]
        if not outgoing:
            rot[v] = []
            continue
        cyc = [min(outgoing)]
        while True:
            nxt = succ.get(cyc[-1])
            if nxt is None:
                raise DiagramError(f"rotation undetermined at vertex {v!r}")
            if nxt == cyc[0]:
                break
            cyc.append(nxt)
            if len(cyc) > len(outgoing):
                raise DiagramError(f"rotation at {v!r} does not close")
        if len(cyc) != len(outgoing):
            raise DiagramError(f"vertex {v!r} is not a disc point (rotation splits)")
        rot[v] = cyc
    return rot


def _face_alignment(diag: DiscDiagram, ambient: CellComplex, fid: str) -> tuple[int, int]:
    """(j0, s0): the image of the diagram face reads the ambient face from vertex j0 in direction s0."""
    target = diag.face_map[fid]
    bd = diag.complex.faces2[fid]
    img = [diag.image(s) for s in bd]
    tb = ambient.boundary(target)
    n = len(tb)
    if len(img) != n:
        raise DiagramError(f"face {fid!r} has a different boundary length than its image {target!r}")
    for s0 in (1, -1):
        for j0 in range(n):
            if s0 == 1:
                ok = all(img[k] == tb[(j0 + k) % n] for k in range(n))
            else:
                ok = all(img[k] == inv(tb[(j0 - 1 - k) % n]) for k in range(n))
            if ok:
                return j0, s0
    raise DiagramError(f"face {fid!r} does not map onto the boundary of {target!r}")


def map_lift(diag: DiscDiagram, ambient: CellComplex, lift: Lift) -> Lift:
    fid, i, s = lift
    j0, s0 = _face_alignment(diag, ambient, fid)
    n = len(diag.complex.faces2[fid])
    return diag.face_map[fid], (j0 + s0 * i) % n, s * s0


def diagram_problems(diag: DiscDiagram, ambient: CellComplex | None = None) -> list[str]:
    cx = diag.complex
    problems = validate(cx)
    if problems:
        return problems
    if not cx.vertices:
        return ["empty diagram"]
    g = nx.MultiGraph()
    g.add_nodes_from(cx.vertices)
    g.add_edges_from((e.src, e.dst) for e in cx.edges.values())
    if not nx.is_connected(g):
        problems.append("diagram is not connected")
    chi = len(cx.vertices) - len(cx.edges) + len(cx.faces2)
    if chi != 1:
        problems.append(f"Euler characteristic {chi}, expected 1")
    # the rotation must reproduce exactly the 2-cells plus the boundary as face orbits
    succ: dict[Step, Step] = {}
    for v, ds in diag.rotation.items():
        for k, d in enumerate(ds):
            if d[0] not in cx.edges or cx.tail(d) != v:
                problems.append(f"rotation at {v!r} lists dart {d!r} not leaving it")
                return problems
            succ[d] = ds[(k + 1) % len(ds)]
    if sorted(succ) != sorted(_darts(cx)):
        problems.append("rotation does not list every dart exactly once")
        return problems
    orbits = []
    seen = set()
    for d in sorted(succ):
        if d in seen:
            continue
        orb = [d]
        seen.add(d)
        while True:
            nxt = succ[inv(orb[-1])]
            if nxt == d:
                break
            orb.append(nxt)
            seen.add(nxt)
        orbits.append(orb)
    want = sorted(least_rotation(bd) for bd in cx.faces2.values())
    if diag.boundary:
        want.append(least_rotation(diag.boundary))
    want.sort()
    got = sorted(least_rotation(o) for o in orbits)
    if got != want:
        problems.append("face orbits of the rotation differ from 2-cells plus boundary")
    if ambient is not None:
        problems.extend(map_problems(diag, ambient))
    return problems


def map_problems(diag: DiscDiagram, ambient: CellComplex) -> list[str]:
    cx = diag.complex
    out = []
    for v in cx.vertices:
        if diag.vertex_map.get(v) not in ambient.vertex_set:
            out.append(f"vertex {v!r} has no image")
    for e in cx.edges.values():
        img = diag.edge_map.get(e.id)
        if img is None or img[0] not in ambient.edges or img[1] not in (1, -1):
            out.append(f"edge {e.id!r} has no image")
            continue
        if ambient.tail(img) != diag.vertex_map.get(e.src) or ambient.head(img) != diag.vertex_map.get(e.dst):
            out.append(f"edge {e.id!r} image does not respect endpoints")
    if out:
        return out
    for f in cx.faces2:
        if diag.face_map.get(f) not in ambient.faces2:
            out.append(f"face {f!r} has no image")
            continue
        try:
            _face_alignment(diag, ambient, f)
        except DiagramError as exc:
            out.append(str(exc))
    return out


def check_diagram(diag: DiscDiagram, ambient: CellComplex | None = None) -> None:
    problems = diagram_problems(diag, ambient)
    if problems:
        raise DiagramError("; ".join(problems))


# -- structure --------------------------------------------------------------


def find_spurs(diag: DiscDiagram) -> list[str]:
    return sorted(v for v, d in diag.complex.vertex_degree.items() if d == 1)


@dataclass(frozen=True)
class ShellRecord:
    face: str
    outer: tuple[Step, ...]
    inner: tuple[Step, ...]
    i: float

    def to_json(self) -> dict:
        return {
            "face": self.face,
            "outerpath": [list(s) for s in self.outer],
            "innerpath": [list(s) for s in self.inner],
            "i": None if self.i == float("inf") else self.i,
        }


def _boundary_edges(diag: DiscDiagram) -> set[str]:
    return {e for e in diag.complex.edges if len(diag.complex.edge_faces[e]) <= 1}


def classify_shells(diag: DiscDiagram, ambient: CellComplex) -> tuple[list[ShellRecord], list[dict]]:
    """Shell records for 2-cells meeting the boundary in one arc, and the non-shells."""
    cx = diag.complex
    on_bd = _boundary_edges(diag)
    idx = piece_index(ambient)
    shells, others = [], []
    for fid in sorted(cx.faces2):
        bd = cx.faces2[fid]
        n = len(bd)
        marks = [bd[k][0] in on_bd for k in range(n)]
        if not any(marks):
            continue
        if all(marks):
            shells.append(ShellRecord(fid, tuple(bd), (), 0))
            continue
        starts = [k for k in range(n) if marks[k] and not marks[k - 1]]
        if len(starts) != 1:
            others.append({"face": fid, "arcs": len(starts)})
            continue
        s = starts[0]
        length = 0
        while marks[(s + length) % n]:
            length += 1
        outer = tuple(bd[(s + k) % n] for k in range(length))
        inner = tuple(bd[(s + length + k) % n] for k in range(n - length))
        i = idx.plength([diag.image(st) for st in inner])
        shells.append(ShellRecord(fid, outer, inner, i))
    return shells, others


def ladder_order(diag: DiscDiagram) -> list[str] | None:
    """Order of the units (2-cells and free edges) if they form a ladder."""
    cx = diag.complex
    units = sorted(cx.faces2) + sorted(e for e in cx.edges if not cx.edge_faces[e])
    if not units:
        return None
    verts = {u: (cx.face_vertices[u]) for u in units}
    g = nx.Graph()
    g.add_nodes_from(units)
    for i, a in enumerate(units):
        for b in units[i + 1 :]:
            if verts[a] & verts[b]:
                g.add_edge(a, b)
    if len(units) == 1:
        return units
    if not nx.is_connected(g) or any(d > 2 for _, d in g.degree) or g.number_of_edges() != len(units) - 1:
        return None
    end = min(u for u in units if g.degree[u] == 1)
    return list(nx.dfs_preorder_nodes(g, end))


def is_ladder(diag: DiscDiagram) -> bool:
    return ladder_order(diag) is not None


def reducedness_witness(diag: DiscDiagram, ambient: CellComplex) -> dict | None:
    """A diagram piece whose two lifts become identified in the ambient, if any."""
    cx = diag.complex
    if not cx.faces2:
        return None
    didx = piece_index(cx)
    aidx = piece_index(ambient)
    for fid in sorted(cx.faces2):
        bd = cx.faces2[fid]
        n = len(bd)
        for a in range(n):
            for length in range(1, n + 1):
                arc = tuple(bd[(a + k) % n] for k in range(length))
                lifts = didx.lifts(arc)
                if len(lifts) < 2:
                    break
                for x in range(len(lifts)):
                    for y in range(x + 1, len(lifts)):
                        l1, l2 = lifts[x], lifts[y]
                        if didx._iso(l1, l2):
                            continue
                        m1, m2 = map_lift(diag, ambient, l1), map_lift(diag, ambient, l2)
                        if aidx._iso(m1, m2):
                            return {
                                "path": [list(s) for s in arc],
                                "edges": sorted({s[0] for s in arc}),
                                "lifts": [list(l1), list(l2)],
                                "images": [list(m1), list(m2)],
                            }
    return None


def is_reduced(diag: DiscDiagram, ambient: CellComplex) -> bool:
    return reducedness_witness(diag, ambient) is None


@dataclass
class DiagramReport:
    verdict: str
    shells: list[ShellRecord]
    spurs: list[str]
    ladder: list[str] | None
    non_shells: list[dict]
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "three_shells": [s.to_json() for s in self.shells if s.i <= 3],
            "all_shells": [s.to_json() for s in self.shells],
            "spurs": self.spurs,
            "ladder": self.ladder,
            "non_shells": self.non_shells,
            "detail": self.detail,
        }


def classify_diagram(diag: DiscDiagram, ambient: CellComplex) -> DiagramReport:
    check_diagram(diag, ambient)
    cx = diag.complex
    if not cx.edges:
        raise DiagramError("diagram is trivial")
    if check_cn(ambient, 6):
        raise DiagramError("ambient complex is not C(6)")
    w = reducedness_witness(diag, ambient)
    if w is not None:
        raise DiagramError(f"diagram is not reduced (witness edges {w['edges']})")
    shells, others = classify_shells(diag, ambient)
    spurs = find_spurs(diag)
    three = [s for s in shells if s.i <= 3]
    order = ladder_order(diag)
    count = len(three) + len(spurs)
    if count >= 3:
        if count == 3 and any(s.i > 2 for s in three):
            return DiagramReport(VIOLATION, shells, spurs, order, others, "exactly three, but not all 2-shells")
        return DiagramReport(THREE_OR_MORE, shells, spurs, order, others)
    if order is not None:
        return DiagramReport(LADDER, shells, spurs, order, others)
    return DiagramReport(VIOLATION, shells, spurs, order, others, "fewer than three 3-shells/spurs and not a ladder")


# -- builders ---------------------------------------------------------------


def diagram_from_faces(ambient: CellComplex, faces, extra_edges=()) -> DiscDiagram:
    """Identity-mapped diagram on the closure of some ambient cells."""
    sub = Subcomplex.closure(ambient, faces, extra_edges)
    verts = [v for v in ambient.vertices if v in sub.vertices]
    edges = [ambient.edges[e] for e in sorted(sub.edges)]
    cx = CellComplex(verts, edges, {f: ambient.faces2[f] for f in sorted(sub.faces)})
    bd = outer_boundary(cx)
    rot = rotation_from_faces(cx, bd)
    return DiscDiagram(
        cx,
        rot,
        bd,
        {v: v for v in verts},
        {e.id: (e.id, 1) for e in edges},
        {f: f for f in sorted(sub.faces)},
    )


def folded_pair() -> tuple[DiscDiagram, CellComplex]:
    """Two hexagons sharing an edge, both mapped onto one hexagon, the second mirrored.

    The shared edge lifts to both cells of the diagram, and both lifts land on the
    same position of the ambient hexagon, so the pair is cancellable.
    """
    from .generators import gen_hex, honeycomb

    ambient = gen_hex(0).complex
    dcx = honeycomb([(0, 0), (1, 0)]).complex
    corners_b = ["p[1,0]", "p[1,-1]", "p[2,-2]", "p[3,-2]", "p[3,-1]", "p[2,0]"]
    images_b = ["p[1,0]", "p[1,-1]", "p[0,-1]", "p[-1,0]", "p[-1,1]", "p[0,1]"]
    vmap = {v: v for v in dcx.vertices}
    vmap.update(dict(zip(corners_b, images_b)))
    emap = {}
    for e in dcx.edges.values():
        a, b = vmap[e.src], vmap[e.dst]
        for t in ambient.edges.values():
            if (t.src, t.dst) == (a, b):
                emap[e.id] = (t.id, 1)
            elif (t.src, t.dst) == (b, a):
                emap[e.id] = (t.id, -1)
    fmap = {f: "h[0,0]" for f in dcx.faces2}
    bd = outer_boundary(dcx)
    diag = DiscDiagram(dcx, rotation_from_faces(dcx, bd), bd, vmap, emap, fmap)
    return diag, ambient


def path_diagram(n: int) -> tuple[DiscDiagram, CellComplex]:
    """A path of ``n`` edges, mapped to itself."""
    vs = [f"u{i}" for i in range(n + 1)]
    cx = CellComplex(vs, [(f"a{i}", vs[i], vs[i + 1]) for i in range(n)], {})
    bd = outer_boundary(cx)
    diag = DiscDiagram(
        cx, rotation_from_faces(cx, bd), bd, {v: v for v in vs}, {f"a{i}": (f"a{i}", 1) for i in range(n)}, {}
    )
    return diag, cx


def dumps_diagram(diag: DiscDiagram) -> str:
    return json.dumps(diag.to_json(), ensure_ascii=False, separators=(",", ":"))
