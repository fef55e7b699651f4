"""Deterministic constructors for the fixture complexes.

Honeycomb-type complexes live on the triangular lattice with integer coordinates
``(i, j)`` standing for ``i*u + j*w`` where ``u, w`` are unit vectors 60 degrees
apart.  Hexagon centres form the index-3 sublattice ``i - j = 0 (mod 3)``; a hexagon
with axial coordinates ``(a, b)`` has centre ``(2a + b, b - a)`` and its corners are
the six lattice neighbours of that centre.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .complex import CellComplex, ComplexError, Edge, Step, Subcomplex, check_size

# lattice neighbour offsets in counter-clockwise order
DIRS = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]


@dataclass
class Fixture:
    complex: CellComplex
    marked: dict[str, Subcomplex] = field(default_factory=dict)
    info: dict = field(default_factory=dict)


class _Builder:
    def __init__(self):
        self.vertices: dict[str, None] = {}
        self.edges: dict[str, Edge] = {}
        self.faces: dict[str, tuple[Step, ...]] = {}

    def vertex(self, v: str) -> str:
        self.vertices.setdefault(v, None)
        return v

    def edge(self, eid: str, src: str, dst: str) -> str:
        self.vertex(src)
        self.vertex(dst)
        old = self.edges.get(eid)
        if old is not None and (old.src, old.dst) != (src, dst):
            raise ComplexError(f"edge {eid!r} redefined")
        self.edges[eid] = Edge(eid, src, dst)
        return eid

    def walk(self, start: str, eids: Iterable[str]) -> tuple[Step, ...]:
        """Steps traversing ``eids`` in order from ``start``."""
        at, out = start, []
        for eid in eids:
            e = self.edges[eid]
            if e.src == at:
                out.append((eid, 1))
                at = e.dst
            elif e.dst == at:
                out.append((eid, -1))
                at = e.src
            else:
                raise ComplexError(f"edge {eid!r} does not continue the walk at {at!r}")
        if at != start:
            raise ComplexError("walk does not close up")
        return tuple(out)

    def face(self, fid: str, steps: Iterable[Step]) -> str:
        if fid in self.faces:
            raise ComplexError(f"face {fid!r} defined twice")
        self.faces[fid] = tuple(steps)
        return fid

    def build(self) -> CellComplex:
        check_size(len(self.vertices) + len(self.edges) + len(self.faces))
        return CellComplex(list(self.vertices), list(self.edges.values()), self.faces)


# -- honeycombs -----------------------------------------------------------


def hex_distance(a: int, b: int) -> int:
    return (abs(a) + abs(b) + abs(a + b)) // 2


def hex_ball(r: int, centre: tuple[int, int] = (0, 0)) -> list[tuple[int, int]]:
    ca, cb = centre
    return [
        (ca + a, cb + b)
        for a in range(-r, r + 1)
        for b in range(-r, r + 1)
        if hex_distance(a, b) <= r
    ]


def hex_neighbours(a: int, b: int) -> list[tuple[int, int]]:
    return [(a + 1, b), (a, b + 1), (a - 1, b + 1), (a - 1, b), (a, b - 1), (a + 1, b - 1)]


def _pt(p: tuple[int, int]) -> str:
    return f"p[{p[0]},{p[1]}]"


def hex_face_id(a: int, b: int) -> str:
    return f"h[{a},{b}]"


Subdivision = int | dict | Callable[[str], int]


def _subdiv_count(profile: Subdivision, hexside: str) -> int:
    if isinstance(profile, int):
        k = profile
    elif isinstance(profile, dict):
        k = profile.get(hexside, 1)
    else:
        k = profile(hexside)
    if k < 1:
        raise ComplexError("subdivision counts must be at least 1")
    return k


def honeycomb(cells: Iterable[tuple[int, int]], subdiv: Subdivision = 1) -> Fixture:
    """Hexagon patch on the given axial cells; hexsides subdivided per ``subdiv``."""
    cells = sorted(set(cells))
    est = 6 * len(cells) * (subdiv if isinstance(subdiv, int) else 1)
    check_size(est, "honeycomb")
    bld = _Builder()
    hexsides: dict[str, list[str]] = {}
    side_ends: dict[str, tuple[str, str]] = {}
    face_sides: dict[str, list[str]] = {}
    coords = {}
    for a, b in cells:
        c = (2 * a + b, b - a)
        corners = [(c[0] + d[0], c[1] + d[1]) for d in DIRS]
        fid = hex_face_id(a, b)
        coords[fid] = (a, b)
        steps: list[Step] = []
        sides = []
        for k in range(6):
            p, q = corners[k], corners[(k + 1) % 6]
            lo, hi = sorted((p, q))
            hs = f"s[{lo[0]},{lo[1]}|{hi[0]},{hi[1]}]"
            sides.append(hs)
            if hs not in hexsides:
                n = _subdiv_count(subdiv, hs)
                chain = [_pt(lo)] + [f"{hs}.v{t}" for t in range(1, n)] + [_pt(hi)]
                eids = [hs] if n == 1 else [f"{hs}.{t}" for t in range(n)]
                for t, eid in enumerate(eids):
                    bld.edge(eid, chain[t], chain[t + 1])
                hexsides[hs] = eids
                side_ends[hs] = (_pt(lo), _pt(hi))
            if (p, q) == (lo, hi):
                steps.extend((e, 1) for e in hexsides[hs])
            else:
                steps.extend((e, -1) for e in reversed(hexsides[hs]))
        bld.face(fid, steps)
        face_sides[fid] = sides
    cx = bld.build()
    return Fixture(
        cx,
        {},
        {"coords": coords, "hexsides": hexsides, "face_sides": face_sides},
    )


def gen_hex(r: int, subdiv: Subdivision = 1) -> Fixture:
    """Hexagon ball of radius ``r`` (1 + 3r(r+1) hexagons)."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    fx = honeycomb(hex_ball(r), subdiv)
    fx.info["radius"] = r
    fx.marked["centre"] = Subcomplex.closure(fx.complex, [hex_face_id(0, 0)])
    return fx


def gen_band(width: int, length: int, subdiv: Subdivision = 1) -> Fixture:
    """``width`` rows of ``length`` hexagons; rows meet along zigzags."""
    if width < 1 or length < 1:
        raise ValueError("width and length must be at least 1")
    fx = honeycomb([(a, b) for b in range(width) for a in range(length)], subdiv)
    fx.info.update(width=width, length=length)
    return fx


def gen_tri(r: int) -> Fixture:
    """Triangular-lattice ball of radius ``r`` as a 2-complex of triangles."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    pts = set(hex_ball(r))
    bld = _Builder()
    for p in sorted(pts):
        bld.vertex(_pt(p))

    def eid(p, q):
        lo, hi = sorted((p, q))
        name = f"t[{lo[0]},{lo[1]}|{hi[0]},{hi[1]}]"
        bld.edge(name, _pt(lo), _pt(hi))
        return name

    for p in sorted(pts):
        for d in DIRS[:3]:
            q = (p[0] + d[0], p[1] + d[1])
            if q in pts:
                eid(p, q)
    for i, j in sorted(pts):
        for tri, tag in (
            (((i, j), (i + 1, j), (i, j + 1)), "u"),
            (((i, j), (i, j + 1), (i - 1, j + 1)), "d"),
        ):
            if all(t in pts for t in tri):
                eids = [eid(tri[k], tri[(k + 1) % 3]) for k in range(3)]
                bld.face(f"T{tag}[{i},{j}]", bld.walk(_pt(tri[0]), eids))
    return Fixture(bld.build(), {}, {"radius": r})


# -- petal example --------------------------------------------------------


def gen_petal(n: int) -> Fixture:
    """A 2n-gon with a bigon glued along each side.

    ``Y1`` is the union of the first n bigons and ``Y2`` of the last n; they meet
    in two vertices.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    bld = _Builder()
    m = 2 * n
    vs = [bld.vertex(f"v{i}") for i in range(m)]
    for i in range(m):
        bld.edge(f"P{i}", vs[i], vs[(i + 1) % m])
        bld.edge(f"f{i}", vs[i], vs[(i + 1) % m])
    bld.face("R", [(f"P{i}", 1) for i in range(m)])
    for i in range(m):
        bld.face(f"B{i}", [(f"P{i}", 1), (f"f{i}", -1)])
    cx = bld.build()
    return Fixture(
        cx,
        {
            "Y1": Subcomplex.closure(cx, [f"B{i}" for i in range(n)]),
            "Y2": Subcomplex.closure(cx, [f"B{i}" for i in range(n, m)]),
        },
        {"n": n},
    )


# -- thick square ---------------------------------------------------------


def _thick_square_into(bld: _Builder, prefix: str, ring: list[tuple[str, str, str]] | None) -> None:
    """Add one copy of the thick square.

    Without ``ring`` the eight boundary triangles are built too.  With ``ring`` the
    triangles are replaced by existing 2-cells: ``ring[i] = (g, b, h)`` gives the two
    edge ids ``g`` (from contact ``c_i`` to ``b``) and ``h`` (from ``b`` to ``c_{i+1}``)
    of the arc along which the pentagons attach, and the middle vertex ``b``.
    """
    a = [bld.vertex(f"{prefix}a{i}") for i in range(8)]
    for i in range(8):
        bld.edge(f"{prefix}o{i}", a[i], a[(i + 1) % 8])
    if ring is None:
        c = [bld.vertex(f"{prefix}c{i}") for i in range(8)]
        b = [bld.vertex(f"{prefix}b{i}") for i in range(8)]
        arcs = []
        for i in range(8):
            # arc of triangle T_i runs c_i -> b_{i+1} -> c_{i+1}
            g = bld.edge(f"{prefix}g{i}", c[i], b[(i + 1) % 8])
            h = bld.edge(f"{prefix}h{(i + 1) % 8}", b[(i + 1) % 8], c[(i + 1) % 8])
            arcs.append((g, b[(i + 1) % 8], h))
        for i in range(8):
            t = bld.edge(f"{prefix}t{i}", c[i], c[(i + 1) % 8])
            g, _, h = arcs[i]
            bld.face(f"{prefix}T{i}", bld.walk(c[i], [t, h, g]))
        tip = [arcs[(i - 1) % 8][1] for i in range(8)]
    else:
        arcs = ring
        tip = [arcs[(i - 1) % 8][1] for i in range(8)]
    for i in range(8):
        bld.edge(f"{prefix}s{i}", a[i], tip[i])
    bld.face(f"{prefix}O", [(f"{prefix}o{i}", 1) for i in range(8)])
    for i in range(8):
        # P_i = a_{i+1} a_i b_i c_i b_{i+1}; h of arc i-1 ends at c_i, g of arc i starts there
        h_prev = arcs[(i - 1) % 8][2]
        g_here = arcs[i][0]
        steps = bld.walk(
            a[(i + 1) % 8],
            [f"{prefix}o{i}", f"{prefix}s{i}", h_prev, g_here, f"{prefix}s{(i + 1) % 8}"],
        )
        bld.face(f"{prefix}P{i}", steps)


def gen_thick_square() -> Fixture:
    """Octagon ringed by eight pentagons ringed by eight triangles (17 2-cells).

    Triangle ``T_i`` meets ``T_{i-1}`` and ``T_{i+1}`` in single vertices and meets
    pentagons ``P_i`` and ``P_{i+1}`` in single edges; the triangles' outer edges
    form the boundary circle.  ``B`` is the union of the triangles.
    """
    bld = _Builder()
    _thick_square_into(bld, "", None)
    cx = bld.build()
    return Fixture(cx, {"B": Subcomplex.closure(cx, [f"T{i}" for i in range(8)])}, {})


# -- blow-up of a Cayley graph of Z x Z2 ----------------------------------

# neighbour slots of a Cayley vertex in boundary order of its blow-up disc
_SLOTS = ("A+", "B+", "A-", "B-")


def _cay(g: tuple[int, int]) -> str:
    return f"{g[0]},{g[1]}"


def _slot_target(g: tuple[int, int], slot: str) -> tuple[int, int]:
    k, d = g
    return {
        "A+": (k + 1, d),
        "B+": (k + 1, 1 - d),
        "A-": (k - 1, d),
        "B-": (k - 1, 1 - d),
    }[slot]


def _slot_of(g, h) -> str:
    for s in _SLOTS:
        if _slot_target(g, s) == h:
            return s
    raise ValueError(f"{g} and {h} are not adjacent")


def gen_blowup(m: int) -> Fixture:
    """Truncated blow-up of the Cayley graph of Z x Z2 with generators (1,0), (1,1).

    Cayley vertices ``(k, d)`` with ``-m <= k <= m`` become octagonal discs
    ``V[k,d]``; each Cayley edge becomes a square disc ``E[g|h]`` touching the two
    vertex discs in single contact vertices.  A vertex disc's contacts appear in the
    order A+, B+, A-, B- with one midpoint between consecutive contacts.  A square
    disc's two arcs between its contacts are ``p`` (used by the column-pair
    4-cycles) and ``q`` (used by the diagonal 4-cycles).  Every 4-cycle of either
    family lying inside the truncation receives a thick square whose triangles are
    the eight discs of the cycle and whose pentagons attach along the arcs between
    consecutive contacts.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    check_size(230 * (2 * m + 1), "blow-up")
    bld = _Builder()
    verts = [(k, d) for k in range(-m, m + 1) for d in (0, 1)]
    vset = set(verts)

    def contact(g, h):
        return bld.vertex(f"x[{_cay(g)}|{_cay(h)}]")

    def vface(g):
        return f"V[{_cay(g)}]"

    def key(g, h):
        return (g, h) if g < h else (h, g)

    def eface(g, h):
        g, h = key(g, h)
        return f"E[{_cay(g)}|{_cay(h)}]"

    # vertex discs
    for g in verts:
        pts = []
        for i, s in enumerate(_SLOTS):
            pts.append(contact(g, _slot_target(g, s)))
            pts.append(bld.vertex(f"m[{_cay(g)}|{i}]"))
        eids = [bld.edge(f"v[{_cay(g)}|{i}]", pts[i], pts[(i + 1) % 8]) for i in range(8)]
        bld.face(vface(g), bld.walk(pts[0], eids))
    # edge discs
    cay_edges = sorted(
        {key(g, _slot_target(g, s)) for g in verts for s in ("A+", "B+") if _slot_target(g, s) in vset}
    )
    for g, h in cay_edges:
        tag = f"{_cay(g)}|{_cay(h)}"
        xg, xh = contact(g, h), contact(h, g)
        p, q = bld.vertex(f"p[{tag}]"), bld.vertex(f"q[{tag}]")
        eids = [
            bld.edge(f"e[{tag}|0]", xg, p),
            bld.edge(f"e[{tag}|1]", p, xh),
            bld.edge(f"e[{tag}|2]", xh, q),
            bld.edge(f"e[{tag}|3]", q, xg),
        ]
        bld.face(eface(g, h), bld.walk(xg, eids))

    def varc(g, frm, to):
        """Arc (first edge, midpoint, second edge) of V(g) from contact with frm to contact with to."""
        i, j = _SLOTS.index(_slot_of(g, frm)), _SLOTS.index(_slot_of(g, to))
        if j == (i + 1) % 4:
            return f"v[{_cay(g)}|{2 * i}]", f"m[{_cay(g)}|{i}]", f"v[{_cay(g)}|{2 * i + 1}]"
        if i == (j + 1) % 4:
            return f"v[{_cay(g)}|{2 * j + 1}]", f"m[{_cay(g)}|{j}]", f"v[{_cay(g)}|{2 * j}]"
        raise ValueError("contacts are not consecutive")

    def earc(g, h, side):
        """Arc of E(g, h) from the g contact to the h contact through ``side``."""
        lo, hi = key(g, h)
        tag = f"{_cay(lo)}|{_cay(hi)}"
        if side == "p":
            arc = (f"e[{tag}|0]", f"p[{tag}]", f"e[{tag}|1]")
        else:
            arc = (f"e[{tag}|3]", f"q[{tag}]", f"e[{tag}|2]")
        return arc if g == lo else (arc[2], arc[1], arc[0])

    copies = []
    for j in range(-m, m - 1):
        for e in (0, 1):
            copies.append((f"Sa[{j},{e}].", [(j, e), (j + 1, e), (j + 2, 1 - e), (j + 1, 1 - e)], "q"))
    for k in range(-m, m):
        copies.append((f"Sb[{k}].", [(k, 0), (k + 1, 0), (k, 1), (k + 1, 1)], "p"))
    for prefix, cyc, side in copies:
        ring = []
        for i in range(4):
            g, h = cyc[i], cyc[(i + 1) % 4]
            ring.append(varc(g, cyc[(i - 1) % 4], h))
            ring.append(earc(g, h, side))
        _thick_square_into(bld, prefix, ring)
    cx = bld.build()
    xprime = [vface(g) for g in verts] + [eface(g, h) for g, h in cay_edges]
    inner = m - 1
    central = [vface(g) for g in verts if abs(g[0]) <= inner] + [
        eface(g, h) for g, h in cay_edges if abs(g[0]) <= inner and abs(h[0]) <= inner
    ]
    return Fixture(
        cx,
        {
            "R": Subcomplex.closure(cx, [vface((0, 0))]),
            "R'": Subcomplex.closure(cx, [vface((0, 1))]),
            "Xprime": Subcomplex.closure(cx, xprime),
            "central": Subcomplex.closure(cx, central),
        },
        {"m": m, "copies": [p[:-1] for p, _, _ in copies]},
    )


# -- composite fixture ----------------------------------------------------


def gen_double_hex(r: int = 3) -> Fixture:
    """Two radius-``r`` hexagon balls glued along their central hexagon.

    ``info["coarse_bound"](r)`` is the documented bound 2r on the diameter of
    N_r(Y1) & N_r(Y2): every face in that overlap lies within r of the shared cell.
    """
    base = gen_hex(r).complex
    centre = Subcomplex.closure(base, [hex_face_id(0, 0)])

    def ren(x: str, tag: str, shared: frozenset) -> str:
        return x if x in shared else f"{tag}:{x}"

    bld = _Builder()
    for tag in ("A", "B"):
        for v in base.vertices:
            bld.vertex(ren(v, tag, centre.vertices))
        for e in base.edges.values():
            bld.edge(
                ren(e.id, tag, centre.edges),
                ren(e.src, tag, centre.vertices),
                ren(e.dst, tag, centre.vertices),
            )
        for fid, bd in base.faces2.items():
            nf = ren(fid, tag, centre.faces)
            if nf in bld.faces:
                continue
            bld.face(nf, [(ren(e, tag, centre.edges), d) for e, d in bd])
    cx = bld.build()
    faces_a = [ren(f, "A", centre.faces) for f in base.faces2]
    faces_b = [ren(f, "B", centre.faces) for f in base.faces2]
    return Fixture(
        cx,
        {
            "Y1": Subcomplex.closure(cx, faces_a),
            "Y2": Subcomplex.closure(cx, faces_b),
        },
        {"radius": r, "coarse_bound": lambda k: 2 * k},
    )


FAMILIES = {
    "hex": gen_hex,
    "tri": gen_tri,
    "band": gen_band,
    "petal": gen_petal,
    "thicksquare": gen_thick_square,
    "blowup": gen_blowup,
    "doublehex": gen_double_hex,
}
