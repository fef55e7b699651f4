"""Finite combinatorial 2-complexes, edge paths, edge cycles and subcomplexes.

A complex stores opaque string ids only: vertices, oriented edges ``(id, src, dst)``
and 2-cells whose boundary is a closed immersed sequence of directed edge steps.
A step is a pair ``(edge_id, dir)`` with ``dir`` in ``{1, -1}``; ``dir == 1``
traverses the edge from ``src`` to ``dst``.

Complexes are treated as immutable.  Derived data (incidence tables, face graph,
piece index) is cached lazily on the instance.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Step = tuple[str, int]


class ComplexError(ValueError):
    """Raised on malformed input or references to unknown cells."""


class OversizeError(ComplexError):
    """Raised when an instance exceeds the configured cell cap."""


def max_cells() -> int:
    return int(os.environ.get("SCW_MAX_CELLS", "10000"))


def check_size(n_cells: int, what: str = "complex") -> None:
    cap = max_cells()
    if n_cells > cap:
        raise OversizeError(f"{what} has {n_cells} cells, above the cap of {cap} (SCW_MAX_CELLS)")


def inv(step: Step) -> Step:
    return (step[0], -step[1])


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str


class CellComplex:
    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[Edge | tuple[str, str, str]],
        faces: dict[str, Sequence[Step]] | Iterable[tuple[str, Sequence[Step]]],
    ):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: dict[str, Edge] = {}
        self._edge_list: list[Edge] = []
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            self._edge_list.append(e)
            self.edges.setdefault(e.id, e)
        items = faces.items() if isinstance(faces, dict) else faces
        self._face_list: list[tuple[str, tuple[Step, ...]]] = [
            (fid, tuple((s[0], int(s[1])) for s in bd)) for fid, bd in items
        ]
        self.faces2: dict[str, tuple[Step, ...]] = {}
        for fid, bd in self._face_list:
            self.faces2.setdefault(fid, bd)

    def __repr__(self) -> str:
        return (
            f"CellComplex({len(self.vertices)} vertices, {len(self.edges)} edges, "
            f"{len(self.faces2)} 2-cells)"
        )

    # -- steps ---------------------------------------------------------------

    def tail(self, step: Step) -> str:
        e = self.edges[step[0]]
        return e.src if step[1] == 1 else e.dst

    def head(self, step: Step) -> str:
        e = self.edges[step[0]]
        return e.dst if step[1] == 1 else e.src

    # -- incidence -----------------------------------------------------------

    @cached_property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def edge_faces(self) -> dict[str, tuple[str, ...]]:
        """2-cells whose boundary traverses each edge (no repeats)."""
        out: dict[str, list[str]] = {e: [] for e in self.edges}
        for fid, bd in self.faces2.items():
            for eid in dict.fromkeys(s[0] for s in bd):
                out[eid].append(fid)
        return {e: tuple(fs) for e, fs in out.items()}

    @cached_property
    def isolated_edges(self) -> tuple[str, ...]:
        return tuple(e for e in self.edges if not self.edge_faces[e])

    @cached_property
    def face_ids(self) -> tuple[str, ...]:
        """Faces in the face-metric sense: 2-cells and isolated 1-cells."""
        return tuple(self.faces2) + self.isolated_edges

    def is_face(self, fid: str) -> bool:
        return fid in self.faces2 or (fid in self.edges and not self.edge_faces[fid])

    @cached_property
    def face_vertices(self) -> dict[str, frozenset[str]]:
        out = {}
        for fid, bd in self.faces2.items():
            out[fid] = frozenset(self.tail(s) for s in bd)
        for eid in self.isolated_edges:
            e = self.edges[eid]
            out[eid] = frozenset((e.src, e.dst))
        return out

    @cached_property
    def face_edges(self) -> dict[str, frozenset[str]]:
        out = {fid: frozenset(s[0] for s in bd) for fid, bd in self.faces2.items()}
        for eid in self.isolated_edges:
            out[eid] = frozenset((eid,))
        return out

    @cached_property
    def vertex_faces(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for fid in self.face_ids:
            for v in sorted(self.face_vertices[fid]):
                out[v].append(fid)
        return {v: tuple(fs) for v, fs in out.items()}

    @cached_property
    def vertex_degree(self) -> dict[str, int]:
        deg = {v: 0 for v in self.vertices}
        for e in self.edges.values():
            deg[e.src] += 1
            deg[e.dst] += 1
        return deg

    def boundary(self, fid: str) -> tuple[Step, ...]:
        try:
            return self.faces2[fid]
        except KeyError:
            raise ComplexError(f"unknown 2-cell {fid!r}") from None

    @property
    def n_cells(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.faces2)

    def digest(self) -> str:
        return hashlib.sha256(dumps_complex(self).encode()).hexdigest()

    @cached_property
    def _cache(self) -> dict:
        # scratch space for other modules (piece index, face graph, ...)
        return {}


# -- validation -----------------------------------------------------------


def validate(cx: CellComplex) -> list[str]:
    """Return a list of invariant violations; empty iff ``cx`` is well formed."""
    problems = []
    if len(set(cx.vertices)) != len(cx.vertices):
        problems.append("duplicate vertex id")
    seen = set()
    for e in cx._edge_list:
        if e.id in seen:
            problems.append(f"duplicate edge id {e.id!r}")
        seen.add(e.id)
        for v in (e.src, e.dst):
            if v not in cx.vertex_set:
                problems.append(f"edge {e.id!r} references unknown vertex {v!r}")
    seen = set()
    for fid, bd in cx._face_list:
        if fid in seen:
            problems.append(f"duplicate face id {fid!r}")
        seen.add(fid)
        if not bd:
            problems.append(f"face {fid!r}: empty boundary")
            continue
        bad = [s for s in bd if s[0] not in cx.edges or s[1] not in (1, -1)]
        if bad:
            problems.append(f"face {fid!r}: unknown edge or direction in {bad[0]!r}")
            continue
        n = len(bd)
        for i in range(n):
            a, b = bd[i], bd[(i + 1) % n]
            if cx.head(a) != cx.tail(b):
                problems.append(f"face {fid!r}: boundary not closed at position {i}")
                break
        for i in range(n):
            if bd[(i + 1) % n] == inv(bd[i]):
                problems.append(f"face {fid!r}: boundary not immersed at position {i}")
                break
    if not any("unknown" in p for p in problems):
        for eid in cx.isolated_edges:
            if eid in cx.faces2:
                problems.append(f"isolated edge {eid!r} shares its id with a 2-cell")
    return problems


# -- paths and cycles -----------------------------------------------------


@dataclass(frozen=True)
class EdgePath:
    """A directed edge sequence; ``start`` anchors trivial paths."""

    steps: tuple[Step, ...]
    start: str | None = None

    def __len__(self) -> int:
        return len(self.steps)

    def reversed(self, cx: CellComplex | None = None) -> "EdgePath":
        start = None
        if self.steps and cx is not None:
            start = cx.head(self.steps[-1])
        elif not self.steps:
            start = self.start
        return EdgePath(tuple(inv(s) for s in reversed(self.steps)), start)

    def endpoints(self, cx: CellComplex) -> tuple[str, str]:
        if not self.steps:
            if self.start is None:
                raise ComplexError("trivial path without anchor vertex")
            return self.start, self.start
        return cx.tail(self.steps[0]), cx.head(self.steps[-1])

    def to_json(self) -> dict:
        return {"start": self.start, "steps": [{"edge": e, "dir": d} for e, d in self.steps]}


def check_path(cx: CellComplex, steps: Sequence[Step], closed: bool = False) -> None:
    """Raise ComplexError unless ``steps`` is a head-to-tail immersed walk."""
    for s in steps:
        if s[0] not in cx.edges:
            raise ComplexError(f"unknown edge {s[0]!r}")
    n = len(steps)
    pairs = range(n if closed else n - 1)
    for i in pairs:
        a, b = steps[i], steps[(i + 1) % n]
        if cx.head(a) != cx.tail(b):
            raise ComplexError(f"path not continuous at position {i}")
        if b == inv(a):
            raise ComplexError(f"path not immersed at position {i}")


def make_path(cx: CellComplex, steps: Iterable[Step], start: str | None = None) -> EdgePath:
    steps = tuple((e, int(d)) for e, d in steps)
    check_path(cx, steps)
    if steps:
        start = cx.tail(steps[0])
    return EdgePath(steps, start)


def least_rotation(seq: Sequence) -> tuple:
    n = len(seq)
    if n == 0:
        return ()
    return min(tuple(seq[i:]) + tuple(seq[:i]) for i in range(n))


@dataclass(frozen=True, eq=False)
class EdgeCycle:
    """A closed immersed step sequence, compared up to rotation."""

    steps: tuple[Step, ...]

    def __post_init__(self):
        if not self.steps:
            raise ComplexError("a cycle needs at least one step")

    def __len__(self) -> int:
        return len(self.steps)

    @cached_property
    def canonical(self) -> tuple[Step, ...]:
        return least_rotation(self.steps)

    def reversed(self) -> "EdgeCycle":
        return EdgeCycle(tuple(inv(s) for s in reversed(self.steps)))

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgeCycle) and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)


def cycles_equivalent(c1: EdgeCycle, c2: EdgeCycle, reversible: bool = True) -> bool:
    """Rotation equivalence, optionally also allowing orientation reversal."""
    if c1 == c2:
        return True
    return reversible and c1 == c2.reversed()


def boundary_cycle(cx: CellComplex, fid: str) -> EdgeCycle:
    return EdgeCycle(least_rotation(cx.boundary(fid)))


# -- subcomplexes ---------------------------------------------------------


@dataclass(frozen=True)
class Subcomplex:
    vertices: frozenset[str] = field(default_factory=frozenset)
    edges: frozenset[str] = field(default_factory=frozenset)
    faces: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def closure(
        cls,
        cx: CellComplex,
        faces: Iterable[str] = (),
        edges: Iterable[str] = (),
        vertices: Iterable[str] = (),
    ) -> "Subcomplex":
        """Smallest subcomplex containing the given cells.

        ``faces`` may mix 2-cell ids and isolated-edge ids.
        """
        f2, es, vs = set(), set(edges), set(vertices)
        for fid in faces:
            if fid in cx.faces2:
                f2.add(fid)
                es.update(s[0] for s in cx.faces2[fid])
            elif fid in cx.edges:
                es.add(fid)
            else:
                raise ComplexError(f"unknown face {fid!r}")
        for eid in es:
            if eid not in cx.edges:
                raise ComplexError(f"unknown edge {eid!r}")
            e = cx.edges[eid]
            vs.update((e.src, e.dst))
        unknown = vs - cx.vertex_set
        if unknown:
            raise ComplexError(f"unknown vertex {sorted(unknown)[0]!r}")
        return cls(frozenset(vs), frozenset(es), frozenset(f2))

    @classmethod
    def whole(cls, cx: CellComplex) -> "Subcomplex":
        return cls(cx.vertex_set, frozenset(cx.edges), frozenset(cx.faces2))

    def face_set(self, cx: CellComplex) -> frozenset[str]:
        """Faces of the ambient complex lying in this subcomplex."""
        return self.faces | frozenset(e for e in self.edges if not cx.edge_faces[e])

    def is_closed(self, cx: CellComplex) -> bool:
        return Subcomplex.closure(cx, self.faces, self.edges, self.vertices) == self

    def __or__(self, other: "Subcomplex") -> "Subcomplex":
        return Subcomplex(
            self.vertices | other.vertices, self.edges | other.edges, self.faces | other.faces
        )

    def __and__(self, other: "Subcomplex") -> "Subcomplex":
        return Subcomplex(
            self.vertices & other.vertices, self.edges & other.edges, self.faces & other.faces
        )

    def is_empty(self) -> bool:
        return not (self.vertices or self.edges or self.faces)

    def to_json(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "edges": sorted(self.edges),
            "faces": sorted(self.faces),
        }

    @classmethod
    def from_json(cls, cx: CellComplex, data: dict) -> "Subcomplex":
        return cls.closure(
            cx,
            faces=data.get("faces", ()),
            edges=data.get("edges", ()),
            vertices=data.get("vertices", ()),
        )


def components(cx: CellComplex, sub: Subcomplex) -> list[Subcomplex]:
    """Connected components of a (closed) subcomplex."""
    parent = {v: v for v in sub.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in sub.edges:
        e = cx.edges[eid]
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[a] = b
    groups: dict[str, set[str]] = {}
    for v in sub.vertices:
        groups.setdefault(find(v), set()).add(v)
    out = []
    for vs in groups.values():
        es = {e for e in sub.edges if cx.edges[e].src in vs}
        fs = {f for f in sub.faces if cx.tail(cx.faces2[f][0]) in vs}
        out.append(Subcomplex(frozenset(vs), frozenset(es), frozenset(fs)))
    out.sort(key=lambda s: min(s.vertices))
    return out


# -- construction ---------------------------------------------------------


def subdivide_edge(cx: CellComplex, eid: str, k: int) -> CellComplex:
    """Replace edge ``eid`` by a path of ``k`` edges, rewriting every boundary."""
    if eid not in cx.edges:
        raise ComplexError(f"unknown edge {eid!r}")
    if k < 1:
        raise ComplexError("subdivision count must be at least 1")
    if k == 1:
        return CellComplex(cx.vertices, cx._edge_list, cx._face_list)
    e = cx.edges[eid]
    taken = set(cx.vertices) | set(cx.edges)
    mids = [_fresh(f"{eid}.v{i}", taken) for i in range(1, k)]
    parts = [_fresh(f"{eid}.{i}", taken) for i in range(k)]
    chain = [e.src, *mids, e.dst]
    new_edges = []
    for old in cx._edge_list:
        if old.id == eid:
            new_edges.extend(Edge(parts[i], chain[i], chain[i + 1]) for i in range(k))
        else:
            new_edges.append(old)
    forward = [(p, 1) for p in parts]
    backward = [(p, -1) for p in reversed(parts)]
    new_faces = []
    for fid, bd in cx._face_list:
        out: list[Step] = []
        for s in bd:
            if s[0] == eid:
                out.extend(forward if s[1] == 1 else backward)
            else:
                out.append(s)
        new_faces.append((fid, tuple(out)))
    return CellComplex([*cx.vertices, *mids], new_edges, new_faces)


def _fresh(name: str, taken: set[str]) -> str:
    cand, i = name, 0
    while cand in taken:
        i += 1
        cand = f"{name}~{i}"
    taken.add(cand)
    return cand


# -- JSON -----------------------------------------------------------------


def complex_to_json(cx: CellComplex) -> dict:
    return {
        "vertices": list(cx.vertices),
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in cx._edge_list],
        "faces": [
            {"id": fid, "boundary": [{"edge": s[0], "dir": s[1]} for s in bd]}
            for fid, bd in cx._face_list
        ],
    }


def complex_from_json(data: dict) -> CellComplex:
    try:
        return CellComplex(
            data["vertices"],
            [Edge(str(e["id"]), str(e["src"]), str(e["dst"])) for e in data["edges"]],
            [
                (str(f["id"]), [(str(s["edge"]), int(s["dir"])) for s in f["boundary"]])
                for f in data["faces"]
            ],
        )
    except (KeyError, TypeError) as exc:
        raise ComplexError(f"malformed complex JSON: {exc}") from exc


def dumps_complex(cx: CellComplex) -> str:
    return json.dumps(complex_to_json(cx), ensure_ascii=False, separators=(",", ":"))


def load_complex(path) -> CellComplex:
    with open(path, encoding="utf-8") as fh:
        return complex_from_json(json.load(fh))

