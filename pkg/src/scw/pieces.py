"""Pieces, piece-length, the C(n) and strict C(n) conditions, petals and opposite 1-cells.

A *lift* of a path into a 2-cell boundary is ``(face, vertex, direction)``: reading
the boundary cycle from boundary vertex ``vertex`` (vertex ``i`` is the tail of
boundary step ``i``) forwards (``+1``) or backwards (``-1``) reproduces the path.
Two lifts of the same nontrivial path determine a unique candidate map between
the two boundary circles; the path is a piece iff for some pair of lifts that map
does not commute with the attaching maps.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .complex import CellComplex, ComplexError, EdgePath, EdgeCycle, Step, check_path, inv

log = logging.getLogger(__name__)

UNBOUNDED = math.inf
"""Piece-length of a path that admits no decomposition into pieces."""

Lift = tuple[str, int, int]


@dataclass(frozen=True)
class PieceCertificate:
    path: EdgePath
    witnesses: tuple[Lift, Lift]

    def to_json(self) -> dict:
        return {
            "path": self.path.to_json(),
            "witnesses": [
                {"face": f, "position": i, "direction": d} for f, i, d in self.witnesses
            ],
        }


class PieceIndex:
    """Lift tables for one complex under one reversal policy."""

    def __init__(self, cx: CellComplex, reversible: bool = True):
        self.cx = cx
        self.reversible = reversible
        self.words = cx.faces2
        self.first: dict[Step, list[Lift]] = {}
        for fid, bd in cx.faces2.items():
            n = len(bd)
            for i in range(n):
                self.first.setdefault(bd[i], []).append((fid, i, 1))
                if reversible:
                    self.first.setdefault(inv(bd[(i - 1) % n]), []).append((fid, i, -1))
        self._iso = lru_cache(maxsize=None)(self._iso_uncached)
        self._piece = lru_cache(maxsize=None)(self._certificate)

    def read(self, lift: Lift, k: int) -> Step:
        fid, i, s = lift
        bd = self.words[fid]
        if s == 1:
            return bd[(i + k) % len(bd)]
        return inv(bd[(i - 1 - k) % len(bd)])

    def lifts(self, steps: Sequence[Step]) -> list[Lift]:
        if not steps:
            return []
        out = self.first.get(steps[0], [])
        for k in range(1, len(steps)):
            out = [l for l in out if self.read(l, k) == steps[k]]
            if not out:
                break
        return out

    def _iso_uncached(self, l1: Lift, l2: Lift) -> bool:
        """Does the circle map induced by ``l1 -> l2`` commute with the attaching maps?"""
        f1, i1, s1 = l1
        f2, i2, s2 = l2
        b1, b2 = self.words[f1], self.words[f2]
        n = len(b1)
        if len(b2) != n:
            return False
        if s1 == s2:
            t = i2 - i1
            return all(b2[(k + t) % n] == b1[k] for k in range(n))
        c = i1 + i2
        return all(inv(b2[(c - k - 1) % n]) == b1[k] for k in range(n))

    def witness(self, lifts: Sequence[Lift]) -> tuple[Lift, Lift] | None:
        for a in range(len(lifts)):
            for b in range(a + 1, len(lifts)):
                if not self._iso(lifts[a], lifts[b]):
                    return lifts[a], lifts[b]
        return None

    def _certificate(self, steps: tuple[Step, ...]) -> tuple[Lift, Lift] | None:
        return self.witness(self.lifts(steps))

    def is_piece(self, steps: Sequence[Step]) -> bool:
        return bool(steps) and self._piece(tuple(steps)) is not None

    def piece_table(self, steps: Sequence[Step]) -> list[list[bool]]:
        """``table[a][b]`` is True iff ``steps[a:b+1]`` is a piece."""
        n = len(steps)
        table = [[False] * n for _ in range(n)]
        for a in range(n):
            lifts = self.first.get(steps[a], [])
            for b in range(a, n):
                if b > a:
                    k = b - a
                    lifts = [l for l in lifts if self.read(l, k) == steps[b]]
                if not lifts:
                    break
                table[a][b] = self.witness(lifts) is not None
        return table

    def plength(self, steps: Sequence[Step]) -> float:
        """Minimal number of pieces concatenating to ``steps`` (interval DP)."""
        n = len(steps)
        if n == 0:
            return 0
        table = self.piece_table(steps)
        best = [0] + [UNBOUNDED] * n
        for b in range(1, n + 1):
            for a in range(b):
                if best[a] + 1 < best[b] and table[a][b - 1]:
                    best[b] = best[a] + 1
        return best[n]

    def petals_of(self, fid: str, lift: Lift, steps: Sequence[Step]) -> list[str]:
        """Other 2-cells witnessing that ``steps`` (lifted at ``lift`` in ``fid``) is a piece."""
        out = set()
        for other in self.lifts(steps):
            if other[0] != fid and not self._iso(lift, other):
                out.add(other[0])
        return sorted(out)


def piece_index(cx: CellComplex, reversible: bool = True) -> PieceIndex:
    key = ("piece_index", reversible)
    if key not in cx._cache:
        cx._cache[key] = PieceIndex(cx, reversible)
    return cx._cache[key]


def _steps(path: EdgePath | Sequence[Step]) -> tuple[Step, ...]:
    return tuple(path.steps if isinstance(path, EdgePath) else path)


def is_piece(cx: CellComplex, path: EdgePath, reversible: bool = True) -> PieceCertificate | None:
    steps = _steps(path)
    if not steps:
        raise ComplexError("pieces are nontrivial paths")
    check_path(cx, steps)
    w = piece_index(cx, reversible)._piece(steps)
    if w is None:
        return None
    p = path if isinstance(path, EdgePath) else EdgePath(steps, cx.tail(steps[0]))
    return PieceCertificate(p, w)


def piece_length_path(cx: CellComplex, path: EdgePath | Sequence[Step], reversible: bool = True) -> float:
    return piece_index(cx, reversible).plength(_steps(path))


def closed_paths(steps: Sequence[Step], reversible: bool = True) -> list[tuple[Step, ...]]:
    """All closed paths associated to a cycle: every basepoint, and both directions."""
    n = len(steps)
    out = [tuple(steps[i:]) + tuple(steps[:i]) for i in range(n)]
    if reversible:
        rev = [inv(s) for s in reversed(steps)]
        out += [tuple(rev[i:]) + tuple(rev[:i]) for i in range(n)]
    return out


def piece_length_cycle(cx: CellComplex, cycle: EdgeCycle | Sequence[Step], reversible: bool = True) -> float:
    steps = cycle.steps if isinstance(cycle, EdgeCycle) else tuple(cycle)
    idx = piece_index(cx, reversible)
    return min(idx.plength(p) for p in closed_paths(steps, reversible))


def face_plength(cx: CellComplex, fid: str, reversible: bool = True) -> float:
    key = ("face_plength", fid, reversible)
    if key not in cx._cache:
        cx._cache[key] = piece_length_cycle(cx, cx.boundary(fid), reversible)
    return cx._cache[key]


def check_cn(cx: CellComplex, n: int, faces=None, reversible: bool = True) -> list[dict]:
    """2-cells whose boundary cycle has piece-length below ``n``; empty iff C(n)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    out = []
    for fid in sorted(cx.faces2 if faces is None else faces):
        p = face_plength(cx, fid, reversible)
        if p < n:
            out.append({"face": fid, "plength": p})
    return out


def wrap_paths(cx: CellComplex, fid: str, extra: int = 1) -> list[tuple[int, int, tuple[Step, ...]]]:
    """Immersed boundary paths of length ``|boundary| + extra``: (start, direction, steps)."""
    bd = cx.boundary(fid)
    n = len(bd)
    out = []
    for i in range(n):
        out.append((i, 1, tuple(bd[(i + k) % n] for k in range(n + extra))))
        out.append((i, -1, tuple(inv(bd[(i - 1 - k) % n]) for k in range(n + extra))))
    return out


def check_strict_cn(cx: CellComplex, n: int, faces=None, reversible: bool = True) -> list[dict]:
    """Violations of strict C(n): boundary paths longer than the cycle with plength <= n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    idx = piece_index(cx, reversible)
    out = []
    for fid in sorted(cx.faces2 if faces is None else faces):
        for start, direction, steps in wrap_paths(cx, fid):
            p = idx.plength(steps)
            if p <= n:
                out.append(
                    {
                        "face": fid,
                        "start": start,
                        "direction": direction,
                        "plength": p,
                        "path": [list(s) for s in steps],
                    }
                )
    return out


@dataclass(frozen=True)
class PetalDecomposition:
    face: str
    cuts: tuple[int, ...]
    pieces: tuple[tuple[Step, ...], ...]
    petals: tuple[tuple[str, ...], ...]

    def to_json(self) -> dict:
        return {
            "face": self.face,
            "cuts": list(self.cuts),
            "pieces": [[list(s) for s in p] for p in self.pieces],
            "petals": [list(p) for p in self.petals],
        }


def petal_decompositions(cx: CellComplex, fid: str, parts: int = 6, reversible: bool = True) -> list[PetalDecomposition]:
    """Every decomposition of the boundary into ``parts`` pieces shared with other 2-cells."""
    bd = cx.boundary(fid)
    n = len(bd)
    idx = piece_index(cx, reversible)
    petal_cache: dict[tuple[int, int], list[str]] = {}

    def petals(a: int, length: int) -> list[str]:
        if (a, length) not in petal_cache:
            steps = tuple(bd[(a + k) % n] for k in range(length))
            petal_cache[a, length] = idx.petals_of(fid, (fid, a, 1), steps)
        return petal_cache[a, length]

    found: dict[frozenset, PetalDecomposition] = {}

    def record(starts: list[int]):
        key = frozenset(starts)
        if key in found:
            return
        rot = sorted(starts)
        lengths = [((rot[(j + 1) % parts] - rot[j]) % n) or n for j in range(parts)]
        pieces = tuple(tuple(bd[(rot[j] + k) % n] for k in range(lengths[j])) for j in range(parts))
        found[key] = PetalDecomposition(
            fid, tuple(rot), pieces, tuple(tuple(petals(rot[j], lengths[j])) for j in range(parts))
        )

    def extend(c0: int, starts: list[int], used: int):
        if len(starts) == parts:
            if used == n:
                record(starts)
            return
        a = (c0 + used) % n
        left = parts - len(starts) - 1
        for length in range(1, n - used - left + 1):
            if left == 0 and used + length != n:
                continue
            if not petals(a, length):
                arc = tuple(bd[(a + k) % n] for k in range(length))
                if all(l[0] == fid for l in idx.lifts(arc)):
                    break
                continue
            extend(c0, starts + [a], used + length)

    if n >= parts:
        for c0 in range(n):
            extend(c0, [], 0)

    return sorted(found.values(), key=lambda d: d.cuts)


def _arc(bd: Sequence[Step], a: int, b: int) -> tuple[Step, ...]:
    """Forward boundary path from step ``a`` through step ``b`` inclusive (cyclically)."""
    n = len(bd)
    length = (b - a) % n + 1
    return tuple(bd[(a + k) % n] for k in range(length))


def opposite_pairs(cx: CellComplex, fid: str, threshold: int = 3, reversible: bool = True) -> list[tuple[str, str]]:
    """Pairs of distinct 1-cells of a 2-cell every connecting boundary path of which has plength > threshold.

    Only the two minimal arcs joining the occurrences need checking: any longer path
    contains one of them, and a decomposition of a longer path restricts to one of
    at most the same number of pieces on the sub-arc (pieces are closed under subpaths).
    """
    key = ("opposite", fid, threshold, reversible)
    if key in cx._cache:
        return cx._cache[key]
    bd = cx.boundary(fid)
    idx = piece_index(cx, reversible)
    positions: dict[str, list[int]] = {}
    for i, (e, _) in enumerate(bd):
        positions.setdefault(e, []).append(i)
    out = []
    ids = sorted(positions)
    for x in range(len(ids)):
        for y in range(x + 1, len(ids)):
            ok = True
            for p in positions[ids[x]]:
                for q in positions[ids[y]]:
                    for arc in (_arc(bd, p, q), _arc(bd, q, p)):
                        if idx.plength(arc) <= threshold:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if ok:
                out.append((ids[x], ids[y]))
    cx._cache[key] = out
    return out


def opposite_in(cx: CellComplex, fid: str, e1: str, e2: str, reversible: bool = True) -> bool:
    a, b = sorted((e1, e2))
    return (a, b) in opposite_pairs(cx, fid, reversible=reversible)


def opposite_inconsistencies(cx: CellComplex, reversible: bool = True) -> list[dict]:
    """Pairs of 1-cells opposite in one 2-cell but not in another containing both."""
    out = []
    for e1 in sorted(cx.edges):
        for e2 in sorted(cx.edges):
            if e2 <= e1:
                continue
            common = sorted(set(cx.edge_faces.get(e1, ())) & set(cx.edge_faces.get(e2, ())))
            verdicts = {f: opposite_in(cx, f, e1, e2, reversible) for f in common}
            if len(set(verdicts.values())) > 1:
                out.append({"edges": [e1, e2], "verdicts": verdicts})
    return out


def subpath_closure_violations(cx: CellComplex, reversible: bool = True) -> list[dict]:
    """Boundary paths that are pieces but have a nontrivial subpath that is not."""
    idx = piece_index(cx, reversible)
    out = []
    for fid, bd in sorted(cx.faces2.items()):
        n = len(bd)
        for a in range(n):
            for length in range(2, n + 1):
                arc = tuple(bd[(a + k) % n] for k in range(length))
                if not idx.is_piece(arc):
                    break
                for i in range(length):
                    for j in range(i + 1, length + 1):
                        if (i, j) != (0, length) and not idx.is_piece(arc[i:j]):
                            out.append({"face": fid, "path": arc, "subpath": arc[i:j]})
    return out
