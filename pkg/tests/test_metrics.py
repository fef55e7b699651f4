import itertools
import math

import numpy as np
import pytest

from oracles import brute_hull, floyd_warshall, shortest_by_deepening
from scw.complex import CellComplex, ComplexError, Subcomplex
from scw.generators import gen_blowup, gen_petal, hex_ball, hex_face_id
from scw.metrics import (
    NotAFaceError,
    check_no_missing,
    coarse_intersection_diameter,
    diameter,
    exists_trace,
    face_distance,
    face_graph,
    hull,
    hull_faces,
    hull_spread,
    interval,
    is_face_convex,
    is_geodesic,
    is_k_quasiconvex,
    quasiconvexity_witness,
)


def row(a_values, b=0):
    return [hex_face_id(a, b) for a in a_values]


def test_basic_distances(hex2, blowup2):
    cx = hex2.complex
    assert face_distance(cx, "h[0,0]", "h[1,0]") == 1
    assert face_distance(cx, "h[0,0]", "h[0,0]") == 0
    assert face_distance(blowup2.complex, "V[0,0]", "V[0,1]") == 4


def test_non_isolated_edge_is_not_a_face(hex2):
    with pytest.raises(NotAFaceError, match="not a face"):
        face_distance(hex2.complex, "s[0,1|1,0]", "h[0,0]")


def test_disconnected_distance_is_none():
    cx = CellComplex(["a", "b", "c", "d"], [("x", "a", "b"), ("y", "c", "d")], {})
    assert face_distance(cx, "x", "y") is None
    assert diameter(cx, ["x", "y"]) == math.inf
    assert diameter(cx, []) is None


def test_distances_agree_with_floyd_warshall(hex3, blowup2, square):
    for fx in (hex3, blowup2, square):
        cx = fx.complex
        ids, d = floyd_warshall(cx)
        fg = face_graph(cx)
        for i, f in enumerate(ids):
            got = fg.row(fg.index[f])[[fg.index[g] for g in ids]]
            assert np.array_equal(np.where(got < 0, np.inf, got), d[i])


def test_intervals(hex2, hex3):
    cx = hex2.complex
    assert interval(cx, "h[0,0]", "h[0,0]").members == {"h[0,0]"}
    assert interval(cx, "h[0,0]", "h[1,0]").members == {"h[0,0]", "h[1,0]"}
    # a band chain at distance 3 is the whole interval
    iv = interval(hex3.complex, "h[-1,0]", "h[2,0]")
    assert iv.distance == 3
    assert iv.members == set(row(range(-1, 3)))
    assert shortest_by_deepening(hex3.complex, "h[-1,0]", "h[2,0]", 4) == 3


def test_interval_members_lie_on_geodesics(hex2):
    # every member F of I(R, R') has a geodesic through it: d(R,F) and d(F,R') are realised
    cx = hex2.complex
    for a, b in [("h[-2,0]", "h[2,0]"), ("h[0,-2]", "h[1,1]")]:
        iv = interval(cx, a, b)
        for f in iv.members:
            assert shortest_by_deepening(cx, a, f, 4) + shortest_by_deepening(cx, f, b, 4) == iv.distance


def test_convexity_examples(hex2, hex3):
    cx = hex3.complex
    assert is_face_convex(cx, Subcomplex.closure(cx, ["h[0,0]"]))
    assert is_face_convex(cx, Subcomplex.closure(cx, row(range(-3, 4))))
    h2 = hex2.complex
    assert not is_face_convex(h2, Subcomplex.closure(h2, ["h[-2,0]", "h[2,0]"]))


def test_hull_examples(hex3, square, blowup2):
    cx = hex3.complex
    assert hull_faces(cx, ["h[0,0]"]) == {"h[0,0]"}
    sq = square.complex
    assert len(sq.faces2) == 17
    assert hull_faces(sq, square.marked["B"].faces) == set(sq.face_ids)
    bx = blowup2.complex
    h = hull_faces(bx, ["V[0,0]", "V[0,1]"])
    assert blowup2.marked["Xprime"].faces <= h
    assert blowup2.marked["central"].faces <= h


@pytest.mark.parametrize("seeds", [["h[0,0]", "h[2,-1]"], ["h[-2,0]", "h[1,1]", "h[0,-3]"], ["h[3,0]", "h[-3,0]"]])
def test_hull_matches_brute_fixed_point(hex3, seeds):
    assert hull_faces(hex3.complex, seeds) == brute_hull(hex3.complex, seeds)


def test_hull_matches_brute_on_blowup():
    bx = gen_blowup(1).complex
    assert hull_faces(bx, ["V[0,0]", "V[0,1]"]) == brute_hull(bx, ["V[0,0]", "V[0,1]"])


def test_hull_subcomplex_is_convex(hex3):
    h = hull(hex3.complex, ["h[-2,0]", "h[1,1]"])
    assert is_face_convex(hex3.complex, h)


def test_hull_spread_grows_on_blowups():
    spreads = []
    for m in (1, 2, 3):
        cx = gen_blowup(m).complex
        seeds = ["V[0,0]", "V[0,1]"]
        spreads.append(hull_spread(cx, Subcomplex.closure(cx, seeds), hull_faces(cx, seeds)))
    assert spreads == [2, 4, 6]


def test_quasiconvexity(hex3, square):
    cx = hex3.complex
    whole = Subcomplex.closure(cx, cx.face_ids)
    assert is_k_quasiconvex(cx, whole, 0)
    assert is_k_quasiconvex(cx, Subcomplex.closure(cx, ["h[3,0]"]), 0, endpoints="inside")
    sq, b = square.complex, square.marked["B"]
    assert quasiconvexity_witness(sq, b, 1) == ("P0", "P2", "O")
    assert is_k_quasiconvex(sq, b, 2)
    assert not is_k_quasiconvex(sq, b, 1, endpoints="inside")
    with pytest.raises(ValueError):
        is_k_quasiconvex(sq, b, -1)


def test_thick_square_subcomplex_is_isometric(square):
    sq = square.complex
    tri = sorted(square.marked["B"].faces)
    only_b = CellComplex(
        sorted(square.marked["B"].vertices),
        [sq.edges[e] for e in sorted(square.marked["B"].edges)],
        {f: sq.faces2[f] for f in tri},
    )
    for a, b in itertools.combinations(tri, 2):
        assert face_distance(sq, a, b) == face_distance(only_b, a, b)
    assert face_distance(sq, "T0", "T4") == 4


def test_traces(hex3):
    cx = hex3.complex
    band = Subcomplex.closure(cx, row(range(-3, 4)))
    p = exists_trace(cx, band, row(range(-1, 3)))
    assert p is not None and len(p.steps) == 4
    assert all(s[0] in band.edges for s in p.steps)
    trivial = exists_trace(cx, band, ["h[0,0]"])
    assert trivial.steps == () and trivial.start in cx.face_vertices["h[0,0]"]
    gap = Subcomplex.closure(cx, ["h[0,0]", "h[2,0]"])
    assert exists_trace(cx, gap, row(range(0, 3))) is None
    with pytest.raises(ComplexError):
        exists_trace(cx, band, ["h[0,0]", "h[2,0]"])
    assert is_geodesic(cx, row(range(0, 3)))


def test_no_missing_checks(hex3, doublehex):
    cx = hex3.complex
    band = Subcomplex.closure(cx, row(range(-3, 4)))
    assert check_no_missing(cx, band, "complements", 3) == []
    assert check_no_missing(doublehex.complex, doublehex.marked["Y1"], "complements", 2) == []
    for n in (3, 4, 5):
        fx = gen_petal(n)
        assert check_no_missing(fx.complex, fx.marked["Y1"], "shells", n - 1) == []
    # a hexagon ring misses its centre and each outer cell touching two ring cells
    ring = Subcomplex.closure(cx, [hex_face_id(a, b) for a, b in hex_ball(1) if (a, b) != (0, 0)])
    missing = {r["face"] for r in check_no_missing(cx, ring, "complements", 2)}
    touching_two = {hex_face_id(2 * a, 2 * b) for a, b in [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]}
    assert missing == {"h[0,0]"} | {hex_face_id(a + c, b + d) for (a, b), (c, d) in zip(
        [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)],
        [(0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0)],
    )}
    assert not touching_two & missing


def test_coarse_intersection(hex3, doublehex):
    cx = hex3.complex
    patch = Subcomplex.closure(cx, [hex_face_id(a, b) for a, b in hex_ball(2)])
    assert coarse_intersection_diameter(cx, patch, patch, 0) == 4
    a, b = Subcomplex.closure(cx, ["h[3,0]"]), Subcomplex.closure(cx, ["h[-3,0]"])
    assert coarse_intersection_diameter(cx, a, b, 1) is None
    y1, y2 = doublehex.marked["Y1"], doublehex.marked["Y2"]
    assert [coarse_intersection_diameter(doublehex.complex, y1, y2, r) for r in (0, 1, 2)] == [0, 2, 4]
