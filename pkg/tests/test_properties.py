import json

import networkx as nx
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from oracles import _readings, brute_plength
from scw.complex import complex_from_json, dumps_complex
from scw.diagrams import DiagramError, LADDER, THREE_OR_MORE, diagram_from_faces, classify_diagram
from scw.generators import gen_band, gen_blowup, gen_hex, gen_petal, gen_thick_square, hex_neighbours
from scw.metrics import face_distance, hull_faces, is_face_convex, hull
from scw.nerve import nerve
from scw.pieces import check_cn, check_strict_cn, piece_index

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])

HEX3 = gen_hex(3).complex
BLOWUP1 = gen_blowup(1).complex
SQUARE = gen_thick_square().complex
FIXTURES = [HEX3, BLOWUP1, SQUARE]


def faces_of(cx):
    return st.sampled_from(sorted(cx.face_ids))


@SETTINGS
@given(st.data())
def test_face_distance_is_a_metric(data):
    cx = data.draw(st.sampled_from(FIXTURES))
    a, b, c = (data.draw(faces_of(cx)) for _ in range(3))
    dab, dbc, dac = face_distance(cx, a, b), face_distance(cx, b, c), face_distance(cx, a, c)
    assert dab == face_distance(cx, b, a)
    assert (dab == 0) == (a == b)
    assert dac <= dab + dbc


@SETTINGS
@given(st.data())
def test_face_distance_equals_nerve_distance(data):
    cx = data.draw(st.sampled_from(FIXTURES))
    a, b = data.draw(faces_of(cx)), data.draw(faces_of(cx))
    assert face_distance(cx, a, b) == nx.shortest_path_length(nerve(cx), a, b)


@SETTINGS
@given(st.data())
def test_hull_is_idempotent_monotone_and_convex(data):
    cx = data.draw(st.sampled_from([HEX3, SQUARE]))
    seeds = data.draw(st.lists(faces_of(cx), min_size=1, max_size=3, unique=True))
    more = seeds + [data.draw(faces_of(cx))]
    h = hull_faces(cx, seeds)
    assert set(seeds) <= h
    assert hull_faces(cx, h) == h
    assert h <= hull_faces(cx, more)
    assert is_face_convex(cx, hull(cx, seeds))


FAMILY = st.one_of(
    st.builds(lambda r, k: gen_hex(r, k).complex, st.integers(0, 2), st.integers(1, 2)),
    st.builds(lambda n: gen_petal(n).complex, st.integers(2, 5)),
    st.builds(lambda w, l: gen_band(w, l).complex, st.integers(1, 2), st.integers(1, 4)),
    st.just(SQUARE),
)


@settings(max_examples=25, deadline=None)
@given(FAMILY, st.integers(3, 8))
def test_strict_implies_plain(cx, n):
    if not check_strict_cn(cx, n):
        assert not check_cn(cx, n)


@settings(max_examples=40, deadline=None)
@given(FAMILY, st.data())
def test_plength_matches_oracle_on_random_subpaths(cx, data):
    fid = data.draw(st.sampled_from(sorted(cx.faces2)))
    bd = cx.faces2[fid]
    start = data.draw(st.integers(0, len(bd) - 1))
    length = data.draw(st.integers(1, min(len(bd), 10)))
    path = [bd[(start + k) % len(bd)] for k in range(length)]
    assert piece_index(cx).plength(path) == brute_plength(cx, path, _readings(cx))


@settings(max_examples=20, deadline=None)
@given(FAMILY)
def test_json_round_trip_and_digest(cx):
    text = dumps_complex(cx)
    again = complex_from_json(json.loads(text))
    assert dumps_complex(again) == text
    assert again.digest() == cx.digest()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2), st.dictionaries(st.integers(0, 40), st.integers(1, 3), max_size=6))
def test_subdivision_does_not_change_the_nerve(r, picks):
    plain = gen_hex(r).complex
    sides = sorted(plain.edges)
    profile = {sides[i % len(sides)]: k for i, k in picks.items()}
    sub = gen_hex(r, profile).complex
    assert nx.utils.graphs_equal(nerve(plain), nerve(sub))


@st.composite
def hex_blobs(draw):
    """Random connected sets of hexagons grown inside HEX(3)."""
    cells = {(0, 0)}
    for _ in range(draw(st.integers(0, 14))):
        frontier = sorted({n for c in cells for n in hex_neighbours(*c) if n not in cells and max(abs(n[0]), abs(n[1]), abs(n[0] + n[1])) <= 3})
        if not frontier:
            break
        cells.add(draw(st.sampled_from(frontier)))
    return sorted(f"h[{a},{b}]" for a, b in cells)


@settings(max_examples=80, deadline=None)
@given(hex_blobs())
def test_classification_never_violated_on_hexagon_discs(faces):
    try:
        d = diagram_from_faces(HEX3, faces)
    except DiagramError:
        return  # not a disc (a hole or a pinch point)
    if len(d.complex.vertices) - len(d.complex.edges) + len(d.complex.faces2) != 1:
        return
    assert classify_diagram(d, HEX3).verdict in (THREE_OR_MORE, LADDER)
