import pytest

from scw.complex import ComplexError, OversizeError, components, validate
from scw.generators import (
    FAMILIES,
    gen_band,
    gen_blowup,
    gen_double_hex,
    gen_hex,
    gen_petal,
    gen_thick_square,
    gen_tri,
    hex_ball,
    hex_distance,
)


def euler(cx):
    return len(cx.vertices) - len(cx.edges) + len(cx.faces2)


def counts(fx):
    cx = fx.complex
    return len(cx.vertices), len(cx.edges), len(cx.faces2)


@pytest.mark.parametrize("r,cells", [(0, 1), (1, 7), (2, 19), (3, 37)])
def test_hex_sizes(r, cells):
    assert len(gen_hex(r).complex.faces2) == cells
    assert len(hex_ball(r)) == cells


def test_hex0_is_one_hexagon():
    assert counts(gen_hex(0)) == (6, 6, 1)


def test_fixture_sizes():
    assert counts(gen_hex(3)) == (96, 132, 37)
    assert counts(gen_hex(2, 2)) == (126, 144, 19)
    assert counts(gen_band(2, 4)) == (28, 35, 8)
    assert counts(gen_tri(2)) == (19, 42, 24)
    assert counts(gen_petal(3)) == (6, 12, 7)
    assert counts(gen_thick_square()) == (24, 40, 17)
    assert counts(gen_blowup(2)) == (192, 304, 116)
    assert counts(gen_double_hex(3)) == (186, 258, 73)
    assert [len(gen_blowup(m).complex.face_ids) for m in (1, 2, 3)] == [50, 116, 182]


def test_all_fixtures_validate():
    fixtures = [gen_hex(3), gen_hex(2, 2), gen_band(1, 5), gen_tri(2), gen_petal(4), gen_thick_square(),
                gen_blowup(1), gen_blowup(2), gen_double_hex(3)]
    for fx in fixtures:
        assert validate(fx.complex) == []
        for sub in fx.marked.values():
            assert sub.is_closed(fx.complex)


def test_euler_characteristics():
    for fx in (gen_hex(3), gen_band(2, 3), gen_tri(2), gen_petal(5), gen_thick_square(), gen_double_hex(3)):
        assert euler(fx.complex) == 1
    # copies of the thick square share boundary segments, which closes up extra spheres
    assert [euler(gen_blowup(m).complex) for m in (1, 2, 3)] == [2, 4, 6]


def test_band_is_a_ladder_of_hexagons():
    cx = gen_band(1, 5).complex
    assert len(cx.faces2) == 5


def test_petal_marked_pieces_meet_in_two_points():
    for n in (3, 4, 5):
        fx = gen_petal(n)
        both = fx.marked["Y1"] & fx.marked["Y2"]
        assert not both.edges and len(both.vertices) == 2
        assert len(components(fx.complex, both)) == 2


def test_thick_square_marks():
    fx = gen_thick_square()
    assert sorted(fx.marked["B"].faces) == [f"T{i}" for i in range(8)]


def test_subdivision_profiles():
    plain = gen_hex(1).complex
    sides = sorted(e for e in plain.edges)
    fx = gen_hex(1, {sides[0]: 3})
    assert len(fx.complex.edges) == len(plain.edges) + 2
    assert len(gen_hex(1, lambda hs: 2).complex.edges) == 2 * len(plain.edges)
    with pytest.raises(ComplexError):
        gen_hex(1, 0)


def test_hex_distance():
    assert hex_distance(0, 0) == 0
    assert hex_distance(2, -1) == 2
    assert hex_distance(-1, -1) == 2


def test_size_cap(monkeypatch):
    monkeypatch.setenv("SCW_MAX_CELLS", "50")
    with pytest.raises(OversizeError):
        gen_hex(3)


def test_families_registry():
    assert {"hex", "band", "petal", "thicksquare", "blowup"} <= set(FAMILIES)


def test_generators_are_deterministic():
    assert gen_blowup(2).complex.digest() == gen_blowup(2).complex.digest()
