import os
from fractions import Fraction
from pathlib import Path

import pytest

import posrep

DATA = Path(os.environ.get("POSREP_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def surface(name):
    return posrep.Surface.load(str(DATA / "surfaces" / f"{name}.surf"))


def params(name):
    return (DATA / "params" / f"{name}.params").read_text()


def test_surface_counts():
    s = surface("torus")
    assert (s.euler_char, s.genus, len(s.triangles), len(s.pairings)) == (-1, 1, 2, 2)
    assert s.expected_triangle_count == len(s.triangles)
    assert surface("quad").polygon_mode


def test_build_extract_roundtrip():
    s, text = surface("torus"), params("torus_sl2")
    m = posrep.model_of(text)
    rep = posrep.build(m, s, text)
    assert rep["positive"]
    assert set(rep["rho"]) == set(s.pairings)
    for r in rep["rho"].values():
        assert r[0][0] * r[1][1] - r[0][1] * r[1][0] == 1
    assert posrep.extract(m, s, rep["rep_text"]) == text
    assert posrep.check_rep(m, s, rep["rep_text"]) == (True, "")


def test_random_roundtrip_sp():
    s, m = surface("genus2"), posrep.Model("sp:2")
    text = posrep.random_params(m, s, seed=3, positive=False)
    assert posrep.extract(m, s, posrep.build(m, s, text)["rep_text"]) == text


def test_sl2_turn_map_is_reciprocal():
    m = posrep.Model("sl:2")
    assert m.left_map([[1, Fraction(3, 7)], [0, 1]]) == [[1, Fraction(7, 3)], [0, 1]]
    assert m.is_positive_unipotent(m.u_theta())


def test_census_sp2_torus():
    hist = posrep.census(posrep.Model("sp:2"), surface("torus"), samples=300, seed=5)
    assert len(hist) == 4 and sum(hist.values()) == 300
    assert hist == posrep.census(posrep.Model("sp:2"), surface("torus"), samples=300, seed=5, threads=2)


def test_flip_and_retract():
    s, text = surface("torus"), params("torus_sl3")
    m = posrep.model_of(text)
    assert posrep.flip(m, s, text, "a")["outcome"] == "positive"
    half = posrep.retract(m, s, text, "1/2")
    assert posrep.build(m, s, half)["positive"]


def test_errors_carry_code_and_witness():
    s = surface("sphere3")
    m = posrep.Model("sp:2")
    with pytest.raises(posrep.PosrepError) as e:
        posrep.flip(m, s, params("sphere3_sp2"), "x")
    assert e.value.code == "NotFlippable" and e.value.witness == "x"
    with pytest.raises(posrep.PosrepError) as e:
        posrep.Model("gl:3")
    assert e.value.code == "ParseError"
