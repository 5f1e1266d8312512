import json
from fractions import Fraction

import pytest

import wiretapkit as wk

SFEXT = {"kind": "sfext", "graph": {"family": "cycle", "size": 4}, "n": 8, "k": 5}


def test_field_inverse():
    f = wk.Field(16)
    assert all(f.mul(a, f.inv(a)) == 1 for a in range(1, 16))
    with pytest.raises(wk.WtkError):
        wk.Field(6)


def test_rank_over_gf3():
    assert wk.rank(3, [[1, 2], [2, 1]]) == 1
    assert wk.rank(2, [[1, 0], [0, 1]]) == 2


def test_distances_are_exact():
    u = wk.Dist.uniform(2, 2)
    p = wk.Dist(2, 2, {0: "1/2", 1: "1/2"})
    assert wk.statistical_distance(u, p) == Fraction(1, 2)
    assert p.distance_from_uniform() == Fraction(1, 2)
    assert p.min_entropy() == pytest.approx(1.0)


def test_cycle_spectrum():
    g = wk.Graph("cycle", 5)
    assert g.degree == 2
    assert g.second_eigenvalue() == pytest.approx(0.8090169943749475, abs=1e-6)
    walk = [0, 1, 1, 0]
    assert g.walk_inverse(g.walk(3, walk), walk) == 3


def test_walk_extractor_inverts():
    ext = wk.WalkExtractor(wk.Graph("cycle", 4), n=8, k=5)
    x = [1, 0]
    for coin in range(ext.coins):
        assert ext.extract(ext.invert(x, coin)) == x
    assert ext.measured_error() <= ext.bound


def test_toeplitz_inverts():
    e = wk.LinearExtractor.toeplitz(6, 2)
    seed, x = e.invert(0b10, 5)
    assert e.extract(x, seed) == 0b10


def test_one_time_pad_is_perfect():
    rep = wk.verify(wk.one_time_pad(), t=1)
    assert rep["gamma"] == "0/1" and rep["zero_leakage"]


def test_protocol_round_trip_and_leakage():
    p = wk.protocol_from_config(SFEXT)
    assert (p.m, p.n) == (2, 8)
    y = p.encode([1, 1], 17)
    assert p.decode(y) == [1, 1]
    ident = wk.protocol_from_config(json.dumps({"kind": "identity", "n": 2, "t": 1}))
    assert wk.verify(ident, t=1)["gamma"] == "1/1"


def test_cap_is_enforced():
    with pytest.raises(wk.WtkError) as info:
        wk.verify(wk.protocol_from_config(SFEXT), t=3, cap=64)
    assert info.value.code == "EnumerationCapExceeded"


def test_codes_correct_errors():
    c = wk.Code.hamming74()
    word = c.encode([1, 0, 1, 1])
    word[5] ^= 1
    assert c.decode(word) == [1, 0, 1, 1]
    rs = wk.Code.reed_solomon(16, 10, 6)
    assert (rs.N, rs.K, rs.d_min) == (10, 6, 5)


def test_butterfly_min_cut():
    net = wk.Network("butterfly")
    assert [net.min_cut(r) for r in net.receivers] == [2, 2]


def test_cli_in_process():
    code, out, _ = wk.run_cli(["spectra", "--help"])
    assert code == 0
    assert b"spectra" in out
