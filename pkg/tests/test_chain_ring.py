import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainsd.chain_ring import (
    PRESET_SPECS,
    ChainRing,
    ChainRingSpec,
    InvalidRingSpec,
    LevelMismatch,
    OddKappaError,
    compute_eta,
    pi_i,
    preset,
    r_add,
    r_mul,
    reduce_level,
    ring_new,
    teich_expansion,
    valuation,
)

SMALL = ["R31", "R41", "R42", "R51", "R61", "F2u2", "F4u2"]


@pytest.mark.parametrize(
    "name,e,kappa",
    [("R42", 4, 2), ("R51", 5, 4), ("R71", 7, 4), ("R41", 4, 2), ("R31", 3, 2), ("R52", 5, 2), ("F2u2", 2, 2)],
)
def test_structure_constants(name, e, kappa):
    R = preset(name)
    assert (R.e, R.kappa) == (e, kappa)
    assert R.e == R.kappa * (R.s_exp - 1) + R.t
    assert (R.s, R.kappa1, R.theta) == (e // 2, kappa // 2, e % 2)
    assert R.size == 2 ** (R.m * e)


def test_spec_errors():
    with pytest.raises(OddKappaError):
        ring_new({"s_exp": 2, "m": 1, "g": [[1], [0], [0]], "t": 1})
    with pytest.raises(InvalidRingSpec, match="unit"):
        ring_new({"s_exp": 2, "m": 1, "g": [[2], [0]], "t": 2})
    with pytest.raises(InvalidRingSpec):
        ring_new({"s_exp": 2, "m": 1, "g": [[1], [0]], "t": 3})
    with pytest.raises(InvalidRingSpec):
        ring_new({"s_exp": 1, "m": 1, "g": [[1], [0]], "t": 1})
    with pytest.raises(InvalidRingSpec):
        ChainRingSpec.from_json('{"m": 1}')


def test_spec_json_roundtrip(tmp_path):
    for name in PRESET_SPECS:
        R = preset(name)
        p = tmp_path / f"{name}.json"
        p.write_text(__import__("json").dumps(R.to_json()))
        assert ChainRing.from_json(p) == R
        assert ChainRing.from_json(p.read_text()) == R


def test_relation_u_squared_in_r31():
    R = preset("R31")
    u = R.u()
    assert u * u == R.element(2)
    assert compute_eta(R)[0].residue == 1
    assert R.eta == (1,)


def test_two_in_r52():
    R = preset("R52")
    two = R.element(2)
    assert two.teich_expansion() == (0, 0, 1, 0, 1)
    assert pi_i(two, 2).residue == 1
    assert R.eta == (1, 0, 1)
    assert valuation(two) == R.kappa


def test_characteristic_two():
    for name in ("F2u2", "F4u2"):
        R = preset(name)
        assert R.element(2).is_zero()
        assert R.eta is None
        with pytest.raises(InvalidRingSpec):
            compute_eta(R)


@pytest.mark.parametrize("name", SMALL + ["R52", "R71"])
def test_nilpotency_and_eta(name):
    R = preset(name)
    u = R.u()
    assert not (u ** (R.e - 1)).is_zero()
    assert (u**R.e).is_zero()
    if R.eta is not None:
        assert R.eta[0] != 0
        assert valuation(R.element(2)) == R.kappa
    for j in range(R.e):
        exp = (u**j).teich_expansion()
        assert [pi_i(u**j, i).residue for i in range(R.e)] == [int(i == j) for i in range(R.e)] == list(exp)


@pytest.mark.parametrize("name", SMALL)
def test_exhaustive_normal_forms(name):
    """Distinct normal forms, Teichmuller round-trip, unit criterion, ideal sizes."""
    R = preset(name)
    seen = set()
    ideal = [0] * (R.e + 1)
    for idx in range(R.size):
        a = R.from_index(idx)
        seen.add(a.nf)
        assert a.index == idx
        assert R.from_digits(a.teich_expansion()) == a
        assert a.is_unit() == (pi_i(a, 0).residue != 0)
        if a.is_unit():
            assert a * a.inverse() == R.one()
        v = valuation(a)
        for i in range(v + 1):
            ideal[i] += 1
    assert len(seen) == R.size
    assert ideal == [2 ** (R.m * (R.e - i)) for i in range(R.e + 1)]
    assert R.info()["ideal_sizes"] == ideal


@pytest.mark.parametrize("name", ["R41", "R42", "R51", "F4u2"])
def test_axioms_on_tables(name):
    """Ring axioms over the whole ring through the digit-index tables."""
    R = preset(name)
    T = R.tables
    import numpy as np

    add, mul = T.add.astype(np.int64), T.mul.astype(np.int64)
    N = T.N
    assert (add == add.T).all() and (mul == mul.T).all()
    assert (add[:, 0] == np.arange(N)).all() and (mul[:, 1] == np.arange(N)).all()
    assert (add[np.arange(N), T.neg] == 0).all()
    rng = np.random.default_rng(0)
    a, b, c = rng.integers(0, N, size=(3, 4000))
    assert (add[add[a, b], c] == add[a, add[b, c]]).all()
    assert (mul[mul[a, b], c] == mul[a, mul[b, c]]).all()
    assert (mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]).all()
    units = np.arange(N) % R.q != 0
    assert ((T.inv >= 0) == units).all()


def test_element_ops_agree_with_tables():
    R = preset("R42")
    T = R.tables
    rnd = random.Random(1)
    for _ in range(300):
        i, j = rnd.randrange(R.size), rnd.randrange(R.size)
        a, b = R.from_index(i), R.from_index(j)
        assert r_add(a, b).index == T.add[i, j]
        assert r_mul(a, b).index == T.mul[i, j]


@given(st.integers(0, 4**5 - 1), st.integers(1, 5))
def test_truncation_commutes_with_expansion(idx, level):
    R = preset("R52")
    a = R.from_index(idx)
    b = reduce_level(a, level)
    assert b.teich_expansion() == a.teich_expansion()[:level]
    assert reduce_level(a, 5) == a
    assert [t.residue for t in teich_expansion(b)] == list(b.teich_expansion())


@given(st.integers(0, 4**5 - 1), st.integers(0, 4))
def test_u_multiple_truncates_to_zero(idx, k):
    R = preset("R52")
    x = R.from_index(idx)
    assert reduce_level((R.u() ** k) * x, k).is_zero() if k else True
    if x.is_unit():
        assert valuation(R.u() * x) == 1 + valuation(x)


def test_level_mismatch():
    R = preset("R41")
    with pytest.raises(LevelMismatch):
        R.one(2) + R.one(3)
    with pytest.raises(LevelMismatch):
        R.one(2).reduce_level(3)


def test_parse_and_format():
    R = preset("R52")
    for idx in (0, 1, 5, 77, 1023):
        a = R.from_index(idx)
        assert R.element(repr(a)) == a
