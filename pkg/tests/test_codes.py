import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainsd.chain_ring import preset
from chainsd.codes import (
    CodeChain,
    LinearCodeR,
    LinearCodeT,
    bform,
    block_presentation,
    check_chain_conditions,
    dual,
    is_self_dual,
    is_self_orthogonal,
    property_P_conditions,
    satisfies_property_P,
    torsion,
    type_feasible,
)
from chainsd.oracle import brute_force_closure, codeword_set

R52 = preset("R52")
Q = R52.q
ZETA, ZETA2 = 2, 3  # residue encodings of z and z^2 in GF(4)


def random_code(ring, level, n, rnd, k=None):
    k = rnd.randint(0, n) if k is None else k
    return LinearCodeR(ring, level, n, [[rnd.randrange(ring.q**level) for _ in range(n)] for _ in range(k)])


def test_torsion_examples():
    C = LinearCodeR(R52, 5, 3, [(1, 1, Q + Q**2)])
    assert torsion(C, 1) == LinearCodeT.span(R52.field, [(1, 1, 0)], 3)
    Z = LinearCodeR.zero(R52, 5, 3)
    assert all(torsion(Z, i).dim == 0 for i in range(1, 6))


def test_self_orthogonality_examples():
    assert not is_self_orthogonal(LinearCodeR(R52, 5, 3, [(1, 1, 0)]))
    assert is_self_orthogonal(LinearCodeR.zero(R52, 5, 3))
    for a2, b2 in [(0, 0), (1, 0), (ZETA, 1), (ZETA2, 1)]:
        for a3, b3, a4, b4 in product(range(4), repeat=4):
            row = (1, 1 + a2 * Q**2 + a3 * Q**3 + a4 * Q**4, Q + b2 * Q**2 + b3 * Q**3 + b4 * Q**4)
            assert is_self_orthogonal(LinearCodeR(R52, 5, 3, [row]))


def test_property_P_examples():
    for a2, b2 in [(0, 0), (1, 0), (ZETA, 1), (ZETA2, 1)]:
        C3 = LinearCodeR(R52, 3, 3, [(1, 1 + a2 * Q**2, Q + b2 * Q**2)])
        assert satisfies_property_P(C3, R52)
    assert not satisfies_property_P(LinearCodeR(R52, 3, 3, [(1, 1, 0)]), R52)
    assert satisfies_property_P(LinearCodeR.zero(R52, 3, 3), R52)
    good = {(a1, b1, a2, b2) for a1, b1, a2, b2 in product(range(4), repeat=4) if satisfies_property_P(LinearCodeR(R52, 3, 3, [(1, 1 + a1 * Q + a2 * Q * Q, b1 * Q + b2 * Q * Q)]), R52)}
    assert good == {(0, 1, a2, b2) for a2, b2 in [(0, 0), (1, 0), (ZETA, 1), (ZETA2, 1)]}


def test_property_P_rejects_bad_level():
    with pytest.raises(ValueError):
        property_P_conditions(R52, 4)


@pytest.mark.parametrize("name,n", [("R41", 2), ("R31", 2), ("F4u2", 2), ("F2u2", 3)])
def test_code_invariants_random(name, n):
    R = preset(name)
    rnd = random.Random(11)
    for _ in range(30):
        C = random_code(R, R.e, n, rnd)
        words = codeword_set(C)
        assert words == brute_force_closure(R, R.e, C.generators, n)
        assert len(words) == C.size == 2 ** (R.m * sum((R.e - i) * lam for i, lam in enumerate(C.type)))
        tors = C.torsion_codes()
        assert all(a <= b for a, b in zip(tors, tors[1:]))
        assert [t.dim for t in tors] == list(C.Lambda)
        assert C.size == 2 ** (R.m * sum(t.dim for t in tors))
        D = dual(C)
        dw = codeword_set(D)
        assert len(words) * len(dw) == R.size**n
        ar = __import__("chainsd.linalg", fromlist=["arith"]).arith(R)
        assert all(ar.dot(c, d, R.e) == 0 for c in C.generators for d in D.generators)
        lam = list(C.type) + [n - sum(C.type)]
        assert D.type == (lam[R.e],) + tuple(reversed(lam[1 : R.e]))
        assert is_self_dual(C) == (words == dw)


@given(st.integers(0, 10**6))
def test_torsion_by_definition(seed):
    """Tor_i = {c mod u : u^(i-1) c in C}, straight from the codeword set."""
    R = preset("R41")
    C = random_code(R, 4, 2, random.Random(seed))
    words = codeword_set(C)
    q, e = R.q, R.e
    T = R.tables
    for i in range(1, e + 1):
        ui = q ** (i - 1)
        expect = set()
        for c in product(range(R.size), repeat=2):
            if tuple(int(T.mul[ui, x]) for x in c) in words:
                expect.add(tuple(x % q for x in c))
        assert set(torsion(C, i).codewords()) == expect


def test_self_dual_table4_types():
    from chainsd.oracle import enumerate_all_codes

    R = preset("R41")
    sd = [C for C in enumerate_all_codes(R, 2, so_only=True) if C.type == (0, 1, 0, 1)]
    assert len(sd) == 2 and all(is_self_dual(C) for C in sd)
    assert not is_self_dual(LinearCodeR.full(R, 4, 2))


def test_bform():
    F = R52.field
    assert bform(F, (1, 2, 3), (0, 0, 0)).index == -1
    for n in range(1, 6):
        assert bform(F, (1,) * n, (1,) * n).residue == n % 2


@given(st.lists(st.integers(0, 3), min_size=9, max_size=9), st.integers(0, 3))
def test_bform_bilinear(v, c):
    F = R52.field
    a, b, d = v[:3], v[3:6], v[6:]
    s = [x ^ y for x, y in zip(a, b)]
    assert bform(F, s, d).residue == bform(F, a, d).residue ^ bform(F, b, d).residue
    ca = [F.mul(c, x) for x in a]
    assert bform(F, ca, d).residue == F.mul(c, bform(F, a, d).residue)


@given(st.integers(0, 10**6), st.integers(1, 5))
def test_T_duals(seed, n):
    F = R52.field
    rnd = random.Random(seed)
    D = LinearCodeT.span(F, [[rnd.randrange(4) for _ in range(n)] for _ in range(rnd.randint(0, n))], n)
    assert D.dim + D.dual().dim == n
    isotropic = all(bform(F, a, b).residue == 0 for a in D.basis for b in D.basis)
    assert D.is_self_orthogonal() == isotropic == (D <= D.dual())


def test_example_T_code_is_SO():
    assert LinearCodeT.span(R52.field, [(1, 1, 0)], 3).is_self_orthogonal()


def test_type_feasible():
    assert type_feasible(2, (0, 0, 0, 0))
    assert type_feasible(2, (1, 0, 0, 0))
    assert not type_feasible(2, (2, 0, 0, 0))


def test_chain_conditions_trivial_cases():
    R = preset("R41")
    F = R.field
    for n in (1, 2, 3, 4):
        Z = LinearCodeT.zero(F, n)
        assert check_chain_conditions(CodeChain(R, n, (Z, Z), (0, 0, 0, 0))).ok
    line = LinearCodeT.span(F, [(1, 1, 0)], 3)
    assert check_chain_conditions(CodeChain(R, 3, (line, line), (1, 0, 0, 0))).ok


def _clause_reference(ring, chain):
    """Independent restatement of the admissibility clauses for 2 kappa <= e, kappa = 2."""
    n, e, s, th = chain.n, ring.e, ring.s, ring.theta
    bad = []
    if n % 8 in (2, 6):
        eta = list(ring.eta) + [0] * e
        e32 = ring.field.mul(eta[0], ring.field.sqrt(eta[0]))
        if th and eta[0] and chain.one_in(s - 1):
            bad.append("A2")
        if e % 2 == 0 and eta[1] != e32 and chain.one_in(s - 1):
            bad.append("A3")
        for l in range(2 + th, 4 - th + 1):
            if chain.one_in(s - l // 2):
                bad.append("A4")
                break
    if (n % 8 == 4 and ring.m % 2 == 1) or (n % 8 in (2, 6) and e % 2 == 1):
        if chain.one_in(s - 2 + th):
            bad.append("A5")
    return sorted(set(bad))


@pytest.mark.parametrize("name", ["R41", "R52"])
def test_chain_conditions_against_reference(name):
    from chainsd.oracle import iter_so_flags

    R = preset(name)
    top = R.s + R.theta
    rnd = random.Random(5)
    n_range = (2, 3, 4, 6) if R.m == 1 else (2, 3)
    for n in n_range:
        for dims in {tuple(sorted(rnd.randint(0, n // 2) for _ in range(top))) for _ in range(6)}:
            lam = [dims[0]] + [b - a for a, b in zip(dims, dims[1:])] + [0] * (R.e - top)
            for fl in iter_so_flags(R.field, n, dims):
                ch = CodeChain(R, n, fl, tuple(lam))
                res = check_chain_conditions(ch)
                failed = sorted(k for k, v in res.clauses.items() if not v)
                assert failed == _clause_reference(R, ch)


def test_block_presentation_roundtrip():
    rnd = random.Random(2)
    R = preset("R41")
    for _ in range(20):
        C = random_code(R, 4, 3, rnd)
        B = block_presentation(C)
        assert B.code() == C


def test_json_roundtrip():
    C = LinearCodeR(R52, 5, 3, [(1, 1 + Q**3, Q)])
    assert LinearCodeR.from_json(C.to_json()) == C
