import io
import json
from itertools import permutations, product

import numpy as np
import pytest

from chainsd.chain_ring import preset
from chainsd.codes import LinearCodeR
from chainsd.oracle import (
    CensusTooLarge,
    brute_force_closure,
    census,
    census_estimate,
    census_records,
    closure,
    codeword_set,
    dump_census,
    enumerate_all_codes,
    oracle_chain_counts,
    oracle_count_SD,
    oracle_count_SO,
    so_summary,
)


def submodules_by_extension(ring, n):
    """Every submodule of R^n, grown one generator at a time from {0}."""
    t = ring.tables
    A, M = t.add.tolist(), t.mul.tolist()
    size = ring.q**ring.e
    vecs = list(product(range(size), repeat=n))
    zero = frozenset([(0,) * n])
    seen = {zero}
    todo = [zero]
    while todo:
        mod = todo.pop()
        for v in vecs:
            if v in mod:
                continue
            multiples = {tuple(M[c][x] for x in v) for c in range(size)}
            new = frozenset(tuple(A[a][b] for a, b in zip(w, u)) for w in mod for u in multiples)
            if new not in seen:
                seen.add(new)
                todo.append(new)
    return seen


def is_so(ring, words):
    t = ring.tables
    A, M = t.add.tolist(), t.mul.tolist()
    for a in words:
        for b in words:
            s = 0
            for x, y in zip(a, b):
                s = A[s][M[x][y]]
            if s:
                return False
    return True


@pytest.mark.parametrize("name,n", [("F2u2", 2), ("R31", 2), ("R41", 2), ("F4u2", 2), ("F2u2", 3)])
def test_census_matches_extension_closure(name, n):
    R = preset(name)
    ref = submodules_by_extension(R, n)
    got = {codeword_set(C) for C in enumerate_all_codes(R, n)}
    assert len(census(R, n, R.e, False)) == len(ref)
    assert got == ref
    so_ref = {w for w in ref if is_so(R, w)}
    assert {codeword_set(C) for C in enumerate_all_codes(R, n, so_only=True)} == so_ref


def test_length_one():
    R = preset("R31")
    codes = list(enumerate_all_codes(R, 1))
    assert len(codes) == 4
    assert sorted(len(codeword_set(C)) for C in codes) == [1, 2, 4, 8]


@pytest.mark.parametrize("name,n", [("R41", 3), ("F4u2", 2), ("R42", 2)])
def test_code_sizes_match_type(name, n):
    R = preset(name)
    for C in enumerate_all_codes(R, n):
        lam = C.type
        assert len(codeword_set(C)) == R.q ** sum((R.e - i) * x for i, x in enumerate(lam))


def test_known_counts():
    assert oracle_count_SO(preset("R42"), 3, (0, 1, 1, 1)) == 20
    assert oracle_count_SO(preset("R41"), 4, (0, 1, 2, 1)) == 14
    assert oracle_count_SO(preset("R41"), 3, (0, 0, 0, 0)) == 1
    assert oracle_count_SD(preset("R41"), 2, (0, 1, 0, 1)) >= 1
    s = so_summary(preset("R41"), 2)
    assert s.total_so == sum(s.so.values()) and s.total_sd <= s.total_so


def test_chain_counts():
    F1 = preset("R31").field
    assert oracle_chain_counts(F1, 3, [1]) == 3
    assert oracle_chain_counts(F1, 3, [0, 0]) == 1
    assert oracle_chain_counts(F1, 4, [1], ones={1: True}) == 1
    assert oracle_chain_counts(F1, 4, [2]) == oracle_chain_counts(F1, 4, [2], ones={1: True}) + oracle_chain_counts(F1, 4, [2], ones={1: False})
    with pytest.raises(CensusTooLarge):
        oracle_chain_counts(preset("R42").field, 9, [1])


def test_enumeration_limit():
    R = preset("R41")
    assert census_estimate(R, 6) == 16**6
    with pytest.raises(CensusTooLarge):
        next(enumerate_all_codes(R, 6))
    assert next(enumerate_all_codes(R, 2, limit=256)) is not None


def test_census_closed_under_permutations():
    R = preset("R41")
    words = {codeword_set(C) for C in enumerate_all_codes(R, 3)}
    for p in permutations(range(3)):
        assert {frozenset(tuple(w[i] for i in p) for w in ws) for ws in words} == words


def test_permuted_generators_keep_type():
    R = preset("R42")
    for C in list(enumerate_all_codes(R, 2, so_only=True))[:40]:
        rows = [tuple(reversed(r)) for r in C.howell[1]]
        D = LinearCodeR(R, R.e, 2, rows)
        assert D.type == C.type and D.is_self_orthogonal()


def test_records_and_dump():
    R = preset("R41")
    recs = list(census_records(R, 2))
    assert len(recs) == len(census(R, 2, R.e, False))
    assert sum(r["so"] for r in recs) == so_summary(R, 2).total_so
    assert sum(r["sd"] for r in recs) == so_summary(R, 2).total_sd
    assert len({r["canonical_hash"] for r in recs}) == len(recs)
    buf = io.StringIO()
    assert dump_census(R, 2, buf) == len(recs)
    assert [json.loads(line) for line in buf.getvalue().splitlines()] == recs


@pytest.mark.parametrize("name", ["R41", "F4u2", "R51"])
def test_closure_against_fixed_point(name):
    R = preset(name)
    rng = np.random.default_rng(5)
    for C in list(enumerate_all_codes(R, 2))[:: max(1, len(census(R, 2, R.e, False)) // 25)]:
        rows = C.howell[1]
        kern = {tuple(w) for w in closure(R, R.e, rows, 2).tolist()}
        assert kern == brute_force_closure(R, R.e, rows, 2)
    gens = rng.integers(0, R.q**R.e, size=(2, 2)).tolist()
    C = LinearCodeR(R, R.e, 2, gens)
    assert codeword_set(C) == brute_force_closure(R, R.e, gens, 2)
