"""Brute-force ground truth: exhaustive submodule census over R_(l,m)^n.

Every submodule has exactly one canonical Howell form, so enumerating
admissible forms column by column visits each code once and no
deduplication pass is needed.  The self-orthogonal census prunes rows that
are not isotropic or not orthogonal to the rows already placed.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .chain_ring import ChainRing
from .codes import LinearCodeR, LinearCodeT
from .linalg import Row, rref, span_T

DEFAULT_ENUMERATE_LIMIT = 5_000_000


class CensusTooLarge(RuntimeError):
    pass


def _tables(ring: ChainRing):
    t = ring.tables
    return t.add, t.mul, t.neg


def census_estimate(ring: ChainRing, n: int, level: int | None = None) -> int:
    """Size of R_l^n, the scale the canonical-row search walks."""
    level = ring.e if level is None else level
    return (ring.q**level) ** n


@lru_cache(maxsize=64)
def census(ring: ChainRing, n: int, level: int | None = None, so_only: bool = True) -> np.ndarray:
    """Canonical forms of all (self-orthogonal) submodules of R_l^n; see ``kernels.census``."""
    level = ring.e if level is None else level
    add, mul, neg = _tables(ring)
    res = kernels.census(add, mul, neg, ring.q, level, n, so_only)
    res.setflags(write=False)
    return res


def _decode(ring: ChainRing, level: int, n: int, flat: np.ndarray) -> tuple[tuple[int, ...], tuple[Row, ...]]:
    vals = tuple(int(x) for x in flat[:n])
    mat = flat[n:].reshape(n, n)
    rows = tuple(tuple(int(x) for x in mat[j]) for j in range(n) if vals[j] < level)
    return vals, rows


def enumerate_all_codes(ring: ChainRing, n: int, level: int | None = None, so_only: bool = False, limit: int | None = DEFAULT_ENUMERATE_LIMIT) -> Iterator[LinearCodeR]:
    level = ring.e if level is None else level
    if limit is not None and not so_only and census_estimate(ring, n, level) > limit:
        raise CensusTooLarge(f"census over R_({level},{ring.m})^{n} exceeds the enumeration limit {limit}")
    for flat in census(ring, n, level, so_only):
        vals, rows = _decode(ring, level, n, flat)
        code = LinearCodeR(ring, level, n, rows)
        code.__dict__["howell"] = (vals, rows)
        yield code


@dataclass(frozen=True)
class CensusSummary:
    so: Counter
    sd: Counter
    total_so: int
    total_sd: int


def _type_from_sizes(ring: ChainRing, level: int, n: int, rows: Sequence[Row], vals: Sequence[int]) -> tuple[int, ...]:
    code = LinearCodeR(ring, level, n, rows)
    code.__dict__["howell"] = (tuple(vals), tuple(rows))
    return code.type


@lru_cache(maxsize=64)
def so_summary(ring: ChainRing, n: int) -> CensusSummary:
    """SO and SD counts per type at the top level, from the pruned census."""
    e = ring.e
    so: Counter = Counter()
    sd: Counter = Counter()
    for flat in census(ring, n, e, True):
        vals, rows = _decode(ring, e, n, flat)
        lam = _type_from_sizes(ring, e, n, rows, vals)
        so[lam] += 1
        if 2 * sum(e - v for v in vals) == e * n:
            sd[lam] += 1
    return CensusSummary(so, sd, sum(so.values()), sum(sd.values()))


def oracle_count_SO(ring: ChainRing, n: int, lam: Sequence[int]) -> int:
    return so_summary(ring, n).so.get(tuple(lam), 0)


def oracle_count_SD(ring: ChainRing, n: int, lam: Sequence[int]) -> int:
    return so_summary(ring, n).sd.get(tuple(lam), 0)


def torsion_chain_census(ring: ChainRing, n: int, lam: Sequence[int]) -> Counter:
    """Number of SO codes of type lam per torsion chain (Tor_1, ..., Tor_(s+theta))."""
    e = ring.e
    top = ring.s + ring.theta
    out: Counter = Counter()
    for flat in census(ring, n, e, True):
        vals, rows = _decode(ring, e, n, flat)
        code = LinearCodeR(ring, e, n, rows)
        code.__dict__["howell"] = (vals, rows)
        if code.type != tuple(lam):
            continue
        out[tuple(code.torsion(i) for i in range(1, top + 1))] += 1
    return out


def iter_so_flags(field, n: int, dims: Sequence[int]) -> Iterator[tuple[LinearCodeT, ...]]:
    """Nested self-orthogonal subspaces D_1 <= ... <= D_k of T_m^n with the given dimensions."""
    from .linalg import subspaces_between

    def rec(cur: list[LinearCodeT]):
        if len(cur) == len(dims):
            yield tuple(cur)
            return
        inner = cur[-1] if cur else LinearCodeT.zero(field, n)
        for basis in subspaces_between(field, inner.basis, inner.dual().basis, dims[len(cur)], n):
            D = LinearCodeT.span(field, basis, n)
            if D.is_self_orthogonal():
                cur.append(D)
                yield from rec(cur)
                cur.pop()

    yield from rec([])


def oracle_chain_counts(field, n: int, dims: Sequence[int], ones: dict[int, bool] | None = None) -> int:
    """Count SO flags with the given dimension profile.

    ``ones`` maps a 1-based flag index to whether the all-ones vector must
    (True) or must not (False) lie in that member.
    """
    if field.m * n > 16:
        raise CensusTooLarge("flag census limited to m*n <= 16")
    ones = ones or {}
    total = 0
    for fl in iter_so_flags(field, n, dims):
        if all(fl[i - 1].contains_all_ones() == want for i, want in ones.items()):
            total += 1
    return total


def census_records(ring: ChainRing, n: int) -> Iterator[dict]:
    """One record per submodule of R_e^n: type, canonical hash, SO and SD flags."""
    e = ring.e
    so_keys = {tuple(flat.tolist()) for flat in census(ring, n, e, True)}
    for flat in census(ring, n, e, False):
        key = tuple(flat.tolist())
        vals, rows = _decode(ring, e, n, flat)
        lam = _type_from_sizes(ring, e, n, rows, vals)
        so = key in so_keys
        yield {
            "type": list(lam),
            "canonical_hash": hashlib.sha256(repr(key).encode()).hexdigest()[:16],
            "so": so,
            "sd": so and 2 * sum(e - v for v in vals) == e * n,
        }


def dump_census(ring: ChainRing, n: int, fh) -> int:
    k = 0
    for rec in census_records(ring, n):
        fh.write(json.dumps(rec) + "\n")
        k += 1
    return k


def closure(ring: ChainRing, level: int, rows: Sequence[Sequence[int]], n: int) -> np.ndarray:
    """All codewords spanned by Howell-form rows (each codeword appears once)."""
    add, mul, _ = _tables(ring)
    rows = [tuple(r) for r in rows]
    if not rows:
        return np.zeros((1, n), dtype=np.int32)
    q = ring.q
    ranges = [q ** (level - min(_val(x, q, level) for x in r if x)) for r in rows]
    return kernels.closure(add, mul, q, level, np.asarray(rows, dtype=np.int32), np.asarray(ranges, dtype=np.int64))


def _val(x: int, q: int, level: int) -> int:
    v = 0
    while x % q == 0 and v < level:
        x //= q
        v += 1
    return v


def codeword_set(code: LinearCodeR) -> frozenset[Row]:
    return frozenset(map(tuple, code.codewords().tolist()))


def brute_force_closure(ring: ChainRing, level: int, gens: Sequence[Sequence[int]], n: int) -> frozenset[Row]:
    """Span by fixed-point iteration: independent of canonical forms."""
    add, mul, _ = _tables(ring)
    A, M = add.tolist(), mul.tolist()
    Q = ring.q**level
    words = {tuple([0] * n)}
    frontier = list(words)
    scalars = range(Q)
    gens = [tuple(g) for g in gens]
    while frontier:
        new = []
        for w in frontier:
            for g in gens:
                for c in scalars:
                    x = tuple(A[a][M[c][b]] % Q for a, b in zip(w, g))
                    if x not in words:
                        words.add(x)
                        new.append(x)
        frontier = new
    return frozenset(words)


# subspaces of T_m^n


def all_subspaces(field, n: int, dim: int) -> Iterator[LinearCodeT]:
    from .linalg import _rref_matrices

    for mat in _rref_matrices(field, dim, n):
        yield LinearCodeT.span(field, mat, n)


def so_subspaces(field, n: int, dim: int) -> list[LinearCodeT]:
    return [D for D in all_subspaces(field, n, dim) if D.is_self_orthogonal()]
