"""Matrices over the residue field T_m and over the quotients R_(l,m).

Ring entries are Teichmuller-digit indices (see ``chain_ring.RingTables``);
field entries are residue integers.  Because teich(d) has index d and
u^b * teich(d) has index d * q^b, a T_m-matrix stack sum_b u^b A^(b) is just
``sum_b A^(b) * q**b`` entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .chain_ring import ChainRing, RingElem
from .field_tower import ResidueField

Row = tuple[int, ...]


class Arith:
    """Index arithmetic on R_(e,m); level-l results are taken mod q^l."""

    def __init__(self, ring: ChainRing):
        self.ring = ring
        self.q = ring.q
        self.e = ring.e
        self.N = ring.size
        if ring.has_tables:
            t = ring.tables
            self._add = t.add.tolist()
            self._mul = t.mul.tolist()
            self._neg = t.neg.tolist()
            self._inv = t.inv.tolist()
            self.add = lambda a, b: self._add[a][b]
            self.mul = lambda a, b: self._mul[a][b]
            self.neg = lambda a: self._neg[a]
        else:
            self.add = self._sym_add
            self.mul = self._sym_mul
            self.neg = self._sym_neg
            self._inv = None

    @lru_cache(maxsize=None)
    def _nf(self, a: int):
        r = self.ring
        return r.nf_from_digits(r.index_digits(a))

    def _idx(self, nf) -> int:
        r = self.ring
        return r.digits_index(r.nf_teich_expansion(nf))

    def _sym_add(self, a: int, b: int) -> int:
        return self._idx(self.ring.nf_add(self._nf(a), self._nf(b)))

    def _sym_mul(self, a: int, b: int) -> int:
        return self._idx(self.ring.nf_mul(self._nf(a), self._nf(b)))

    def _sym_neg(self, a: int) -> int:
        return self._idx(self.ring.nf_neg(self._nf(a)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if self._inv is not None:
            v = self._inv[a]
            if v < 0:
                raise ZeroDivisionError("not a unit")
            return v
        return self._idx(self.ring._inv_nf(self._nf(a)))

    def valuation(self, a: int, level: int) -> int:
        a %= self.q**level
        if a == 0:
            return level
        v = 0
        while a % self.q == 0:
            a //= self.q
            v += 1
        return v

    def dot(self, a: Sequence[int], b: Sequence[int], level: int) -> int:
        acc = 0
        for x, y in zip(a, b):
            if x and y:
                acc = self.add(acc, self.mul(x, y))
        return acc % self.q**level

    def axpy(self, c: int, x: Sequence[int], y: Sequence[int], level: int) -> Row:
        """y + c*x at the given level."""
        mod = self.q**level
        if c == 0:
            return tuple(y)
        return tuple(self.add(yi, self.mul(c, xi)) % mod for xi, yi in zip(x, y))

    def scale(self, c: int, x: Sequence[int], level: int) -> Row:
        mod = self.q**level
        return tuple(self.mul(c, xi) % mod for xi in x)


@lru_cache(maxsize=None)
def arith(ring: ChainRing) -> Arith:
    return Arith(ring)


@dataclass(frozen=True)
class MatR:
    ring: ChainRing
    level: int
    rows: tuple[Row, ...]
    ncols: int

    @classmethod
    def from_rows(cls, ring: ChainRing, level: int, rows: Iterable[Sequence[int]], ncols: int | None = None) -> "MatR":
        rows = tuple(tuple(int(x) % ring.q**level for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(ring, level, rows, ncols)

    @classmethod
    def from_elems(cls, rows: Sequence[Sequence[RingElem]]) -> "MatR":
        first = rows[0][0]
        ring, level = first.ring, first.level
        return cls.from_rows(ring, level, [[x.reduce_level(level).index for x in r] for r in rows])

    def elems(self) -> list[list[RingElem]]:
        return [[self.ring.from_index(x, self.level) for x in r] for r in self.rows]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def transpose(self) -> "MatR":
        cols = tuple(zip(*self.rows)) if self.rows else tuple(() for _ in range(self.ncols))
        return MatR(self.ring, self.level, cols, len(self.rows))

    def __matmul__(self, other: "MatR") -> "MatR":
        if other.ring != self.ring or other.level != self.level:
            raise ValueError("operands over different rings or levels")
        if self.ncols != len(other.rows):
            raise ValueError("shape mismatch")
        ar = arith(self.ring)
        cols = other.transpose().rows
        out = tuple(tuple(ar.dot(r, c, self.level) for c in cols) for r in self.rows)
        return MatR(self.ring, self.level, out, other.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def format(self) -> list[list[str]]:
        return [[self.ring.format_digits(self.ring.index_digits(x, self.level)) for x in r] for r in self.rows]


def gram(G: MatR) -> MatR:
    return G @ G.transpose()


@dataclass(frozen=True)
class StandardForm:
    """Column-permuted generator matrix with block structure u^(i-1) I on the diagonal.

    ``perm[j]`` is the original column placed at position j.
    """

    matrix: MatR
    perm: tuple[int, ...]
    type: tuple[int, ...]

    @property
    def Lambda(self) -> tuple[int, ...]:
        out, acc = [], 0
        for lam in self.type:
            acc += lam
            out.append(acc)
        return tuple(out)

    def block_rows(self, i: int) -> tuple[Row, ...]:
        """Rows of block i (1-based), i.e. pivots u^(i-1), in permuted coordinates."""
        L = (0,) + self.Lambda
        return self.matrix.rows[L[i - 1] : L[i]]

    def unpermuted_rows(self) -> tuple[Row, ...]:
        n = self.matrix.ncols
        out = []
        for r in self.matrix.rows:
            v = [0] * n
            for j, x in enumerate(r):
                v[self.perm[j]] = x
            out.append(tuple(v))
        return tuple(out)


def standard_form(G: MatR) -> StandardForm:
    """Minimal-valuation pivoting with column swaps.

    Ties go to the lowest row, then the lowest column.  Pivot rows are
    scaled so the pivot is exactly u^v, and the pivot column is cleared in
    every other row whose entry there is divisible by u^v.
    """
    ring, level, n = G.ring, G.level, G.ncols
    ar = arith(ring)
    q = ring.q
    mod = q**level
    rows = [list(r) for r in G.rows]
    pivot_rows: list[list[int]] = []
    pivot_cols: list[int] = []
    pivot_vals: list[int] = []
    remaining_cols = list(range(n))
    while rows and remaining_cols:
        best = None
        for ri, r in enumerate(rows):
            for cj in remaining_cols:
                v = ar.valuation(r[cj], level)
                if best is None or v < best[0]:
                    best = (v, ri, cj)
            if best is not None and best[0] == 0:
                break
        v, ri, cj = best
        if v >= level:
            break
        prow = rows.pop(ri)
        unit = prow[cj] // q**v
        s = ar.inv(unit)
        prow = [ar.mul(s, x) % mod for x in prow]
        assert prow[cj] == q**v
        for others in (rows, pivot_rows):
            for k, r in enumerate(others):
                x = r[cj]
                if x and x % q**v == 0:
                    c = ar.neg(x // q**v)
                    others[k] = list(ar.axpy(c, prow, r, level))
        rows = [r for r in rows if any(r)]
        pivot_rows.append(prow)
        pivot_cols.append(cj)
        pivot_vals.append(v)
        remaining_cols.remove(cj)
    perm = tuple(pivot_cols + remaining_cols)
    out_rows = tuple(tuple(r[p] for p in perm) for r in pivot_rows)
    lam = [0] * level
    for v in pivot_vals:
        lam[v] += 1
    return StandardForm(MatR(ring, level, out_rows, n), perm, tuple(lam))


def howell_form(ring: ChainRing, level: int, rows: Iterable[Sequence[int]], n: int) -> tuple[tuple[int, ...], tuple[Row, ...]]:
    """Canonical generator set of the submodule spanned by ``rows``.

    Returns (v, H): v[j] is the minimal valuation at column j over codewords
    vanishing on columns < j (``level`` if none), and H holds one row per
    column with v[j] < level, pivot exactly u^v[j], zeros before j and
    entries at later pivot columns k reduced below u^v[k].
    """
    ar = arith(ring)
    q = ring.q
    mod = q**level
    gens = [tuple(x % mod for x in r) for r in rows]
    gens = [r for r in gens if any(r)]
    vals = [level] * n
    piv: dict[int, Row] = {}
    for j in range(n):
        best = None
        for k, r in enumerate(gens):
            v = ar.valuation(r[j], level)
            if v < level and (best is None or v < best[0]):
                best = (v, k)
        if best is None:
            continue
        v, k = best
        prow = gens.pop(k)
        s = ar.inv(prow[j] // q**v)
        prow = ar.scale(s, prow, level)
        new = []
        for r in gens:
            if r[j]:
                r = ar.axpy(ar.neg(r[j] // q**v), prow, r, level)
            if any(r):
                new.append(r)
        if v > 0:
            ann = ar.scale(q ** (level - v), prow, level)
            if any(ann):
                new.append(ann)
        gens = new
        vals[j] = v
        piv[j] = prow
    cols = sorted(piv)
    # reducing at k only disturbs entries beyond k, so one left-to-right pass suffices
    out = {}
    for j in cols:
        r = piv[j]
        for k in cols:
            if k > j and r[k] >= q ** vals[k]:
                c = r[k] // q ** vals[k]
                r = ar.axpy(ar.neg(c), piv[k], r, level)
        out[j] = r
    return tuple(vals), tuple(out[j] for j in cols)


# residue-field linear algebra


def rref(field: ResidueField, rows: Iterable[Sequence[int]], ncols: int | None = None) -> tuple[tuple[Row, ...], tuple[int, ...]]:
    mat = [list(r) for r in rows]
    if not mat:
        return (), ()
    n = len(mat[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = field.inv(mat[r][c])
        mat[r] = [field.mul(inv, x) for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x ^ field.mul(f, y) for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return tuple(tuple(row) for row in mat[:r]), tuple(pivots)


def rank_T(field: ResidueField, rows: Iterable[Sequence[int]]) -> int:
    return len(rref(field, rows)[0])


def nullspace_T(field: ResidueField, rows: Sequence[Sequence[int]], n: int) -> tuple[Row, ...]:
    """Basis of {x : rows . x = 0}."""
    basis, pivots = rref(field, rows, n)
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for row, p in zip(basis, pivots):
            x[p] = row[f]  # characteristic 2: -a = a
        out.append(tuple(x))
    return tuple(out)


def span_T(field: ResidueField, basis: Sequence[Sequence[int]], n: int) -> Iterator[Row]:
    q = field.q
    for coeffs in product(range(q), repeat=len(basis)):
        v = [0] * n
        for c, b in zip(coeffs, basis):
            if c:
                v = [x ^ field.mul(c, y) for x, y in zip(v, b)]
        yield tuple(v)


def in_span_T(field: ResidueField, basis_rref: Sequence[Sequence[int]], pivots: Sequence[int], v: Sequence[int]) -> bool:
    v = list(v)
    for row, p in zip(basis_rref, pivots):
        if v[p]:
            f = v[p]
            v = [x ^ field.mul(f, y) for x, y in zip(v, row)]
    return not any(v)


def subspaces_between(field: ResidueField, inner: Sequence[Sequence[int]], outer: Sequence[Sequence[int]], dim: int, n: int) -> Iterator[tuple[Row, ...]]:
    """All subspaces W of dimension ``dim`` with inner <= W <= outer, as rref bases.

    Complements of ``inner`` inside ``outer`` are enumerated as rref subspaces
    of the quotient, so every W is produced exactly once.
    """
    inner_b, inner_p = rref(field, inner, n)
    outer_b, _ = rref(field, outer, n)
    k = dim - len(inner_b)
    if k < 0 or dim > len(outer_b):
        return
    # a basis of outer extending inner, reduced against inner pivots
    ext: list[Row] = []
    cur_b, cur_p = inner_b, inner_p
    for v in outer_b:
        if not in_span_T(field, cur_b, cur_p, v):
            ext.append(v)
            cur_b, cur_p = rref(field, list(cur_b) + [v], n)
    d = len(ext)
    for coords in _rref_matrices(field, k, d):
        vecs = list(inner_b)
        for c in coords:
            v = [0] * n
            for a, b in zip(c, ext):
                if a:
                    v = [x ^ field.mul(a, y) for x, y in zip(v, b)]
            vecs.append(tuple(v))
        yield rref(field, vecs, n)[0]


def _rref_matrices(field: ResidueField, k: int, d: int) -> Iterator[list[list[int]]]:
    """All k x d matrices in reduced row-echelon form with rank k."""
    q = field.q
    from itertools import combinations

    for pivots in combinations(range(d), k):
        free_slots = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, d) if c not in pivots]
        for vals in product(range(q), repeat=len(free_slots)):
            mat = [[0] * d for _ in range(k)]
            for i, p in enumerate(pivots):
                mat[i][p] = 1
            for (i, c), x in zip(free_slots, vals):
                mat[i][c] = x
            yield mat


@dataclass(frozen=True)
class SolveResult:
    consistent: bool
    particular: tuple[Row, ...] | None
    kernel: tuple[Row, ...]
    q: int

    @property
    def count(self) -> int:
        if not self.consistent:
            return 0
        cols = len(self.particular[0]) if self.particular and self.particular[0] else 1
        return self.q ** (len(self.kernel) * cols)

    def solutions(self, field: ResidueField) -> Iterator[tuple[Row, ...]]:
        """Enumerate every X (as a tuple of rows)."""
        if not self.consistent:
            return
        k = len(self.particular)
        c = len(self.particular[0]) if k else 0
        for coeffs in product(range(self.q), repeat=len(self.kernel) * c):
            X = [list(r) for r in self.particular]
            for col in range(c):
                for b, kv in enumerate(self.kernel):
                    a = coeffs[col * len(self.kernel) + b]
                    if a:
                        for i in range(k):
                            X[i][col] ^= field.mul(a, kv[i])
            yield tuple(tuple(r) for r in X)


def solve_T(field: ResidueField, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> SolveResult:
    """Solve A X = B over T_m (identified with the residue field)."""
    r = len(A)
    k = len(A[0]) if r else 0
    c = len(B[0]) if B and B[0] is not None else 0
    aug = [list(A[i]) + list(B[i]) for i in range(r)]
    red, pivots = rref(field, aug, k + c) if aug else ((), ())
    kernel = nullspace_T(field, A, k) if r else tuple(tuple(1 if j == i else 0 for j in range(k)) for i in range(k))
    if any(p >= k for p in pivots):
        return SolveResult(False, None, kernel, field.q)
    X = [[0] * c for _ in range(k)]
    for row, p in zip(red, pivots):
        for col in range(c):
            X[p][col] = row[k + col]
    return SolveResult(True, tuple(tuple(x) for x in X), kernel, field.q)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if q < 2:
        raise ValueError("q must be at least 2")
    if k < 0 or n < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def index_matrix(ring: ChainRing, level: int, rows: Sequence[Sequence[int]]) -> np.ndarray:
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), -1) % ring.q**level
