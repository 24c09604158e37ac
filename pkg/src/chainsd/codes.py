"""Linear codes over R_(l,m) and over T_m, torsion, duality and the lifting predicates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Any, Iterable, Iterator, Sequence

import numpy as np

from .chain_ring import ChainRing, ChainRingSpec, ring_new
from .field_tower import ResidueField, TeichElem
from .linalg import MatR, Row, arith, howell_form, in_span_T, nullspace_T, rref, span_T, standard_form


def f(x: int) -> int:
    """Floor of x/2, also for negative x."""
    return x // 2


# codes over T_m


@dataclass(frozen=True, eq=False)
class LinearCodeT:
    """Subspace of T_m^n held by its reduced row-echelon basis (residue integers)."""

    field: ResidueField = dc_field(repr=False)
    n: int
    basis: tuple[Row, ...]
    pivots: tuple[int, ...] = dc_field(repr=False)

    @classmethod
    def span(cls, fld: ResidueField, rows: Iterable[Sequence[int]], n: int) -> "LinearCodeT":
        rows = [tuple(r) for r in rows]
        if any(len(r) != n for r in rows):
            raise ValueError("vector length differs from n")
        basis, pivots = rref(fld, rows, n) if rows else ((), ())
        return cls(fld, n, basis, pivots)

    @classmethod
    def zero(cls, fld: ResidueField, n: int) -> "LinearCodeT":
        return cls(fld, n, (), ())

    @classmethod
    def full(cls, fld: ResidueField, n: int) -> "LinearCodeT":
        return cls.span(fld, [tuple(int(i == j) for j in range(n)) for i in range(n)], n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearCodeT) and self.n == other.n and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.n, self.basis))

    def __contains__(self, v: Sequence[int]) -> bool:
        return in_span_T(self.field, self.basis, self.pivots, v)

    def __le__(self, other: "LinearCodeT") -> bool:
        return all(b in other for b in self.basis)

    def codewords(self) -> Iterator[Row]:
        return span_T(self.field, self.basis, self.n)

    def contains_all_ones(self) -> bool:
        return tuple([1] * self.n) in self

    def dual(self) -> "LinearCodeT":
        return LinearCodeT.span(self.field, nullspace_T(self.field, self.basis, self.n), self.n)

    def is_self_orthogonal(self) -> bool:
        return all(_bdot(self.field, a, b) == 0 for i, a in enumerate(self.basis) for b in self.basis[i:])

    def __repr__(self) -> str:
        return f"LinearCodeT(n={self.n}, dim={self.dim}, basis={list(self.basis)})"


def _bdot(fld: ResidueField, a: Sequence[int], b: Sequence[int]) -> int:
    acc = 0
    for x, y in zip(a, b):
        acc ^= fld.mul(x, y)
    return acc


def bform(fld: ResidueField, a: Sequence[int], b: Sequence[int]) -> TeichElem:
    """pi_0 of the ring dot product of the Teichmuller lifts.

    pi_0 is additive for the Teichmuller sum, so this is the residue-field dot product.
    """
    if len(a) != len(b):
        raise ValueError("length mismatch")
    return TeichElem.from_residue(fld, _bdot(fld, a, b))


def dual_T(D: LinearCodeT) -> LinearCodeT:
    return D.dual()


def is_SO_T(D: LinearCodeT) -> bool:
    return D.is_self_orthogonal()


# codes over R_(l,m)


class LinearCodeR:
    """Submodule of R_l^n given by generator rows of Teichmuller-digit indices."""

    def __init__(self, ring: ChainRing, level: int, n: int, generators: Iterable[Sequence[int]]):
        if not 1 <= level <= ring.e:
            raise ValueError(f"level {level} outside 1..{ring.e}")
        mod = ring.q**level
        gens = tuple(tuple(int(x) % mod for x in r) for r in generators)
        if any(len(r) != n for r in gens):
            raise ValueError("generator length differs from n")
        self.ring = ring
        self.level = level
        self.n = n
        self.generators = gens

    @classmethod
    def from_matrix(cls, G: MatR) -> "LinearCodeR":
        return cls(G.ring, G.level, G.ncols, G.rows)

    @classmethod
    def full(cls, ring: ChainRing, level: int, n: int) -> "LinearCodeR":
        return cls(ring, level, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, ring: ChainRing, level: int, n: int) -> "LinearCodeR":
        return cls(ring, level, n, [])

    @property
    def matrix(self) -> MatR:
        return MatR(self.ring, self.level, self.generators, self.n)

    @cached_property
    def howell(self) -> tuple[tuple[int, ...], tuple[Row, ...]]:
        return howell_form(self.ring, self.level, self.generators, self.n)

    @property
    def key(self) -> tuple:
        return (self.level, self.n, self.howell[1])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearCodeR) and self.ring == other.ring and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"LinearCodeR(level={self.level}, n={self.n}, type={self.type}, rows={self.matrix.format()})"

    @cached_property
    def std(self):
        return standard_form(self.matrix)

    @property
    def type(self) -> tuple[int, ...]:
        return self.std.type

    @property
    def Lambda(self) -> tuple[int, ...]:
        return self.std.Lambda

    @property
    def log_size(self) -> int:
        """log_q |C|."""
        return sum(self.level - v for v in self.howell[0])

    @property
    def size(self) -> int:
        return self.ring.q**self.log_size

    def contains(self, v: Sequence[int]) -> bool:
        ar = arith(self.ring)
        q = self.ring.q
        w = [x % q**self.level for x in v]
        vals, rows = self.howell
        it = iter(rows)
        for j, vj in enumerate(vals):
            if vj == self.level:
                if w[j]:
                    return False
                continue
            r = next(it)
            if w[j] % q**vj:
                return False
            if w[j]:
                w = list(ar.axpy(ar.neg(w[j] // q**vj), r, w, self.level))
        return not any(w)

    def codewords(self) -> np.ndarray:
        """All codewords as an (|C|, n) index array."""
        from .oracle import closure

        return closure(self.ring, self.level, self.howell[1], self.n)

    def torsion(self, i: int) -> LinearCodeT:
        if not 1 <= i <= self.level:
            raise IndexError(f"torsion index {i} outside 1..{self.level}")
        q = self.ring.q
        rows = []
        for b in range(1, i + 1):
            for r in self.std.block_rows(b):
                rows.append(tuple((x // q ** (b - 1)) % q for x in r))
        perm = self.std.perm
        unperm = []
        for r in rows:
            v = [0] * self.n
            for j, x in enumerate(r):
                v[perm[j]] = x
            unperm.append(tuple(v))
        return LinearCodeT.span(self.ring.field, unperm, self.n)

    def torsion_codes(self) -> tuple[LinearCodeT, ...]:
        return tuple(self.torsion(i) for i in range(1, self.level + 1))

    def dual(self) -> "LinearCodeR":
        """Diagonalise the standard form by column operations and read the kernel off Q."""
        ring, level, n = self.ring, self.level, self.n
        ar = arith(ring)
        q = ring.q
        sf = self.std
        G = [list(r) for r in sf.matrix.rows]
        k = len(G)
        vals = [ar.valuation(G[i][i], level) for i in range(k)]
        Qt = [[int(i == j) for j in range(n)] for i in range(n)]  # Qt[j] = column j of Q
        for i in reversed(range(k)):
            v = vals[i]
            for j in range(i + 1, n):
                x = G[i][j]
                if x:
                    c = ar.neg(x // q**v)
                    for r in range(k):
                        if G[r][i]:
                            G[r][j] = ar.add(G[r][j], ar.mul(c, G[r][i])) % q**level
                    Qt[j] = list(ar.axpy(c, Qt[i], Qt[j], level))
        gens = []
        for i in range(k):
            if vals[i]:
                gens.append(ar.scale(q ** (level - vals[i]), Qt[i], level))
        gens.extend(tuple(Qt[j]) for j in range(k, n))
        out = []
        for g in gens:
            v = [0] * n
            for j, x in enumerate(g):
                v[sf.perm[j]] = x
            out.append(v)
        return LinearCodeR(ring, level, n, out)

    def gram_is_zero(self) -> bool:
        ar = arith(self.ring)
        rows = self.generators
        return all(ar.dot(a, b, self.level) == 0 for i, a in enumerate(rows) for b in rows[i:])

    def block_test(self) -> bool:
        """T_i T_j^t = 0 mod u^(l-i-j+2) for i + j <= l + 1, products in R_e."""
        ring, level = self.ring, self.level
        ar = arith(ring)
        q = ring.q
        T = [[tuple(x // q ** (b - 1) for x in r) for r in self.std.block_rows(b)] for b in range(1, level + 1)]
        for i in range(1, level + 1):
            for j in range(i, level + 2 - i):
                mod = q ** (level - i - j + 2)
                for a in T[i - 1]:
                    for b in T[j - 1]:
                        if ar.dot(a, b, ring.e) % mod:
                            return False
        return True

    def is_self_orthogonal(self) -> bool:
        g = self.gram_is_zero()
        b = self.block_test()
        if g != b:
            raise AssertionError("gram test and block test disagree")
        return g

    def is_self_dual(self) -> bool:
        if self.level != self.ring.e:
            raise ValueError("self-duality is defined at the top level only")
        lam = self.type
        e = self.level
        full = list(lam) + [self.n - sum(lam)]
        sym = all(full[i - 1] == full[e - i + 1] for i in range(2, e + 1)) and full[0] == full[e]
        return sym and self.is_self_orthogonal()

    def reduce_level(self, level: int) -> "LinearCodeR":
        return LinearCodeR(self.ring, level, self.n, self.generators)

    def to_json(self) -> dict[str, Any]:
        return {
            "ring": self.ring.to_json(),
            "level": self.level,
            "n": self.n,
            "generators": self.matrix.format(),
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any] | str) -> "LinearCodeR":
        if isinstance(obj, str):
            obj = json.loads(obj)
        ring = ring_new(ChainRingSpec.from_json(obj["ring"]))
        level = int(obj.get("level", ring.e))
        rows = [[ring.element(x, level).index for x in r] for r in obj["generators"]]
        return cls(ring, level, int(obj["n"]), rows)


def torsion(C: LinearCodeR, i: int) -> LinearCodeT:
    return C.torsion(i)


def dual(C: LinearCodeR) -> LinearCodeR:
    return C.dual()


def is_self_orthogonal(C: LinearCodeR) -> bool:
    return C.is_self_orthogonal()


def is_self_dual(C: LinearCodeR) -> bool:
    return C.is_self_dual()


# property (P)


@dataclass(frozen=True)
class PConditions:
    regime: str
    congruences: tuple[tuple[int, int], ...]  # (block count k, exponent): Diag([T]_k [T]_k^t) = 0 mod u^exponent
    digits: tuple[tuple[int, int], ...]  # (block count k, digit): pi_digit(Diag(...)) = 0


def property_P_conditions(ring: ChainRing, level: int) -> PConditions:
    e, kappa, s, th = ring.e, ring.kappa, ring.s, ring.theta
    l = level
    if (l - e) % 2 or not 2 <= l <= e:
        raise ValueError(f"level {l} must satisfy 2 <= l <= e and l = e mod 2")
    gamma = s - f(l)
    upper_ii = kappa - f(2 * kappa - e) + 1
    cong: list[tuple[int, int]] = []
    digs: list[tuple[int, int]] = []
    if l <= min(kappa - 1, e - kappa):
        regime = "i"
        i_range = range(2, l - th + 1, 2)
        j_range = range(l - 1, kappa - 1 - th + 1, 2)
    elif e - kappa < l <= upper_ii:
        regime = "ii"
        i_range = range(2, l - th + 1, 2)
        j_range = range(l - 1, e - l - 1 - th + 1, 2)
    elif kappa <= l <= e - kappa:
        regime = "iii"
        i_range = range(2, kappa + 1, 2)
        j_range = range(0)
    else:
        regime = "iv"
        i_range = range(2, e - l + 1, 2)
        j_range = range(0)
    for i in i_range:
        k = gamma + 1 - f(i)
        if k >= 1:
            cong.append((k, min(l + i, e)))
    for j in j_range:
        k = gamma + 1 - f(j + 2)
        if k >= 1 and l + j < e:
            digs.append((k, l + j))
    return PConditions(regime, tuple(cong), tuple(digs))


@dataclass(frozen=True)
class BlockCode:
    """Code over R_l presented by blocks T_1, ..., T_(gamma+l) as in the lifting recursion.

    ``blocks[i-1]`` holds the rows of T_i as R_e digit indices; T_i sits in the
    generator matrix multiplied by u^(max(0, i-gamma-1)).
    """

    ring: ChainRing
    level: int
    n: int
    blocks: tuple[tuple[Row, ...], ...]

    @property
    def gamma(self) -> int:
        return self.ring.s - f(self.level)

    def shift(self, i: int) -> int:
        return max(0, i - self.gamma - 1)

    def generator_rows(self) -> list[Row]:
        q, mod = self.ring.q, self.ring.q**self.level
        out = []
        for i, blk in enumerate(self.blocks, start=1):
            sh = q ** self.shift(i)
            out.extend(tuple((x * sh) % mod for x in r) for r in blk)
        return out

    def code(self) -> LinearCodeR:
        return LinearCodeR(self.ring, self.level, self.n, self.generator_rows())

    def stacked(self, k: int) -> list[Row]:
        return [r for blk in self.blocks[:k] for r in blk]

    def diag(self, k: int) -> list[int]:
        ar = arith(self.ring)
        return [ar.dot(r, r, self.ring.e) for r in self.stacked(k)]


def satisfies_property_P(C: LinearCodeR | BlockCode, ambient: ChainRing | None = None, split: Sequence[int] | None = None) -> bool:
    """Evaluate property (P) for the regime selected by the level.

    A plain ``LinearCodeR`` is turned into a block presentation through its
    standard form; ``split`` divides the unit-pivot rows among T_1..T_(gamma+1)
    (default: all of them in T_1).
    """
    if isinstance(C, LinearCodeR):
        C = block_presentation(C, split, ambient)
    ring = C.ring
    conds = property_P_conditions(ring, C.level)
    q = ring.q
    for k, ex in conds.congruences:
        if any(d % q**ex for d in C.diag(k)):
            return False
    for k, j in conds.digits:
        if any((d // q**j) % q for d in C.diag(k)):
            return False
    return True


def block_presentation(C: LinearCodeR, split: Sequence[int] | None = None, ambient: ChainRing | None = None) -> BlockCode:
    ring = ambient or C.ring
    level = C.level
    gamma = ring.s - f(level)
    q = ring.q
    sf = C.std
    blocks: list[tuple[Row, ...]] = []

    def unperm(r: Row) -> Row:
        v = [0] * C.n
        for j, x in enumerate(r):
            v[sf.perm[j]] = x
        return tuple(v)

    first = [unperm(r) for r in sf.block_rows(1)]
    split = list(split) if split is not None else [len(first)] + [0] * gamma
    if sum(split) != len(first) or len(split) != gamma + 1:
        raise ValueError("split must distribute the unit-pivot rows over gamma+1 blocks")
    pos = 0
    for size in split:
        blocks.append(tuple(first[pos : pos + size]))
        pos += size
    for b in range(2, level + 1):
        blocks.append(tuple(unperm(tuple(x // q ** (b - 1) for x in r)) for r in sf.block_rows(b)))
    return BlockCode(ring, level, C.n, tuple(blocks))


# chains and their admissibility conditions


@dataclass(frozen=True)
class CodeChain:
    ring: ChainRing
    n: int
    spaces: tuple[LinearCodeT, ...]
    lam: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.spaces) != self.ring.s + self.ring.theta:
            raise ValueError(f"a chain has {self.ring.s + self.ring.theta} members")
        if len(self.lam) != self.ring.e:
            raise ValueError("type must have e entries")
        for a, b in zip(self.spaces, self.spaces[1:]):
            if not a <= b:
                raise ValueError("chain is not nested")

    def D(self, i: int) -> LinearCodeT | None:
        """D^(i); indices below 1 denote the zero space."""
        if i < 1:
            return None
        return self.spaces[i - 1]

    def one_in(self, i: int) -> bool:
        d = self.D(i)
        return d is not None and d.contains_all_ones()


@dataclass(frozen=True)
class ChainCheck:
    ok: bool
    clauses: dict[str, bool]


def eta_three_halves(ring: ChainRing) -> int:
    fld = ring.field
    e0 = ring.eta[0]
    return fld.mul(e0, fld.sqrt(e0))


def check_chain_conditions(chain: CodeChain, n: int | None = None) -> ChainCheck:
    ring = chain.ring
    n = chain.n if n is None else n
    e, kappa, s, th, k1, m = ring.e, ring.kappa, ring.s, ring.theta, ring.kappa1, ring.m
    Lam = np.cumsum(chain.lam).tolist()
    clauses: dict[str, bool] = {}
    clauses["dims"] = all(chain.spaces[i].dim == Lam[i] for i in range(len(chain.spaces)))
    clauses["self_orthogonal"] = all(d.is_self_orthogonal() for d in chain.spaces)
    if e < 3 or ring.eta is None:
        return ChainCheck(all(clauses.values()), clauses)
    eta = ring.eta
    r8 = n % 8
    n26 = r8 in (2, 6)

    def eta_at(i: int) -> int:
        return eta[i] if 0 <= i < len(eta) else 0

    def excl(tag: str, idx: int) -> None:
        clauses[tag] = clauses.get(tag, True) and not chain.one_in(idx)

    e32 = eta_three_halves(ring)
    singly_even = kappa % 4 == 2
    if 2 * kappa <= e:
        if n26:
            for l in range(2, k1 + th + 1):
                if eta_at(l - th - 1) != 0:
                    excl("A2", s - f(l) + 1 - k1)
            if eta_at(k1) != e32 and ((kappa >= 4 and singly_even) or (kappa == 2 and e % 2 == 0)):
                excl("A3", s - f(k1 + 1) + 1 - k1)
            for l in range(k1 + 2 + th, kappa + 2 - th + 1):
                excl("A4", s - f(l) + 1 - k1)
        if (r8 == 4 and m % 2 == 1) or (n26 and kappa == 2 and e % 2 == 1):
            excl("A5", s - kappa + th)
    else:
        if n26:
            for l in range(2, min(k1 + th, e - kappa) + 1):
                if eta_at(l - th - 1) != 0:
                    excl("B2", s - f(l) + 1 - k1)
            if singly_even and 2 * e >= 3 * kappa + 2 + 2 * th and eta_at(k1) != e32:
                excl("B3", s - f(k1 + 1) + 1 - k1)
            for l in range(k1 + 2 + th, e - kappa + 1):
                excl("B4", s - f(l) + 1 - k1)
    return ChainCheck(all(clauses.values()), clauses)


def type_feasible(n: int, lam: Sequence[int], e: int | None = None) -> bool:
    e = len(lam) if e is None else e
    if len(lam) != e or any(x < 0 for x in lam):
        return False
    if sum(lam) > n:
        return False
    for i in range((e + 2) // 2, e + 1):
        lhs = 2 * sum(lam[: e - i + 1]) + sum(lam[e - i + 1 : i])
        if lhs > n:
            return False
    return True
