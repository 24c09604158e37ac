"""Recursive lifting of self-orthogonal codes along a torsion flag.

A code C_e is held through a fixed frame: block i of its generator matrix has
residue rows T_i^(0) spanning Tor_i modulo Tor_(i-1), identity on its own
pivot columns and zero on earlier ones.  Higher Teichmuller digits are the
unknowns.  Entries of T_i under a pivot of a deeper block j only keep digits
below j-i, which makes the parametrisation one-to-one on codes.

Going from level l-2 to level l adds two digit layers to the unit blocks, one
layer to the others and the residue rows of the next block.  The new digits
are fixed by the self-orthogonality and property (P) congruences of C_l,
solved digit position by digit position: once lower positions are settled,
the unknowns entering position d do so additively (Frobenius is additive in
characteristic 2), so every stage is an F_2-linear system.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

from .chain_ring import ChainRing
from .codes import (
    BlockCode,
    CodeChain,
    LinearCodeR,
    LinearCodeT,
    block_presentation,
    check_chain_conditions,
    f,
    property_P_conditions,
    satisfies_property_P,
)
from .enumeration import ChainConditionError, is_symmetric_type
from .linalg import Row, arith, rref, subspaces_between

Slot = tuple[int, int, int]  # (row, column, digit layer)


class LiftError(RuntimeError):
    pass


class ExistenceFailure(LiftError):
    """A lifting system has no solution."""

    def __init__(self, message: str, level: int | None = None, regime: str | None = None, clauses: Sequence[str] = ()):
        self.level = level
        self.regime = regime
        self.clauses = tuple(clauses)
        super().__init__(message)


class WrongMode(ValueError):
    pass


# systems of digit congruences


@dataclass(frozen=True)
class LiftSystem:
    """Unknown Teichmuller digits added to fixed rows, subject to digit conditions.

    ``constraints`` holds triples (a, b, digits): pi_d(<row_a, row_b>) = 0 in
    R_e for every d in digits.  A slot (r, c, k) adds t*u^k to entry c of row
    r, where t ranges over T_m; that digit of the fixed row must be zero.
    """

    ring: ChainRing
    rows: tuple[Row, ...]
    slots: tuple[Slot, ...]
    constraints: tuple[tuple[int, int, tuple[int, ...]], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        q, e = self.ring.q, self.ring.e
        if len(set(self.slots)) != len(self.slots):
            raise ValueError("duplicate slot")
        n = len(self.rows[0]) if self.rows else 0
        for r, c, k in self.slots:
            if not (0 <= r < len(self.rows) and 0 <= c < n and 0 <= k < e):
                raise ValueError(f"slot {(r, c, k)} outside the layout")
            if (self.rows[r][c] // q**k) % q:
                raise ValueError(f"slot {(r, c, k)} overlaps a fixed digit")
        for a, b, ds in self.constraints:
            if not (0 <= a < len(self.rows) and 0 <= b < len(self.rows)):
                raise ValueError("constraint refers to a missing row")
            if any(not 0 <= d < e for d in ds):
                raise ValueError("constraint digit outside 0..e-1")
        if self.labels and len(self.labels) != len(self.slots):
            raise ValueError("one label per slot")

    def substitute(self, values: Sequence[int]) -> list[list[int]]:
        q = self.ring.q
        rows = [list(r) for r in self.rows]
        for (r, c, k), t in zip(self.slots, values):
            rows[r][c] += t * q**k
        return rows

    def violations(self, values: Sequence[int]) -> list[tuple[int, int, int]]:
        """Conditions that fail after substituting ``values`` (direct evaluation)."""
        ar = arith(self.ring)
        q, e = self.ring.q, self.ring.e
        rows = self.substitute(values)
        bad = []
        for a, b, ds in self.constraints:
            x = ar.dot(rows[a], rows[b], e)
            bad.extend((a, b, d) for d in ds if (x // q**d) % q)
        return bad


def _gf2_solve(cols: Sequence[int], rhs: int) -> tuple[int, list[int]] | None:
    """Solve sum x_i cols[i] = rhs over F_2 (vectors as ints); None when inconsistent."""
    nv = len(cols)
    eqs: dict[int, tuple[int, int]] = {}  # pivot variable -> (mask, rhs bit)
    width = max([c.bit_length() for c in cols] + [rhs.bit_length(), 0])
    rows = []
    for j in range(width):
        mask = 0
        for i, c in enumerate(cols):
            if (c >> j) & 1:
                mask |= 1 << i
        rows.append((mask, (rhs >> j) & 1))
    for mask, bit in rows:
        for p, (pm, pb) in eqs.items():
            if (mask >> p) & 1:
                mask ^= pm
                bit ^= pb
        if mask == 0:
            if bit:
                return None
            continue
        p = mask.bit_length() - 1
        for q_, (qm, qb) in list(eqs.items()):
            if (qm >> p) & 1:
                eqs[q_] = (qm ^ mask, qb ^ bit)
        eqs[p] = (mask, bit)
    part = 0
    for p, (_, bit) in eqs.items():
        if bit:
            part |= 1 << p
    kernel = []
    for i in range(nv):
        if i in eqs:
            continue
        v = 1 << i
        for p, (pm, _) in eqs.items():
            if (pm >> i) & 1:
                v |= 1 << p
        kernel.append(v)
    return part, kernel


@dataclass
class LiftSolution:
    system: LiftSystem
    consistent: bool
    stages: list[dict] = dc_field(default_factory=list)
    _solver: "_Solver | None" = dc_field(default=None, repr=False)

    @cached_property
    def dim_bits(self) -> int | None:
        """log_2 of the number of solutions when that is an integer."""
        c = self.count()
        return c.bit_length() - 1 if c and c & (c - 1) == 0 else None

    @property
    def dim(self) -> float | None:
        """Dimension over T_m (may be fractional when dim_bits is not a multiple of m)."""
        if self.dim_bits is None:
            return None
        m = self.system.ring.m
        return self.dim_bits // m if self.dim_bits % m == 0 else self.dim_bits / m

    def solutions(self, rng: random.Random | None = None) -> Iterator[tuple[int, ...]]:
        if not self.consistent:
            return iter(())
        return self._solver.walk(rng)

    def count(self) -> int:
        if not self.consistent:
            return 0
        if "_count" not in self.__dict__:
            self.__dict__["_count"] = self._solver.count()
        return self.__dict__["_count"]


class _Solver:
    BRUTE_LIMIT = 1 << 16

    def __init__(self, sys: LiftSystem, check_affine: bool = True):
        self.sys = sys
        self.ring = sys.ring
        self.ar = arith(sys.ring)
        self.q, self.m, self.e = sys.ring.q, sys.ring.m, sys.ring.e
        self.check_affine = check_affine
        by_digit: dict[int, list[tuple[int, int]]] = {}
        for a, b, ds in sys.constraints:
            for d in ds:
                by_digit.setdefault(d, []).append((a, b))
        self.digits = sorted(by_digit)
        self.pairs = [by_digit[d] for d in self.digits]
        # slots that can influence position d of a pair: same rows, layer <= d
        self.reach = []
        for d, prs in zip(self.digits, self.pairs):
            rows = {r for p in prs for r in p}
            self.reach.append([i for i, (r, _, k) in enumerate(sys.slots) if r in rows and k <= d])
        touched = {i for rs in self.reach for i in rs}
        self.free = [i for i in range(len(sys.slots)) if i not in touched]
        self.stage_log: list[dict] = []

    # evaluation
    def _eval(self, rows: list[list[int]], t: int) -> int:
        d = self.digits[t]
        q, e, ar = self.q, self.e, self.ar
        out = 0
        for j, (a, b) in enumerate(self.pairs[t]):
            x = ar.dot(rows[a], rows[b], e)
            out |= ((x // q**d) % q) << (self.m * j)
        return out

    def _with(self, rows, assign: dict[int, int], t: int) -> int:
        q = self.q
        touched = []
        for i, v in assign.items():
            if v:
                r, c, k = self.sys.slots[i]
                rows[r][c] += v * q**k
                touched.append((r, c, v * q**k))
        try:
            return self._eval(rows, t)
        finally:
            for r, c, dv in touched:
                rows[r][c] -= dv

    def _stage(self, rows, pending: list[int], t: int, rng: random.Random | None):
        """Solutions at position t as (assignment, still-pending slots)."""
        m = self.m
        base = self._with(rows, {}, t)
        cols = []
        for i in pending:
            for b in range(m):
                cols.append(self._with(rows, {i: 1 << b}, t) ^ base)
        involved = [i for j, i in enumerate(pending) if any(cols[j * m + b] for b in range(m))]
        later = [i for i in pending if i not in involved]
        # deferring a slot is only sound when no cross term involves it, so test affinity on all of them
        if self.check_affine and pending and not self._affine(rows, pending, cols, base, t, rng):
            yield from self._brute(rows, pending, [], t)
            return
        if not involved:
            if base:
                return
            yield {}, later
            return
        icols = [cols[pending.index(i) * m + b] for i in involved for b in range(m)]
        sol = _gf2_solve(icols, base)
        if sol is None:
            return
        part, kernel = sol
        self.stage_log.append({"position": self.digits[t], "unknowns": len(involved), "kernel_bits": len(kernel)})
        total = 1 << len(kernel)
        mask = rng.randrange(total) if rng else 0
        for c in range(total):
            c ^= mask
            x = part
            for j, kv in enumerate(kernel):
                if (c >> j) & 1:
                    x ^= kv
            yield {i: (x >> (j * m)) & ((1 << m) - 1) for j, i in enumerate(involved)}, later

    def _affine(self, rows, involved, icols, base, t, rng) -> bool:
        m = self.m
        nb = len(icols)
        picks: list[int] = []
        if nb <= 12:
            picks.extend((1 << a) | (1 << b) for a in range(nb) for b in range(a + 1, nb))
        r = rng or random.Random(len(icols) * 7919 + t)
        picks.extend(r.getrandbits(nb) for _ in range(6))
        for x in picks:
            pred = base
            for j in range(nb):
                if (x >> j) & 1:
                    pred ^= icols[j]
            assign = {i: (x >> (j * m)) & ((1 << m) - 1) for j, i in enumerate(involved)}
            if self._with(rows, assign, t) != pred:
                return False
        return True

    def _brute(self, rows, involved, later, t):
        if self.q ** len(involved) > self.BRUTE_LIMIT:
            raise LiftError(f"non-additive stage at position {self.digits[t]} with {len(involved)} unknowns")
        for vals in product(range(self.q), repeat=len(involved)):
            assign = dict(zip(involved, vals))
            if self._with(rows, assign, t) == 0:
                yield assign, later

    # traversal
    def _dfs(self, rows, t: int, pending: list[int], assigned: dict[int, int], rng):
        if t == len(self.digits):
            yield dict(assigned), pending
            return
        new = [i for i in self.reach[t] if i not in assigned and i not in pending]
        cur = pending + new
        q = self.q
        for assign, later in self._stage(rows, cur, t, rng):
            for i, v in assign.items():
                r, c, k = self.sys.slots[i]
                rows[r][c] += v * q**k
            assigned.update(assign)
            yield from self._dfs(rows, t + 1, later, assigned, rng)
            for i, v in assign.items():
                r, c, k = self.sys.slots[i]
                rows[r][c] -= v * q**k
                del assigned[i]

    def _leaves(self, rng=None):
        rows = [list(r) for r in self.sys.rows]
        for assigned, pending in self._dfs(rows, 0, [], {}, rng):
            vals = [0] * len(self.sys.slots)
            for i, v in assigned.items():
                vals[i] = v
            if self.sys.violations(vals):
                raise LiftError("solver produced an assignment that fails substitution")
            yield vals, pending + self.free

    def walk(self, rng: random.Random | None = None) -> Iterator[tuple[int, ...]]:
        q = self.q
        for vals, free in self._leaves(rng):
            offs = [rng.randrange(q) for _ in free] if rng else [0] * len(free)
            for combo in product(range(q), repeat=len(free)):
                for i, v, o in zip(free, combo, offs):
                    vals[i] = v ^ o
                yield tuple(vals)

    def count(self, limit: int | None = None) -> int:
        total = 0
        for _, free in self._leaves():
            total += self.q ** len(free)
            if limit is not None and total >= limit:
                break
        return total

    def first(self):
        for leaf in self._leaves():
            return leaf
        return None


def solve_lift_system(sys: LiftSystem) -> LiftSolution:
    """Decide consistency by staged elimination; solutions are enumerated lazily."""
    solver = _Solver(sys)
    leaf = solver.first()
    return LiftSolution(sys, leaf is not None, list(solver.stage_log), solver)


# frames and level reduction


def gamma(ring: ChainRing, level: int) -> int:
    return ring.s - f(level)


def block_length(ring: ChainRing, level: int, i: int) -> int:
    """Number of digits T_i keeps inside C_l (0 when the block is not present yet)."""
    g = gamma(ring, level)
    if i <= g + 1:
        return level
    if i <= g + level:
        return level - (i - g - 1)
    return 0


def reduce_to_level(B: BlockCode, level: int) -> BlockCode:
    """The code C_l attached to a level-e block presentation (blocks truncated)."""
    ring = B.ring
    if B.level != ring.e:
        raise ValueError("reduction starts from a level-e presentation")
    q = ring.q
    blocks = []
    for i in range(1, gamma(ring, level) + level + 1):
        L = block_length(ring, level, i)
        blocks.append(tuple(tuple(x % q**L for x in r) for r in B.blocks[i - 1]))
    return BlockCode(ring, level, B.n, tuple(blocks))


def block_self_orthogonal(B: BlockCode) -> bool:
    ring = B.ring
    ar = arith(ring)
    q, l = ring.q, B.level
    rows = [(B.shift(i), r) for i, blk in enumerate(B.blocks, start=1) for r in blk]
    for a, (sa, ra) in enumerate(rows):
        for sb, rb in rows[a:]:
            ex = l - sa - sb
            if ex > 0 and ar.dot(ra, rb, ring.e) % q**ex:
                return False
    return True


@dataclass(frozen=True)
class Frame:
    """Residue rows and pivot columns of every block, fixed by a full torsion flag."""

    ring: ChainRing
    n: int
    flag: tuple[LinearCodeT, ...]
    heads: tuple[tuple[Row, ...], ...]
    pivots: tuple[tuple[int, ...], ...]

    @classmethod
    def from_flag(cls, ring: ChainRing, flag: Sequence[LinearCodeT]) -> "Frame":
        if len(flag) != ring.e:
            raise ValueError(f"a full flag has {ring.e} members")
        fld = ring.field
        n = flag[0].n
        heads: list[tuple[Row, ...]] = []
        pivots: list[tuple[int, ...]] = []
        for i, D in enumerate(flag):
            if i and not flag[i - 1] <= D:
                raise ValueError("flag is not nested")
            vecs = []
            for v in D.basis:
                v = list(v)
                for blk, piv in zip(heads, pivots):
                    for row, p in zip(blk, piv):
                        if v[p]:
                            c = v[p]
                            v = [x ^ fld.mul(c, y) for x, y in zip(v, row)]
                vecs.append(v)
            basis, piv = rref(fld, [v for v in vecs if any(v)], n)
            heads.append(basis)
            pivots.append(piv)
        return cls(ring, n, tuple(flag), tuple(heads), tuple(pivots))

    def cap(self, i: int, c: int) -> int:
        """Digits of T_i allowed at column c (layer 0 included)."""
        for j, piv in enumerate(self.pivots, start=1):
            if c in piv:
                return 1 if j <= i else j - i
        return self.ring.e - i + 1

    @property
    def lam(self) -> tuple[int, ...]:
        return tuple(len(h) for h in self.heads)


def full_flags(chain: CodeChain) -> Iterator[tuple[LinearCodeT, ...]]:
    """Extend Tor_1..Tor_(s+theta) by every admissible choice of the deeper torsion codes."""
    ring = chain.ring
    e, n, fld = ring.e, chain.n, ring.field
    Lam = [0]
    for x in chain.lam:
        Lam.append(Lam[-1] + x)
    top = ring.s + ring.theta

    def rec(flag: list[LinearCodeT]):
        a = len(flag) + 1
        if a > e:
            yield tuple(flag)
            return
        outer = flag[e - a].dual()  # Tor_(e+1-a), which lies in the chain
        for basis in subspaces_between(fld, flag[-1].basis, outer.basis, Lam[a], n):
            flag.append(LinearCodeT.span(fld, basis, n))
            yield from rec(flag)
            flag.pop()

    yield from rec(list(chain.spaces[:top]))


# step plans


@dataclass(frozen=True)
class LiftStepPlan:
    regime: str
    rule: str
    level: int
    gamma: int
    dims: dict = dc_field(default_factory=dict, compare=False)


def default_mode(ring: ChainRing) -> str:
    return "X" if 2 * ring.kappa <= ring.e or ring.e == 2 else "Y"


def _check_mode(ring: ChainRing, mode: str) -> None:
    e, k = ring.e, ring.kappa
    if k % 2:
        raise WrongMode("lifting needs an even kappa")
    if mode == "X" and not (2 * k <= e or e == k == 2):
        raise WrongMode("mode X needs 2*kappa <= e")
    if mode == "Y" and (2 * k <= e or e == 2):
        raise WrongMode("mode Y needs 2*kappa > e")
    if mode not in ("X", "Y"):
        raise WrongMode(f"unknown mode {mode!r}")


def _regime(ring: ChainRing, mode: str, l: int) -> tuple[str, str]:
    e, k = ring.e, ring.kappa
    base = 2 if e % 2 == 0 else 3
    if l == base:
        if e == 2:
            return "base-e2", "base:e=k=2"
        if e % 2 == 0:
            return "base-e2-P", "base:even"
        if e == 3:
            return "base-e3-plain", "base:e=3"
        return ("base-e3-κ2", "base:odd-k2") if k == 2 else ("base-e3-κ≥4", "base:odd-k4")
    if mode == "X":
        if l <= k:
            return "step-ℓ≤κ or ℓ≤e−κ", "X:low"
        if e % 2 and l == k + 1:
            return "step-κ+1-odd-e", "X:k+1"
        if e % 2 == 0 and l == k + 2:
            return "step-κ+2-even-e", "X:k+2"
        if l <= e - k + 1:
            return "step-middle-2κ≤e", "X:middle"
        return "step-tail", "X:tail"
    if l <= e - k:
        return "step-ℓ≤κ or ℓ≤e−κ", "Y:low"
    if l <= k - f(2 * k - e) + 1:
        return "step-middle-2κ>e", "Y:middle"
    return "step-tail", "Y:tail"


def plan_steps(ring: ChainRing, mode: str | None = None, lam: Sequence[int] | None = None) -> list[LiftStepPlan]:
    mode = mode or default_mode(ring)
    _check_mode(ring, mode)
    e = ring.e
    Lam = None
    if lam is not None:
        Lam = [0]
        for x in lam:
            Lam.append(Lam[-1] + x)
    plans = []
    for l in range(2 if e % 2 == 0 else 3, e + 1, 2):
        regime, rule = _regime(ring, mode, l)
        g = gamma(ring, l)
        dims = {}
        if Lam is not None:
            dims = {"Tor1": Lam[g + 1], "type": (Lam[g + 1],) + tuple(lam[g + 1 : g + l])}
        plans.append(LiftStepPlan(regime, rule, l, g, dims))
    return plans


# lifting states


@dataclass(frozen=True)
class LiftState:
    frame: Frame
    level: int
    blocks: tuple[tuple[Row, ...], ...]

    @property
    def ring(self) -> ChainRing:
        return self.frame.ring

    def block_code(self) -> BlockCode:
        return BlockCode(self.ring, self.level, self.frame.n, self.blocks)

    def code(self) -> LinearCodeR:
        return self.block_code().code()


def _system(frame: Frame, prev: LiftState | None, level: int) -> tuple[LiftSystem, list[tuple[int, int]]]:
    ring = frame.ring
    q, n = ring.q, frame.n
    g_new = gamma(ring, level)
    nblocks = g_new + level
    rows: list[Row] = []
    where: list[tuple[int, int]] = []  # (block, row within block)
    slots: list[Slot] = []
    for i in range(1, nblocks + 1):
        old = prev.blocks[i - 1] if prev is not None and i <= len(prev.blocks) else frame.heads[i - 1]
        lo = block_length(ring, prev.level, i) if prev is not None else 0
        lo = max(lo, 1)
        hi = block_length(ring, level, i)
        for j, r in enumerate(old):
            idx = len(rows)
            rows.append(tuple(r))
            where.append((i, j))
            for c in range(n):
                for k in range(lo, min(hi, frame.cap(i, c))):
                    slots.append((idx, c, k))
    shifts = [max(0, i - g_new - 1) for i, _ in where]
    digits: dict[tuple[int, int], set[int]] = {}
    for a in range(len(rows)):
        for b in range(a, len(rows)):
            ex = level - shifts[a] - shifts[b]
            if ex > 0:
                digits.setdefault((a, b), set()).update(range(ex))
    conds = property_P_conditions(ring, level)
    for k, ex in conds.congruences:
        for a, (i, _) in enumerate(where):
            if i <= k:
                digits.setdefault((a, a), set()).update(range(ex))
    for k, d in conds.digits:
        for a, (i, _) in enumerate(where):
            if i <= k:
                digits.setdefault((a, a), set()).add(d)
    cons = tuple((a, b, tuple(sorted(ds))) for (a, b), ds in sorted(digits.items()))
    labels = tuple(f"T{where[r][0]}[{where[r][1]}]c{c}u{k}" for r, c, k in slots)
    return LiftSystem(ring, tuple(rows), tuple(slots), cons, labels), where


def _states(frame: Frame, sys: LiftSystem, where, level: int, sol: LiftSolution, rng) -> Iterator[LiftState]:
    nblocks = gamma(frame.ring, level) + level
    for vals in sol.solutions(rng):
        rows = sys.substitute(vals)
        blocks: list[list[Row]] = [[] for _ in range(nblocks)]
        for (i, _), r in zip(where, rows):
            blocks[i - 1].append(tuple(r))
        yield LiftState(frame, level, tuple(tuple(b) for b in blocks))


def _failing_clauses(chain: CodeChain | None) -> tuple[str, ...]:
    if chain is None:
        return ()
    chk = check_chain_conditions(chain)
    return tuple(k for k, ok in chk.clauses.items() if not ok)


def lift_base(frame: Frame, plan: LiftStepPlan, rng: random.Random | None = None, chain: CodeChain | None = None) -> Iterator[LiftState]:
    """Level-2 or level-3 codes with the frame's residue rows, SO and satisfying (P)."""
    sys, where = _system(frame, None, plan.level)
    sol = solve_lift_system(sys)
    if not sol.consistent:
        raise ExistenceFailure(f"no base code at level {plan.level} ({plan.regime})", plan.level, plan.regime, _failing_clauses(chain))
    return _states(frame, sys, where, plan.level, sol, rng)


def lift_step(prev: LiftState, plan: LiftStepPlan, d_prime: LinearCodeT | None = None, rng: random.Random | None = None, chain: CodeChain | None = None) -> Iterator[LiftState]:
    """All lifts of C_(l-2) to SO codes C_l with property (P) and Tor_1(C_l) = D'."""
    frame = prev.frame
    if plan.level != prev.level + 2:
        raise ValueError("a step raises the level by two")
    g = plan.gamma
    if d_prime is not None and d_prime != frame.flag[g]:
        raise ValueError("D' must be the flag member Tor_(gamma+1)")
    sys, where = _system(frame, prev, plan.level)
    sol = solve_lift_system(sys)
    if not sol.consistent:
        raise ExistenceFailure(f"no lift to level {plan.level} ({plan.regime})", plan.level, plan.regime, _failing_clauses(chain))
    return _states(frame, sys, where, plan.level, sol, rng)


# full pipeline


def _pipeline(frame: Frame, plans: list[LiftStepPlan], rng, chain) -> Iterator[LiftState]:
    def rec(state: LiftState, t: int):
        if t == len(plans):
            yield state
            return
        for nxt in lift_step(state, plans[t], rng=rng, chain=chain):
            yield from rec(nxt, t + 1)

    for base in lift_base(frame, plans[0], rng, chain):
        yield from rec(base, 1)


def _validate_chain(chain: CodeChain) -> None:
    chk = check_chain_conditions(chain)
    if not chk.ok:
        raise ChainConditionError([k for k, ok in chk.clauses.items() if not ok])


def construct_states(chain: CodeChain, mode: str | None = None, rng: random.Random | None = None, check: bool = True) -> Iterator[LiftState]:
    """Every lift of the chain.  ``check=False`` skips the admissibility test, leaving the solver to find out."""
    ring = chain.ring
    if check:
        _validate_chain(chain)
    plans = plan_steps(ring, mode, chain.lam)
    flags = list(full_flags(chain))
    if rng is not None:
        rng.shuffle(flags)
    for flag in flags:
        yield from _pipeline(Frame.from_flag(ring, flag), plans, rng, chain)


@dataclass
class Construction:
    code: LinearCodeR
    steps: list[dict]
    certificate: dict


def sample_construction(chain: CodeChain, mode: str | None = None, seed: int | None = None, count_limit: int = 1 << 16, check: bool = True) -> Construction:
    """One random lift with a per-step report (regime, unknowns, solutions)."""
    ring = chain.ring
    if check:
        _validate_chain(chain)
    rng = random.Random(seed)
    plans = plan_steps(ring, mode, chain.lam)
    flags = list(full_flags(chain))
    rng.shuffle(flags)
    for flag in flags:
        frame = Frame.from_flag(ring, flag)
        state = None
        steps = []
        for plan in plans:
            sys, where = _system(frame, state, plan.level)
            sol = solve_lift_system(sys)
            n_sol = sol._solver.count(count_limit) if sol.consistent else 0
            steps.append(
                {
                    "level": plan.level,
                    "gamma": plan.gamma,
                    "regime": plan.regime,
                    "rule": plan.rule,
                    "unknowns": len(sys.slots),
                    "solutions": n_sol if n_sol < count_limit else f">={count_limit}",
                    "consistent": sol.consistent,
                }
            )
            if not sol.consistent:
                raise ExistenceFailure(f"no lift to level {plan.level} ({plan.regime})", plan.level, plan.regime, _failing_clauses(chain))
            state = next(_states(frame, sys, where, plan.level, sol, rng))
        code = state.code()
        return Construction(code, steps, certificate(code, chain))
    raise ExistenceFailure("no code lifts this chain")


def construct(chain: CodeChain, mode: str | None = None, strategy: str = "sample", seed: int | None = None, limit: int | None = None):
    """A certified SO code (sample) or an iterator over all distinct ones (enumerate)."""
    if strategy == "sample":
        rng = random.Random(seed)
        for st in construct_states(chain, mode, rng):
            return st.code()
        raise ExistenceFailure("no code lifts this chain")
    if strategy != "enumerate":
        raise ValueError("strategy is 'sample' or 'enumerate'")

    def gen():
        seen = set()
        for st in construct_states(chain, mode):
            code = st.code()
            if code.key in seen:
                continue
            seen.add(code.key)
            yield code
            if limit is not None and len(seen) >= limit:
                return

    return gen()


def certificate(code: LinearCodeR, chain: CodeChain) -> dict:
    """Self-orthogonality, torsion agreement and (P) at every intermediate level."""
    ring = chain.ring
    e = ring.e
    top = ring.s + ring.theta
    torsion = [code.torsion(i) == chain.spaces[i - 1] for i in range(1, top + 1)]
    B = block_presentation(code)
    per_level = []
    for l in range(2 if e % 2 == 0 else 3, e + 1, 2):
        C_l = reduce_to_level(B, l)
        per_level.append({"level": l, "self_orthogonal": block_self_orthogonal(C_l), "property_P": satisfies_property_P(C_l)})
    cert = {"self_orthogonal": code.is_self_orthogonal(), "torsion_match": torsion, "property_P_per_level": per_level}
    if is_symmetric_type(chain.n, chain.lam):
        cert["self_dual"] = code.is_self_dual()
    return cert
