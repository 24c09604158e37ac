"""Closed-form counts of self-orthogonal and self-dual codes by type.

All arithmetic is exact.  Products of ratios are accumulated as ``Fraction``
and must collapse to an integer; anything else raises ``InexactCount``.

Case splits (the S_theta dispatch, the per-chain (epsilon, mu) weights) are
stored as ordered rule tables: the first row whose predicate holds decides.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator, Sequence

from .chain_ring import ChainRing, OddKappaError
from .codes import CodeChain, check_chain_conditions, eta_three_halves, f, type_feasible
from .linalg import gaussian_binomial


class FormulaInapplicable(ValueError):
    """The requested count is outside the hypotheses of every closed formula."""


class InexactCount(ArithmeticError):
    pass


class ChainConditionError(ValueError):
    def __init__(self, failed: Sequence[str]):
        self.failed = tuple(failed)
        super().__init__("chain violates " + ", ".join(self.failed))


def _exact(x: Fraction | int) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise InexactCount(f"non-integral count {x}")
    return int(x)


@dataclass(frozen=True)
class CountContext:
    ring: ChainRing
    n: int
    lam: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.ring.kappa % 2:
            raise OddKappaError("counting formulas need an even kappa")
        if len(self.lam) != self.ring.e:
            raise ValueError(f"type must have {self.ring.e} entries, got {len(self.lam)}")
        if self.n < 0 or any(x < 0 for x in self.lam):
            raise ValueError("n and the type entries must be non-negative")
        object.__setattr__(self, "lam", tuple(int(x) for x in self.lam))

    @classmethod
    def make(cls, ring: ChainRing, n: int, lam: Sequence[int]) -> "CountContext":
        return cls(ring, n, tuple(lam))

    # ring constants
    @property
    def e(self) -> int:
        return self.ring.e

    @property
    def kappa(self) -> int:
        return self.ring.kappa

    @property
    def k1(self) -> int:
        return self.ring.kappa1

    @property
    def s(self) -> int:
        return self.ring.s

    @property
    def th(self) -> int:
        return self.ring.theta

    @property
    def m(self) -> int:
        return self.ring.m

    @property
    def Q(self) -> int:
        return 2**self.ring.m

    @property
    def top(self) -> int:
        """Length s + theta_e of the torsion chain."""
        return self.s + self.th

    @property
    def r8(self) -> int:
        return self.n % 8

    @property
    def small_kappa(self) -> bool:
        """2 kappa <= e."""
        return 2 * self.kappa <= self.e

    # type profile
    def Lam(self, i: int) -> int:
        if i <= 0:
            return 0
        if i > self.e:
            return self.n
        return sum(self.lam[:i])

    def la(self, i: int) -> int:
        if i == self.e + 1:
            return self.n - self.Lam(self.e)
        return self.lam[i - 1]

    # eta-derived quantities
    def eta(self, i: int) -> int:
        if self.ring.eta is None:
            raise FormulaInapplicable("the ring has characteristic 2; the eta-dependent case split does not apply")
        eta = self.ring.eta
        return eta[i] if 0 <= i < len(eta) else 0

    @cached_property
    def eta32(self) -> int:
        if self.ring.eta is None:
            raise FormulaInapplicable("eta_0^(3/2) is undefined in characteristic 2")
        return eta_three_halves(self.ring)

    def odd_etas_vanish(self, upto: int) -> bool:
        return all(self.eta(2 * j - 1) == 0 for j in range(1, upto + 1))

    def _vartheta(self, bound: int) -> int:
        t = 0
        while t < bound and self.eta(2 * t + 1) == 0:
            t += 1
        return t

    @cached_property
    def vartheta1(self) -> int:
        return self._vartheta(f(self.k1))

    @cached_property
    def vartheta2(self) -> int:
        return self._vartheta(min(f(self.k1), self.e - self.kappa))

    @cached_property
    def eps1(self) -> int:
        ok = self.kappa % 4 == 2 and self.odd_etas_vanish(f(self.k1)) and self.eta(self.k1) == self.eta32
        return int(ok)

    @cached_property
    def eps2(self) -> int:
        return int(bool(self.eps1) and 2 * self.e >= 3 * self.kappa + 2 + 2 * self.th)

    @property
    def feasible(self) -> bool:
        return type_feasible(self.n, self.lam, self.e)


# products that recur in every chain count


def _qb(ctx: CountContext, a: int, b: int) -> int:
    return gaussian_binomial(a, b, ctx.Q)


def _ratio(ctx: CountContext, num_exp: int, den_exp: int) -> Fraction:
    return (Fraction(ctx.Q) ** num_exp - 1) / (ctx.Q**den_exp - 1)


def _odd_iso(ctx: CountContext, L: int) -> Fraction:
    """Totally isotropic L-spaces when n is odd."""
    out = Fraction(1)
    for i in range(L):
        out *= _ratio(ctx, ctx.n - 1 - 2 * i, i + 1)
    return out


def _head(ctx: CountContext, k: int) -> Fraction:
    """prod_{j=0}^{k-2} (Q^(n-2-2j) - 1)/(Q^(j+1) - 1)."""
    out = Fraction(1)
    for j in range(k - 1):
        out *= _ratio(ctx, ctx.n - 2 - 2 * j, j + 1)
    return out


def _tail(ctx: CountContext, K: int) -> Fraction:
    """prod_{g=K}^{L-1} (Q^(n-2g) - 1)/(Q^(g+1-K) - 1) with L = Lambda_(s+theta)."""
    out = Fraction(1)
    for g in range(K, ctx.Lam(ctx.top)):
        out *= _ratio(ctx, ctx.n - 2 * g, g + 1 - K)
    return out


def _flag(ctx: CountContext, lo: int, hi: int, shift: int = 0) -> int:
    out = 1
    for j in range(lo, hi + 1):
        out *= _qb(ctx, ctx.Lam(j) - shift, ctx.la(j))
    return out


def S_tilde(ctx: CountContext, k: int) -> int:
    """Self-orthogonal k-dimensional subspaces of T_m^n."""
    if ctx.n % 2:
        return _exact(_odd_iso(ctx, k))
    if k == 0:
        return 1
    return _exact(_ratio(ctx, ctx.n - k, k) * _head(ctx, k))


# chain counts


def _bee(ctx: CountContext) -> int:
    n = ctx.n
    P = ctx.Lam(ctx.s - ctx.k1)
    L = ctx.Lam(ctx.top)
    Q = ctx.Q
    if n % 2:
        return _exact(_odd_iso(ctx, L) * _flag(ctx, 1, ctx.top))
    if L == 0:
        return 1
    if P == 0:
        return _exact(_head(ctx, L) * _ratio(ctx, n - L, L) * _flag(ctx, ctx.s - ctx.k1 + 1, ctx.top))
    if L == P:
        return _exact(_head(ctx, P) * Fraction(Q ** (n - P) - Q**P, Q**P - 1) * _flag(ctx, 1, ctx.s - ctx.k1))
    mid = Fraction(1)
    for l in range(P, L - 1):
        mid *= _ratio(ctx, n - 2 * l - 2, l + 1 - P)
    # D^(top) / D^(s-k1) is isotropic in a symplectic (n-2P-2)-space plus the radical <1>
    top = Fraction(Q**P * (Q ** (n - 2 * P) - 1) * (Q ** (n - L - P) - 1), (Q**P - 1) * (Q ** (L - P) - 1))
    grass = _flag(ctx, 1, ctx.s - ctx.k1) * _flag(ctx, ctx.s - ctx.k1 + 1, ctx.top, shift=P)
    return _exact(_head(ctx, P) * mid * grass * top)


def first_one_count(ctx: CountContext, P: int) -> int:
    """Chains with the all-ones vector in D^(P+1) but not in D^(P)."""
    if P + 1 < 1 or P + 1 > ctx.top or ctx.n % 2:
        return 0
    K = ctx.Lam(P + 1)
    if K == 0:
        return 0
    lead = ctx.Q ** ctx.Lam(P) * _qb(ctx, K - 1, ctx.Lam(P))
    grass = _flag(ctx, 1, P) * _flag(ctx, P + 2, ctx.top, shift=K)
    return _exact(lead * grass * _head(ctx, K) * _tail(ctx, K))


def _ex(ctx: CountContext) -> int:
    c = ctx.s - ctx.kappa + ctx.th
    K = ctx.Lam(c)
    if K == 0 or ctx.n % 2:
        return 0
    grass = _flag(ctx, 1, c) * _flag(ctx, c + 1, ctx.top, shift=K)
    return _exact(grass * _head(ctx, K) * _tail(ctx, K))


def _zed(ctx: CountContext) -> int:
    K = ctx.Lam(1)
    if K == 0 or ctx.n % 2:
        return 0
    return _exact(_head(ctx, K) * _tail(ctx, K) * _flag(ctx, 2, ctx.top, shift=K))


def _omega_bound(ctx: CountContext) -> int:
    return ctx.k1 - ctx.th if ctx.small_kappa else ctx.s - ctx.k1 - 1


def _delta_bound(ctx: CountContext) -> int:
    return f(ctx.k1) if ctx.small_kappa else min(ctx.e - ctx.kappa, f(ctx.k1))


def _y_allowed(ctx: CountContext) -> bool:
    if ctx.small_kappa:
        shape = (ctx.kappa >= 4 and ctx.kappa % 4 == 2) or (ctx.kappa == 2 and ctx.e % 2 == 0)
    else:
        shape = ctx.kappa % 4 == 2 and 2 * ctx.e >= 3 * ctx.kappa + 2 + 2 * ctx.th
    return shape and ctx.eta(ctx.k1) == ctx.eta32 and ctx.odd_etas_vanish(f(ctx.k1 - 1))


def chain_count(kind: str, ctx: CountContext, param: int | None = None) -> int:
    """Number of admissible torsion chains of one category.

    ``kind`` is one of ``B``, ``D_omega``, ``X``, ``Z``, ``W_delta``, ``Y``;
    ``param`` carries omega or delta where needed.
    """
    r8 = ctx.r8
    if kind == "B":
        return _bee(ctx)
    if kind == "D_omega":
        if r8 not in (0, 4) or param is None or not 1 <= param <= _omega_bound(ctx):
            raise ValueError(f"D_omega needs n = 0,4 mod 8 and 1 <= omega <= {_omega_bound(ctx)}")
        return first_one_count(ctx, ctx.s - ctx.k1 - param)
    if kind == "X":
        if not ctx.small_kappa or not (r8 == 0 or (r8 == 4 and ctx.m % 2 == 0)):
            raise ValueError("X needs 2 kappa <= e and n = 0 mod 8 (or n = 4 mod 8 with m even)")
        return _ex(ctx)
    if kind == "Z":
        if ctx.small_kappa or ctx.e < 4 or r8 not in (0, 4):
            raise ValueError("Z needs e >= 4, 2 kappa > e and n = 0,4 mod 8")
        return _zed(ctx)
    if kind == "W_delta":
        if r8 not in (2, 6) or param is None or not 1 <= param <= _delta_bound(ctx):
            raise ValueError(f"W_delta needs n = 2,6 mod 8 and 1 <= delta <= {_delta_bound(ctx)}")
        if not ctx.odd_etas_vanish(param):
            raise ValueError("W_delta needs eta_(2i-1) = 0 for i <= delta")
        return first_one_count(ctx, ctx.s - ctx.k1 - param)
    if kind == "Y":
        if r8 not in (2, 6) or not _y_allowed(ctx):
            raise ValueError("Y hypotheses do not hold for this ring and length")
        return first_one_count(ctx, ctx.s - ctx.k1 - f(ctx.k1 + 1))
    raise ValueError(f"unknown chain kind {kind!r}")


# S_theta: ordered rule table, first match wins

Rule = tuple[str, Callable[[CountContext], bool], Callable[[CountContext], int]]


def _sum_D(ctx: CountContext, upto: int) -> int:
    return sum(ctx.Q**w * chain_count("D_omega", ctx, w) for w in range(1, upto + 1))


def _sum_W(ctx: CountContext, upto: int) -> int:
    return sum(ctx.Q**d * chain_count("W_delta", ctx, d) for d in range(1, upto + 1))


def _y_term(ctx: CountContext, eps: int) -> int:
    return ctx.Q ** f(ctx.k1 + 1) * chain_count("Y", ctx) if eps else 0


def _n26(c: CountContext) -> bool:
    return c.r8 in (2, 6)


def _n04(c: CountContext) -> bool:
    return c.r8 in (0, 4)


S_THETA_RULES: tuple[Rule, ...] = (
    ("n odd", lambda c: c.n % 2 == 1, _bee),
    ("1 has no admissible position below D^(s-kappa1)", lambda c: c.s - c.k1 <= 0, _bee),
    (
        "n = 0,4 mod 8; 2k <= e; n = 0 mod 8 or m even",
        lambda c: _n04(c) and c.small_kappa and (c.r8 == 0 or c.m % 2 == 0),
        lambda c: _bee(c) + 2 * c.Q**c.k1 * chain_count("X", c) + _sum_D(c, c.k1 - c.th),
    ),
    (
        "n = 4 mod 8; 2k <= e; m odd",
        lambda c: c.r8 == 4 and c.small_kappa and c.m % 2 == 1,
        lambda c: _bee(c) + _sum_D(c, c.k1 - c.th),
    ),
    (
        "n = 0,4 mod 8; 2k > e",
        lambda c: _n04(c) and not c.small_kappa,
        lambda c: _bee(c) + c.Q ** (c.s - c.k1) * chain_count("Z", c) + _sum_D(c, c.s - c.k1 - 1),
    ),
    (
        "n = 2,6 mod 8; B only",
        lambda c: _n26(c)
        and (
            (c.kappa == 2 and c.e % 2 == 1)
            or (c.kappa == 2 and c.e % 2 == 0 and c.eta(1) != c.eta32)
            or (c.kappa >= 4 and c.eta(1) != 0)
            or c.e == c.kappa + 1
        ),
        _bee,
    ),
    (
        "n = 2,6 mod 8; 2k <= e; k = 2; e even; eta_1 = eta_0^(3/2)",
        lambda c: _n26(c) and c.small_kappa and c.kappa == 2 and c.e % 2 == 0 and c.eta(1) == c.eta32,
        lambda c: _bee(c) + c.Q * chain_count("Y", c),
    ),
    (
        "n = 2,6 mod 8; 2k <= e; k >= 4; eta_1 = 0",
        lambda c: _n26(c) and c.small_kappa and c.kappa >= 4 and c.eta(1) == 0,
        lambda c: _bee(c) + _y_term(c, c.eps1) + _sum_W(c, c.vartheta1),
    ),
    (
        "n = 2,6 mod 8; 2k > e; k >= 4; eta_1 = 0",
        lambda c: _n26(c) and not c.small_kappa and c.kappa >= 4 and c.eta(1) == 0,
        lambda c: _bee(c) + _y_term(c, c.eps2) + _sum_W(c, c.vartheta2),
    ),
)


def s_theta_case(ctx: CountContext) -> str:
    for name, pred, _ in S_THETA_RULES:
        if pred(ctx):
            return name
    raise FormulaInapplicable(f"no S_theta case covers e={ctx.e}, kappa={ctx.kappa}, n={ctx.n}")


def S_theta(ctx: CountContext) -> int:
    for _, pred, value in S_THETA_RULES:
        if pred(ctx):
            return value(ctx)
    raise FormulaInapplicable(f"no S_theta case covers e={ctx.e}, kappa={ctx.kappa}, n={ctx.n}")


# exponent and Gaussian factors shared by the type-level and per-chain counts


def _main_exponent(ctx: CountContext) -> int:
    s, th, L = ctx.s, ctx.th, ctx.Lam
    x = sum(L(i) * (ctx.n - L(i + 1)) for i in range(1, s + 1))
    x += sum(L(s + j) * (ctx.n - L(s + j + 1) - L(s - j + th)) for j in range(1, s + th))
    x -= sum(L(a) for a in range(1, s - ctx.k1 + 1))
    x -= (1 - th) * L(s) * (L(s) - 1) // 2
    return x


def _upper_grass(ctx: CountContext) -> int:
    out = 1
    for a in range(ctx.s + 1 + ctx.th, ctx.e + 1):
        out *= _qb(ctx, ctx.la(a) + ctx.n - ctx.Lam(a) - ctx.Lam(ctx.e + 1 - a), ctx.la(a))
    return out


def _check_scope(ctx: CountContext) -> None:
    if ctx.e == 2 and ctx.kappa != 2:
        raise FormulaInapplicable("length-2 chain rings are covered only for kappa = 2")
    if ctx.e == 3 and ctx.kappa != 2:
        raise FormulaInapplicable("e = 3 is covered only for kappa = 2")
    if ctx.e < 2:
        raise FormulaInapplicable("e must be at least 2")


def count_so_type(ctx: CountContext) -> int:
    """Number of self-orthogonal codes of length n and type lam."""
    _check_scope(ctx)
    if not ctx.feasible:
        return 0
    Q, n, L = ctx.Q, ctx.n, ctx.Lam
    if ctx.e == 2:
        l1, l2 = ctx.lam
        exp = l1 * (n - L(2)) - l1 * (l1 - 1) // 2
        return S_tilde(ctx, l1) * Q**exp * _qb(ctx, l2 + n - L(2) - L(1), l2)
    if ctx.e == 3:
        l1, l2, l3 = ctx.lam
        exp = l3 * l1 + (L(1) + L(2)) * (n - L(3) - L(1)) + L(1) ** 2
        return S_tilde(ctx, L(2)) * Q**exp * _qb(ctx, L(2), l1) * _qb(ctx, l3 + n - L(3) - L(1), l3)
    return Q ** _main_exponent(ctx) * S_theta(ctx) * _upper_grass(ctx)


def is_symmetric_type(n: int, lam: Sequence[int]) -> bool:
    e = len(lam)
    ext = list(lam) + [n - sum(lam)]
    return all(ext[j - 1] == ext[e - j + 1] for j in range(1, e + 2))


def count_sd_type(ctx: CountContext) -> int:
    """Number of self-dual codes of length n and type lam."""
    _check_scope(ctx)
    if not ctx.feasible or not is_symmetric_type(ctx.n, ctx.lam):
        return 0
    Q, n, L = ctx.Q, ctx.n, ctx.Lam
    if ctx.e == 2:
        l1 = ctx.lam[0]
        return S_tilde(ctx, l1) * Q ** (l1 * (l1 + 1) // 2)
    if ctx.e == 3:
        l1, l3 = ctx.lam[0], ctx.lam[2]
        return _exact(Q ** (l1 * (l3 + l1)) * _qb(ctx, L(2), l1) * _head(ctx, L(2)))
    s = ctx.s
    exp = sum(L(i) * (n - L(i + 1)) for i in range(1, s + 1))
    exp -= sum(L(a) for a in range(1, s - ctx.k1 + 1))
    exp -= (1 - ctx.th) * L(s) * (L(s) - 1) // 2
    return S_theta(ctx) * Q**exp


# per-chain counts

Weight = tuple[int, int]
WeightRule = tuple[str, Callable[[CountContext, int], bool], Callable[[CountContext, int], Weight]]


def _pos(c: CountContext, p: int) -> int:
    """Offset s - kappa1 - p + 1 of a first-membership index p."""
    return c.s - c.k1 - p + 1


WEIGHTS_SMALL_KAPPA: tuple[WeightRule, ...] = (
    (
        "omega",
        lambda c, p: _n04(c) and 1 <= _pos(c, p) <= c.k1 - c.th,
        lambda c, p: (0, _pos(c, p)),
    ),
    (
        "X",
        lambda c, p: p <= c.s - c.kappa + c.th and (c.r8 == 0 or (c.r8 == 4 and c.m % 2 == 0)),
        lambda c, p: (1, c.k1),
    ),
    (
        "delta",
        lambda c, p: _n26(c) and 1 <= _pos(c, p) <= f(c.k1) and c.odd_etas_vanish(_pos(c, p)),
        lambda c, p: (0, _pos(c, p)),
    ),
    (
        "Y",
        lambda c, p: _n26(c)
        and c.kappa >= 4
        and c.kappa % 4 == 2
        and c.eta(c.k1) == c.eta32
        and c.odd_etas_vanish(f(c.k1 - 1))
        and p == c.s - f(c.k1 + 1) + 1 - c.k1,
        lambda c, p: (0, f(c.k1 + 1)),
    ),
    (
        "Y, kappa = 2",
        lambda c, p: _n26(c) and c.kappa == 2 and c.e % 2 == 0 and c.eta(1) == c.eta32 and p == c.s - c.k1,
        lambda c, p: (0, 1),
    ),
)

WEIGHTS_LARGE_KAPPA: tuple[WeightRule, ...] = (
    (
        "omega",
        lambda c, p: _n04(c) and 1 <= _pos(c, p) <= c.s - c.k1 - 1,
        lambda c, p: (0, _pos(c, p)),
    ),
    ("Z", lambda c, p: _n04(c) and p == 1, lambda c, p: (0, c.s - c.k1)),
    (
        "delta",
        lambda c, p: _n26(c)
        and 1 <= _pos(c, p) <= min(c.e - c.kappa, f(c.k1))
        and c.odd_etas_vanish(_pos(c, p)),
        lambda c, p: (0, _pos(c, p)),
    ),
    (
        "Y",
        lambda c, p: _n26(c)
        and c.kappa % 4 == 2
        and 2 * c.e >= 3 * c.kappa + 2 + 2 * c.th
        and c.odd_etas_vanish(f(c.k1 - 1))
        and c.eta(c.k1) == c.eta32
        and p == c.s - f(c.k1 + 1) + 1 - c.k1,
        lambda c, p: (0, f(c.k1 + 1)),
    ),
)


def first_one_index(chain: CodeChain) -> int | None:
    for i, D in enumerate(chain.spaces, start=1):
        if D.contains_all_ones():
            return i
    return None


def chain_weight(ctx: CountContext, p: int | None) -> Weight:
    """(epsilon, mu) for a chain whose all-ones vector first appears at D^(p)."""
    if p is None or p > ctx.s - ctx.k1:
        return (0, 0)
    rules = WEIGHTS_SMALL_KAPPA if ctx.small_kappa else WEIGHTS_LARGE_KAPPA
    for _, pred, value in rules:
        if pred(ctx, p):
            return value(ctx, p)
    return (0, 0)


def count_with_torsion_chain(chain: CodeChain, n: int | None = None) -> int:
    """Self-orthogonal codes C of type chain.lam with Tor_i(C) = D^(i) for i <= s + theta."""
    n = chain.n if n is None else n
    ctx = CountContext.make(chain.ring, n, chain.lam)
    _check_scope(ctx)
    verdict = check_chain_conditions(chain, n)
    if not verdict.ok:
        raise ChainConditionError([k for k, v in verdict.clauses.items() if not v])
    if not ctx.feasible:
        return 0
    Q, L = ctx.Q, ctx.Lam
    if ctx.e == 2:
        l1, l2 = ctx.lam
        exp = l1 * (n - L(2)) - l1 * (l1 - 1) // 2
        return Q**exp * _qb(ctx, l2 + n - L(2) - L(1), l2)
    if ctx.e == 3:
        l1, l2, l3 = ctx.lam
        exp = l3 * l1 + (L(1) + L(2)) * (n - L(3) - L(1)) + L(1) ** 2
        return Q**exp * _qb(ctx, l3 + n - L(3) - L(1), l3)
    eps, mu = chain_weight(ctx, first_one_index(chain))
    if not ctx.small_kappa:
        eps = 0
    return 2**eps * Q ** (_main_exponent(ctx) + mu) * _upper_grass(ctx)


# aggregates


def iter_types(n: int, e: int) -> Iterator[tuple[int, ...]]:
    """All type profiles of length e whose entries sum to at most n, feasible ones only."""

    def rec(prefix: list[int], left: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == e:
            t = tuple(prefix)
            if type_feasible(n, t, e):
                yield t
            return
        for x in range(left + 1):
            prefix.append(x)
            yield from rec(prefix, left - x)
            prefix.pop()

    yield from rec([], n)


@dataclass(frozen=True)
class Totals:
    so: Counter
    sd: Counter

    @property
    def total_so(self) -> int:
        return sum(self.so.values())

    @property
    def total_sd(self) -> int:
        return sum(self.sd.values())


def total_counts(ring: ChainRing, n: int) -> Totals:
    """Per-type and aggregate SO and SD counts; zero-count types are omitted."""
    so: Counter = Counter()
    sd: Counter = Counter()
    for lam in iter_types(n, ring.e):
        ctx = CountContext(ring, n, lam)
        c = count_so_type(ctx)
        if c:
            so[lam] = c
        d = count_sd_type(ctx)
        if d:
            sd[lam] = d
    return Totals(so, sd)
