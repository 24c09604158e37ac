"""The chain ring R = GR(2^s, m)[x] / <g(x), 2^(s-1) x^t> and its quotients R/u^l.

Elements are held in normal form: a tuple of kappa Galois-ring coefficients
(c_0, ..., c_{kappa-1}), where c_i is reduced mod 2^s for i < t and mod
2^(s-1) for i >= t.  An element of the level-l quotient is stored as the
representative whose Teichmuller digits at positions >= l vanish.

The symbolic normal form is authoritative.  ``RingTables`` is a lookup layer
that indexes every element by its Teichmuller digits
``sum(d_i * q**i)``, so that truncation mod u^l is ``x % q**l`` and
multiplication by u^k is ``(x * q**k) % q**e``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .field_tower import AmbientMismatch, BasicIrreducible, GaloisRing, NotAUnit, TeichElem

NF = tuple[tuple[int, ...], ...]

TABLE_LIMIT_BITS = 12


class InvalidRingSpec(ValueError):
    """The presentation does not define a chain ring in scope."""


class OddKappaError(InvalidRingSpec):
    """Odd ramification degree; handled by the companion odd-kappa theory, not here."""


class LevelMismatch(ValueError):
    """Operands live in different quotients R/u^l."""


@dataclass(frozen=True)
class ChainRingSpec:
    """Raw presentation data as it appears in a ring spec file."""

    s_exp: int
    m: int
    g: tuple[tuple[int, ...], ...]
    t: int
    irreducible: tuple[int, ...] | None = None

    @classmethod
    def from_json(cls, obj: dict[str, Any] | str | Path) -> "ChainRingSpec":
        if isinstance(obj, Path) or (isinstance(obj, str) and not obj.lstrip().startswith("{")):
            obj = json.loads(Path(obj).read_text())
        elif isinstance(obj, str):
            obj = json.loads(obj)
        try:
            g = tuple(tuple(int(c) for c in (gi if isinstance(gi, (list, tuple)) else [gi])) for gi in obj["g"])
            irr = obj.get("irreducible")
            return cls(
                s_exp=int(obj["s_exp"]),
                m=int(obj["m"]),
                g=g,
                t=int(obj["t"]),
                irreducible=tuple(int(c) for c in irr) if irr is not None else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidRingSpec(f"malformed ring spec: {exc}") from exc

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"s_exp": self.s_exp, "m": self.m, "g": [list(c) for c in self.g], "t": self.t}
        if self.irreducible is not None:
            out["irreducible"] = list(self.irreducible)
        return out


class ChainRing:
    """A validated chain ring with derived constants e, kappa, eta, s, kappa_1, theta_e."""

    def __init__(self, spec: ChainRingSpec):
        self.spec = spec
        s_exp, m = spec.s_exp, spec.m
        try:
            irr = BasicIrreducible.default(s_exp, m) if spec.irreducible is None else BasicIrreducible(s_exp, m, spec.irreducible)
        except ValueError as exc:
            raise InvalidRingSpec(str(exc)) from exc
        self.gr = GaloisRing(s_exp, m, irr)
        self.field = self.gr.field
        self.s_exp = s_exp
        self.m = m
        self.q = 1 << m
        kappa = len(spec.g)
        if kappa < 2:
            raise InvalidRingSpec("Eisenstein polynomial must have degree at least 2")
        if kappa % 2:
            raise OddKappaError(f"kappa={kappa} is odd; only even kappa is supported")
        if not 1 <= spec.t <= kappa:
            raise InvalidRingSpec(f"t={spec.t} must satisfy 1 <= t <= kappa={kappa}")
        if s_exp == 1 and spec.t != kappa:
            raise InvalidRingSpec("t must equal kappa when s_exp = 1")
        self.h = tuple(self.gr.reduce(list(c) + [0] * m) for c in spec.g)
        if len(self.h) and not self.gr.is_unit(self.h[0]):
            raise InvalidRingSpec("g_0 must be a unit (Eisenstein condition)")
        self.kappa = kappa
        self.t = spec.t
        self.e = kappa * (s_exp - 1) + spec.t
        self.s = self.e // 2
        self.kappa1 = kappa // 2
        self.theta = self.e % 2
        self.size = self.q**self.e
        self._mods = tuple(1 << s_exp if i < self.t else 1 << (s_exp - 1) for i in range(kappa))
        self.zero_nf: NF = tuple(self.gr.zero for _ in range(kappa))
        self.one_nf: NF = (self.gr.one,) + tuple(self.gr.zero for _ in range(kappa - 1))
        self._teich = self.gr.teichmuller_table
        self._h_inv = self._inv_nf(self._poly_nf(self.h))
        if s_exp >= 2:
            two = self.nf_scale(2, self.one_nf)
            if self.nf_valuation(two) != kappa:
                raise InvalidRingSpec("valuation of 2 differs from kappa")
        self.eta = self._compute_eta() if s_exp >= 2 else None

    # presentation helpers

    @classmethod
    def from_json(cls, obj: Any) -> "ChainRing":
        return cls(ChainRingSpec.from_json(obj))

    def to_json(self) -> dict[str, Any]:
        d = self.spec.to_json()
        d["irreducible"] = list(self.gr.irreducible.coeffs)
        return d

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ChainRing) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    @cached_property
    def _key(self) -> tuple:
        return (self.s_exp, self.m, self.gr.irreducible.coeffs, self.h, self.t)

    def __repr__(self) -> str:
        return f"R_({self.e},{self.m}) = {self.presentation()}"

    def presentation(self) -> str:
        gr = f"GR({1 << self.s_exp},{self.m})"
        terms = []
        for i in range(self.kappa - 1, -1, -1):
            c = self.h[i]
            if any(c):
                coef = _gr_str(c)
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(coef if not mono else (mono if coef == "1" else f"({coef}){mono}"))
        g = f"x^{self.kappa}" + (f" + 2({' + '.join(terms)})" if self.s_exp >= 2 and terms else "")
        rel = f"{1 << (self.s_exp - 1)}x^{self.t}" if self.s_exp >= 2 else f"x^{self.t}"
        return f"{gr}[x]/<{g}, {rel}>"

    # normal-form arithmetic

    def _normalize(self, coeffs: Sequence[tuple[int, ...]]) -> NF:
        """Reduce a GR-coefficient polynomial of any degree to normal form."""
        gr, kappa = self.gr, self.kappa
        c = [tuple(x) for x in coeffs]
        for d in range(len(c) - 1, kappa - 1, -1):
            top = c[d]
            if any(top):
                for i in range(kappa):
                    c[d - kappa + i] = gr.sub(c[d - kappa + i], gr.scale(2, gr.mul(self.h[i], top)))
                c[d] = gr.zero
        c = c[:kappa] + [gr.zero] * (kappa - len(c))
        return tuple(tuple(x % mod for x in ci) for ci, mod in zip(c, self._mods))

    def _poly_nf(self, coeffs: Sequence[tuple[int, ...]]) -> NF:
        return self._normalize(list(coeffs))

    def nf_add(self, a: NF, b: NF) -> NF:
        return tuple(tuple((x + y) % mod for x, y in zip(ai, bi)) for ai, bi, mod in zip(a, b, self._mods))

    def nf_neg(self, a: NF) -> NF:
        return tuple(tuple((-x) % mod for x in ai) for ai, mod in zip(a, self._mods))

    def nf_sub(self, a: NF, b: NF) -> NF:
        return self.nf_add(a, self.nf_neg(b))

    def nf_scale(self, k: int, a: NF) -> NF:
        return tuple(tuple((k * x) % mod for x in ai) for ai, mod in zip(a, self._mods))

    def nf_mul(self, a: NF, b: NF) -> NF:
        gr = self.gr
        prod = [gr.zero] * (2 * self.kappa - 1)
        for i, ai in enumerate(a):
            if any(ai):
                for j, bj in enumerate(b):
                    if any(bj):
                        prod[i + j] = gr.add(prod[i + j], gr.mul(ai, bj))
        return self._normalize(prod)

    def nf_u_power(self, k: int) -> NF:
        x = (self.gr.zero, self.gr.one) if self.kappa > 1 else None
        result = self.one_nf
        base = self._normalize(list(x))
        for _ in range(k):
            result = self.nf_mul(result, base)
        return result

    def nf_teich(self, r: int) -> NF:
        return (self._teich[r],) + tuple(self.gr.zero for _ in range(self.kappa - 1))

    def nf_residue(self, a: NF) -> int:
        return self.gr.residue(a[0])

    def _inv_nf(self, a: NF) -> NF:
        r = self.nf_residue(a)
        if r == 0:
            raise NotAUnit("element is not a unit")
        b = self.nf_teich(self.field.inv(r))
        two = self.nf_scale(2, self.one_nf)
        for _ in range(self.e.bit_length() + 1):
            b = self.nf_mul(b, self.nf_sub(two, self.nf_mul(a, b)))
        if self.nf_mul(a, b) != self.one_nf:
            raise AssertionError("Newton inversion failed to converge")
        return b

    def nf_teich_expansion(self, a: NF, length: int | None = None) -> tuple[int, ...]:
        """Teichmuller digits as residue integers.

        Peel off a_0 = teich(residue), rewrite the even constant 2w of the
        remainder as -u^kappa h(u)^(-1) w, then divide by u and repeat.
        """
        length = self.e if length is None else length
        gr = self.gr
        digits = []
        r = a
        shifted_hinv = self.nf_neg(self.nf_mul(self._h_inv, self.nf_u_power(self.kappa - 1)))
        for _ in range(length):
            d = self.nf_residue(r)
            digits.append(d)
            r = self.nf_sub(r, self.nf_teich(d))
            c0 = r[0]
            assert all(x % 2 == 0 for x in c0)
            w = tuple(x // 2 for x in c0)
            tail = list(r[1:]) + [gr.zero]
            r = self._normalize(tail)
            if any(w):
                w_nf = (gr.reduce(list(w)),) + tuple(gr.zero for _ in range(self.kappa - 1))
                r = self.nf_add(r, self.nf_mul(shifted_hinv, w_nf))
        return tuple(digits)

    def nf_from_digits(self, digits: Sequence[int]) -> NF:
        result = self.zero_nf
        upow = self.one_nf
        u = self.nf_u_power(1)
        for d in digits:
            if d:
                result = self.nf_add(result, self.nf_mul(upow, self.nf_teich(d)))
            upow = self.nf_mul(upow, u)
        return result

    def nf_valuation(self, a: NF, level: int | None = None) -> int:
        level = self.e if level is None else level
        digits = self.nf_teich_expansion(a, level)
        for i, d in enumerate(digits):
            if d:
                return i
        return level

    def _compute_eta(self) -> tuple[int, ...]:
        digits = self.nf_teich_expansion(self.nf_scale(2, self.one_nf))
        eta = digits[self.kappa :]
        if not eta or eta[0] == 0:
            raise InvalidRingSpec("eta_0 vanished; 2 does not have valuation kappa")
        return eta

    # element construction

    def element(self, value: Any, level: int | None = None) -> "RingElem":
        level = self.e if level is None else level
        if isinstance(value, RingElem):
            return value.reduce_level(level)
        if isinstance(value, int):
            nf = self.nf_scale(value, self.one_nf)
        elif isinstance(value, str):
            nf = self.parse_nf(value)
        else:
            nf = self._normalize([tuple(c) for c in value])
        return RingElem(self, self.e, nf).reduce_level(level)

    def zero(self, level: int | None = None) -> "RingElem":
        return RingElem(self, self.e if level is None else level, self.zero_nf)

    def one(self, level: int | None = None) -> "RingElem":
        return self.element(1, level)

    def u(self, level: int | None = None) -> "RingElem":
        return RingElem(self, self.e, self.nf_u_power(1)).reduce_level(self.e if level is None else level)

    def teich(self, r: int, level: int | None = None) -> "RingElem":
        return RingElem(self, self.e, self.nf_teich(r)).reduce_level(self.e if level is None else level)

    def from_digits(self, digits: Sequence[int], level: int | None = None) -> "RingElem":
        level = len(digits) if level is None else level
        return RingElem(self, self.e, self.nf_from_digits(digits)).reduce_level(level)

    def from_index(self, index: int, level: int | None = None) -> "RingElem":
        level = self.e if level is None else level
        return self.from_digits(self.index_digits(index), level)

    def index_digits(self, index: int, length: int | None = None) -> tuple[int, ...]:
        length = self.e if length is None else length
        return tuple((index >> (self.m * i)) & (self.q - 1) for i in range(length))

    def digits_index(self, digits: Sequence[int]) -> int:
        return sum(int(d) << (self.m * i) for i, d in enumerate(digits))

    def elements(self, level: int | None = None) -> Iterable["RingElem"]:
        level = self.e if level is None else level
        for idx in range(self.q**level):
            yield self.from_index(idx, level)

    # text rendering

    def format_digits(self, digits: Sequence[int]) -> str:
        terms = []
        for i, d in enumerate(digits):
            if not d:
                continue
            k = self.field.log[d]
            z = "" if k == 0 else f"z^{k}"
            up = "" if i == 0 else ("u" if i == 1 else f"u^{i}")
            if up and z:
                terms.append(f"{up}*{z}")
            else:
                terms.append(up or z or "1")
        return " + ".join(terms) if terms else "0"

    def parse_nf(self, text: str) -> NF:
        total = self.zero_nf
        text = text.strip()
        if text == "0":
            return total
        for term in text.split("+"):
            term = term.strip()
            upow, zlog = 0, None
            for factor in term.split("*"):
                factor = factor.strip()
                if factor == "1":
                    continue
                base, _, exp = factor.partition("^")
                k = int(exp) if exp else 1
                if base == "u":
                    upow += k
                elif base == "z":
                    zlog = k if zlog is None else zlog + k
                else:
                    raise ValueError(f"cannot parse ring element term {term!r}")
            coef = self.nf_teich(1 if zlog is None else self.field.exp[zlog % (self.q - 1)])
            total = self.nf_add(total, self.nf_mul(self.nf_u_power(upow), coef))
        return total

    # lookup tables

    @cached_property
    def tables(self) -> "RingTables":
        return RingTables(self)

    @property
    def has_tables(self) -> bool:
        return self.m * self.e <= TABLE_LIMIT_BITS

    def info(self) -> dict[str, Any]:
        two = self.nf_scale(2, self.one_nf)
        return {
            "presentation": self.presentation(),
            "s_exp": self.s_exp,
            "m": self.m,
            "e": self.e,
            "kappa": self.kappa,
            "t": self.t,
            "s": self.s,
            "kappa1": self.kappa1,
            "theta_e": self.theta,
            "size": self.size,
            "two": self.format_digits(self.nf_teich_expansion(two)),
            "eta": None if self.eta is None else [repr(TeichElem.from_residue(self.field, d)) for d in self.eta],
            "teichmuller": {repr(TeichElem.from_residue(self.field, r)): list(self._teich[r]) for r in range(self.q)},
            "ideal_sizes": [self.q ** (self.e - i) for i in range(self.e + 1)],
        }


def _gr_str(c: tuple[int, ...]) -> str:
    parts = []
    for i, x in enumerate(c):
        if x:
            mono = "" if i == 0 else ("y" if i == 1 else f"y^{i}")
            parts.append(str(x) if not mono else (mono if x == 1 else f"{x}{mono}"))
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class RingElem:
    """Normal-form element of the level-``level`` quotient of a chain ring."""

    ring: ChainRing = field(repr=False, compare=False)
    level: int
    nf: NF

    def __post_init__(self) -> None:
        if not 1 <= self.level <= self.ring.e:
            raise LevelMismatch(f"level {self.level} outside 1..{self.ring.e}")

    def _coerce(self, other: Any) -> "RingElem":
        if isinstance(other, int):
            return self.ring.element(other, self.level)
        if not isinstance(other, RingElem):
            return NotImplemented
        if other.ring != self.ring:
            raise AmbientMismatch("elements of different chain rings")
        if other.level != self.level:
            raise LevelMismatch(f"levels {self.level} and {other.level} differ")
        return other

    def _wrap(self, nf: NF) -> "RingElem":
        return RingElem(self.ring, self.ring.e, nf).reduce_level(self.level)

    def __add__(self, other: Any) -> "RingElem":
        o = self._coerce(other)
        return self._wrap(self.ring.nf_add(self.nf, o.nf))

    __radd__ = __add__

    def __sub__(self, other: Any) -> "RingElem":
        o = self._coerce(other)
        return self._wrap(self.ring.nf_sub(self.nf, o.nf))

    def __neg__(self) -> "RingElem":
        return self._wrap(self.ring.nf_neg(self.nf))

    def __mul__(self, other: Any) -> "RingElem":
        o = self._coerce(other)
        return self._wrap(self.ring.nf_mul(self.nf, o.nf))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RingElem":
        result = self.ring.one(self.level)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RingElem) and other.ring == self.ring and other.level == self.level and other.nf == self.nf

    def __hash__(self) -> int:
        return hash((self.level, self.nf))

    def __repr__(self) -> str:
        return self.ring.format_digits(self.teich_expansion())

    def is_zero(self) -> bool:
        return self.nf == self.ring.zero_nf

    def is_unit(self) -> bool:
        return self.ring.nf_residue(self.nf) != 0

    def inverse(self) -> "RingElem":
        return self._wrap(self.ring._inv_nf(self.nf))

    def teich_expansion(self) -> tuple[int, ...]:
        return self.ring.nf_teich_expansion(self.nf, self.level)

    def reduce_level(self, level: int) -> "RingElem":
        if level > self.level:
            raise LevelMismatch(f"cannot raise level {self.level} to {level}")
        digits = self.ring.nf_teich_expansion(self.nf, self.ring.e)
        trimmed = digits[:level]
        if trimmed == digits:
            return RingElem(self.ring, level, self.nf)
        return RingElem(self.ring, level, self.ring.nf_from_digits(trimmed))

    def lift(self, level: int | None = None) -> "RingElem":
        """Same representative viewed at a higher level (digits above stay zero)."""
        return RingElem(self.ring, self.ring.e if level is None else level, self.nf)

    @property
    def index(self) -> int:
        return self.ring.digits_index(self.teich_expansion())


def ring_new(spec: ChainRingSpec | dict[str, Any]) -> ChainRing:
    if not isinstance(spec, ChainRingSpec):
        spec = ChainRingSpec.from_json(spec)
    return ChainRing(spec)


def r_add(a: RingElem, b: RingElem) -> RingElem:
    return a + b


def r_mul(a: RingElem, b: RingElem) -> RingElem:
    return a * b


def teich_expansion(a: RingElem) -> tuple[TeichElem, ...]:
    f = a.ring.field
    return tuple(TeichElem.from_residue(f, d) for d in a.teich_expansion())


def pi_i(a: RingElem, i: int) -> TeichElem:
    if not 0 <= i < a.level:
        raise IndexError(f"pi_{i} undefined at level {a.level}")
    return TeichElem.from_residue(a.ring.field, a.teich_expansion()[i])


def valuation(a: RingElem) -> int:
    for i, d in enumerate(a.teich_expansion()):
        if d:
            return i
    return a.level


def compute_eta(ring: ChainRing) -> tuple[TeichElem, ...]:
    if ring.eta is None:
        raise InvalidRingSpec("2 = 0 in characteristic 2; eta is undefined")
    return tuple(TeichElem.from_residue(ring.field, d) for d in ring.eta)


def reduce_level(a: RingElem, level: int) -> RingElem:
    return a.reduce_level(level)


class RingTables:
    """Digit-indexed add/mul/neg/inverse tables for the full ring R_(e,m)."""

    def __init__(self, ring: ChainRing):
        if not ring.has_tables:
            raise ValueError(f"ring of order 2^{ring.m * ring.e} exceeds the table limit 2^{TABLE_LIMIT_BITS}")
        self.ring = ring
        q, e = ring.q, ring.e
        self.q, self.e, self.m = q, e, ring.m
        self.N = N = q**e
        kappa, m = ring.kappa, ring.m
        K = kappa * m
        mods = np.array([ring._mods[i] for i in range(kappa) for _ in range(m)], dtype=np.int64)
        radix = np.ones(K, dtype=np.int64)
        for k in range(1, K):
            radix[k] = radix[k - 1] * mods[k - 1]
        coords = np.zeros((N, K), dtype=np.int64)
        for idx in range(N):
            nf = ring.nf_from_digits(ring.index_digits(idx))
            coords[idx] = [x for ci in nf for x in ci]
        keys = coords @ radix
        if len(set(keys.tolist())) != N:
            raise AssertionError("Teichmuller expansion is not a bijection")
        key2idx = np.empty(N, dtype=np.int64)
        key2idx[keys] = np.arange(N)
        struct = np.zeros((K, K, K), dtype=np.int64)
        for a in range(K):
            for b in range(K):
                ea = [[0] * m for _ in range(kappa)]
                eb = [[0] * m for _ in range(kappa)]
                ea[a // m][a % m] = 1
                eb[b // m][b % m] = 1
                prod = ring.nf_mul(tuple(map(tuple, ea)), tuple(map(tuple, eb)))
                struct[a, b] = [x for ci in prod for x in ci]
        dtype = np.int32
        add = np.empty((N, N), dtype=dtype)
        mul = np.empty((N, N), dtype=dtype)
        chunk = max(1, (1 << 22) // (N * K))
        for lo in range(0, N, chunk):
            hi = min(N, lo + chunk)
            s = (coords[lo:hi, None, :] + coords[None, :, :]) % mods
            add[lo:hi] = key2idx[s @ radix]
            p = np.einsum("ak,bl,klc->abc", coords[lo:hi], coords, struct) % mods
            mul[lo:hi] = key2idx[p @ radix]
        self.add = add
        self.mul = mul
        self.neg = key2idx[((-coords) % mods) @ radix].astype(dtype)
        self.sub = add[np.arange(N)[:, None], self.neg[None, :]]
        one = 1
        inv = np.full(N, -1, dtype=dtype)
        units = np.nonzero(np.arange(N) % q != 0)[0]
        for a in units:
            inv[a] = int(np.nonzero(mul[a] == one)[0][0])
        self.inv = inv
        self.two = int(add[1, 1])

    def level_modulus(self, level: int) -> int:
        return self.q**level

    def u_mul(self, x: int, k: int) -> int:
        return (x * self.q**k) % self.N

    def valuation(self, x: int, level: int | None = None) -> int:
        level = self.e if level is None else level
        x %= self.q**level
        if x == 0:
            return level
        v = 0
        while x % self.q == 0:
            x //= self.q
            v += 1
        return v


PRESET_SPECS: dict[str, dict[str, Any]] = {
    "R31": {"s_exp": 2, "m": 1, "g": [[1], [0]], "t": 1},
    "R41": {"s_exp": 2, "m": 1, "g": [[1], [0]], "t": 2},
    "R42": {"s_exp": 2, "m": 2, "g": [[1, 0], [0, 0]], "t": 2},
    "R51": {"s_exp": 2, "m": 1, "g": [[1], [0], [0], [0]], "t": 1},
    "R52": {"s_exp": 3, "m": 2, "g": [[1, 0], [0, 0]], "t": 1},
    "R61": {"s_exp": 2, "m": 1, "g": [[1], [0], [0], [0]], "t": 2},
    "R71": {"s_exp": 2, "m": 1, "g": [[1], [1], [0], [1]], "t": 3},
    "F2u2": {"s_exp": 1, "m": 1, "g": [[1], [0]], "t": 2},
    "F4u2": {"s_exp": 1, "m": 2, "g": [[1, 0], [0, 0]], "t": 2},
}


def preset(name: str) -> ChainRing:
    """Named rings used throughout the tests and the CLI."""
    try:
        return _preset_cache(name)
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESET_SPECS)}") from None


_PRESETS: dict[str, ChainRing] = {}


def _preset_cache(name: str) -> ChainRing:
    if name not in _PRESETS:
        _PRESETS[name] = ring_new(PRESET_SPECS[name])
    return _PRESETS[name]
