"""Exact arithmetic in Z/2^s, the Galois ring GR(2^s, m) and its Teichmuller set.

Galois-ring elements are length-``m`` coefficient tuples in the polynomial
basis modulo a monic basic irreducible.  Residue-field elements of
GF(2^m) are plain integers whose bits are polynomial coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

# Conway polynomials over GF(2), coefficients listed from x^0 upwards.
CONWAY_POLYNOMIALS: dict[int, tuple[int, ...]] = {
    1: (1, 1),
    2: (1, 1, 1),
    3: (1, 1, 0, 1),
    4: (1, 1, 0, 0, 1),
    5: (1, 0, 1, 0, 0, 1),
    6: (1, 1, 0, 1, 1, 0, 1),
    7: (1, 1, 0, 0, 0, 0, 0, 1),
    8: (1, 0, 1, 1, 1, 0, 0, 0, 1),
}


class AmbientMismatch(ValueError):
    """Operands live in different rings or fields."""


class NotAUnit(ZeroDivisionError):
    """Inversion of an element with zero residue."""


def _gf2_polymod(a: int, b: int) -> int:
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def gf2_is_irreducible(bits: int) -> bool:
    """Trial division by every GF(2) polynomial of degree at most deg/2."""
    deg = bits.bit_length() - 1
    if deg < 1:
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        if _gf2_polymod(bits, d) == 0:
            return False
    return True


class ResidueField:
    """GF(2^m) in the polynomial basis, with log/antilog tables."""

    def __init__(self, m: int, modulus_bits: int):
        if modulus_bits.bit_length() - 1 != m:
            raise ValueError("modulus degree must equal m")
        if not gf2_is_irreducible(modulus_bits):
            raise ValueError("residue polynomial is reducible over GF(2)")
        self.m = m
        self.q = 1 << m
        self.modulus_bits = modulus_bits
        self._build_tables()

    def _mul_slow(self, a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> self.m:
                a ^= self.modulus_bits
        return r

    def _build_tables(self) -> None:
        q = self.q
        order = q - 1
        gen = None
        for cand in range(1, q):
            x, k = cand, 1
            while x != 1:
                x = self._mul_slow(x, cand)
                k += 1
            if k == order:
                gen = cand
                break
        assert gen is not None
        self.generator = gen
        exp = [0] * order
        log = [-1] * q
        x = 1
        for k in range(order):
            exp[k] = x
            log[x] = k
            x = self._mul_slow(x, gen)
        self.exp = tuple(exp)
        self.log = tuple(log)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise NotAUnit("zero has no inverse in the residue field")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 1 if k == 0 else 0
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def sqrt(self, a: int) -> int:
        """Unique square root: squaring is the Frobenius bijection."""
        if a == 0:
            return 0
        order = self.q - 1
        k = self.log[a]
        # 2 is invertible mod the odd order 2^m - 1
        return self.exp[(k * pow(2, -1, order)) % order] if order > 1 else 1

    def elements(self) -> range:
        return range(self.q)


@dataclass(frozen=True)
class BasicIrreducible:
    """Monic polynomial over Z/2^s whose reduction mod 2 is irreducible of degree m."""

    s_exp: int
    m: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.s_exp < 1 or self.m < 1:
            raise ValueError("s_exp and m must be positive")
        coeffs = tuple(int(c) % (1 << self.s_exp) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) != self.m + 1 or coeffs[-1] != 1:
            raise ValueError("basic irreducible must be monic of degree m")
        if not gf2_is_irreducible(self.residue_bits):
            raise ValueError("reduction mod 2 is not irreducible")

    @property
    def residue_bits(self) -> int:
        return sum((c & 1) << i for i, c in enumerate(self.coeffs))

    @classmethod
    def default(cls, s_exp: int, m: int) -> "BasicIrreducible":
        if m not in CONWAY_POLYNOMIALS:
            raise ValueError(f"no shipped default irreducible for m={m}")
        return cls(s_exp, m, CONWAY_POLYNOMIALS[m])


Vec = tuple[int, ...]


class GaloisRing:
    """GR(2^s, m) = (Z/2^s)[y] / (f(y)) with f a basic irreducible."""

    def __init__(self, s_exp: int, m: int, irreducible: BasicIrreducible | Sequence[int] | None = None):
        if irreducible is None:
            irreducible = BasicIrreducible.default(s_exp, m)
        elif not isinstance(irreducible, BasicIrreducible):
            irreducible = BasicIrreducible(s_exp, m, tuple(irreducible))
        if irreducible.s_exp != s_exp or irreducible.m != m:
            raise AmbientMismatch("irreducible does not match (s_exp, m)")
        self.s_exp = s_exp
        self.m = m
        self.mod = 1 << s_exp
        self.irreducible = irreducible
        self.field = ResidueField(m, irreducible.residue_bits)
        self.zero: Vec = (0,) * m
        self.one: Vec = (1,) + (0,) * (m - 1)

    def key(self) -> tuple:
        return (self.s_exp, self.m, self.irreducible.coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GaloisRing) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"GR(2^{self.s_exp}, {self.m})"

    # raw tuple arithmetic

    def reduce(self, v: Sequence[int]) -> Vec:
        """Reduce an arbitrary-length coefficient list modulo f and 2^s."""
        c = [int(x) for x in v]
        f = self.irreducible.coeffs
        m = self.m
        for d in range(len(c) - 1, m - 1, -1):
            top = c[d]
            if top:
                for i in range(m):
                    c[d - m + i] -= top * f[i]
                c[d] = 0
        c = c[:m] + [0] * (m - len(c))
        return tuple(x % self.mod for x in c)

    def add(self, a: Vec, b: Vec) -> Vec:
        mod = self.mod
        return tuple((x + y) % mod for x, y in zip(a, b))

    def sub(self, a: Vec, b: Vec) -> Vec:
        mod = self.mod
        return tuple((x - y) % mod for x, y in zip(a, b))

    def neg(self, a: Vec) -> Vec:
        mod = self.mod
        return tuple((-x) % mod for x in a)

    def scale(self, k: int, a: Vec) -> Vec:
        mod = self.mod
        return tuple((k * x) % mod for x in a)

    def mul(self, a: Vec, b: Vec) -> Vec:
        m = self.m
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self.reduce(prod)

    def pow(self, a: Vec, k: int) -> Vec:
        result, base = self.one, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def residue(self, a: Vec) -> int:
        return sum((x & 1) << i for i, x in enumerate(a))

    def from_residue(self, r: int) -> Vec:
        """The lift of a residue with coefficients in {0, 1}."""
        return tuple((r >> i) & 1 for i in range(self.m))

    def is_unit(self, a: Vec) -> bool:
        return self.residue(a) != 0

    def inv(self, a: Vec) -> Vec:
        """Invert the residue, then refine by Newton steps b <- b(2 - ab)."""
        r = self.residue(a)
        if r == 0:
            raise NotAUnit(f"{a} is not a unit in {self!r}")
        b = self.from_residue(self.field.inv(r))
        two = self.scale(2, self.one)
        for _ in range(self.s_exp.bit_length() + 1):
            b = self.mul(b, self.sub(two, self.mul(a, b)))
        assert self.mul(a, b) == self.one
        return b

    def teich_lift(self, r: int) -> Vec:
        """Iterate z <- z^(2^m) from the naive lift of r until it is fixed."""
        z = self.from_residue(r)
        q = 1 << self.m
        while True:
            nz = self.pow(z, q)
            if nz == z:
                return z
            z = nz

    def elements(self) -> Iterator[Vec]:
        mod, m = self.mod, self.m
        for code in range(mod**m):
            yield tuple((code // mod**i) % mod for i in range(m))

    @cached_property
    def teichmuller_table(self) -> tuple[Vec, ...]:
        """Teichmuller lift of every residue, indexed by the residue integer."""
        return tuple(self.teich_lift(r) for r in range(1 << self.m))


@dataclass(frozen=True)
class GRElem:
    """Element of a Galois ring with operator overloading."""

    ring: GaloisRing
    coeffs: Vec

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", self.ring.reduce(self.coeffs))

    def _check(self, other: "GRElem") -> None:
        if self.ring != other.ring:
            raise AmbientMismatch("Galois ring elements from different rings")

    def __add__(self, other: "GRElem") -> "GRElem":
        self._check(other)
        return GRElem(self.ring, self.ring.add(self.coeffs, other.coeffs))

    def __sub__(self, other: "GRElem") -> "GRElem":
        self._check(other)
        return GRElem(self.ring, self.ring.sub(self.coeffs, other.coeffs))

    def __neg__(self) -> "GRElem":
        return GRElem(self.ring, self.ring.neg(self.coeffs))

    def __mul__(self, other: "GRElem") -> "GRElem":
        self._check(other)
        return GRElem(self.ring, self.ring.mul(self.coeffs, other.coeffs))

    def __pow__(self, k: int) -> "GRElem":
        return GRElem(self.ring, self.ring.pow(self.coeffs, k))

    @property
    def residue(self) -> int:
        return self.ring.residue(self.coeffs)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.coeffs)


def gr_add(a: GRElem, b: GRElem) -> GRElem:
    return a + b


def gr_mul(a: GRElem, b: GRElem) -> GRElem:
    return a * b


def gr_inv(a: GRElem) -> GRElem:
    return GRElem(a.ring, a.ring.inv(a.coeffs))


def teich_lift(ring: GaloisRing, r: int) -> GRElem:
    return GRElem(ring, ring.teich_lift(r))


@dataclass(frozen=True)
class TeichElem:
    """Teichmuller element by discrete-log index; -1 encodes zero."""

    field: ResidueField
    index: int

    def __post_init__(self) -> None:
        if not -1 <= self.index <= self.field.q - 2:
            raise ValueError("Teichmuller index out of range")

    @classmethod
    def from_residue(cls, field: ResidueField, r: int) -> "TeichElem":
        return cls(field, field.log[r])

    @property
    def residue(self) -> int:
        return 0 if self.index < 0 else self.field.exp[self.index]

    def lift(self, ring: GaloisRing) -> GRElem:
        return teich_lift(ring, self.residue)

    def __mul__(self, other: "TeichElem") -> "TeichElem":
        if self.field is not other.field and self.field.modulus_bits != other.field.modulus_bits:
            raise AmbientMismatch("Teichmuller elements from different fields")
        return TeichElem.from_residue(self.field, self.field.mul(self.residue, other.residue))

    def __repr__(self) -> str:
        if self.index < 0:
            return "0"
        return "1" if self.index == 0 else f"z^{self.index}"


def t_oplus(a: TeichElem, b: TeichElem) -> TeichElem:
    """Field addition on the Teichmuller set, transported from the residue field."""
    if a.field.modulus_bits != b.field.modulus_bits:
        raise AmbientMismatch("Teichmuller elements from different fields")
    return TeichElem.from_residue(a.field, a.residue ^ b.residue)
