"""Fixed-precision p-adic arithmetic.

Three layers live here:

* :class:`ResidueInt` -- an integer mod p^n,
* :func:`embed_rational` -- p-integral rationals into Z/p^n,
* :class:`WittRing` / :class:`WittElement` -- W(F_q)/p^n, realised as
  (Z/p^n)[x] / (lifted modulus), with Teichmueller lifts and inverses.

Python integers are arbitrary precision, so no bound on p^n is imposed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import (
    DenominatorNotUnit,
    NonUnit,
    PrecisionMismatch,
    ReducibleModulus,
    ZeroInput,
)


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def as_rational(x) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a string like ``"r/N"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def rational_valuation(a: Fraction, p: int) -> int:
    return valuation(a.numerator, p) - valuation(a.denominator, p)


# ---------------------------------------------------------------------------
# Z/p^n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidueInt:
    """An element of Z/p^n. ``value`` is normalised into [0, p^n)."""

    p: int
    n: int
    value: int

    def __post_init__(self):
        _check_prime(self.p)
        if self.n < 1:
            raise ValueError("precision must be >= 1")
        object.__setattr__(self, "value", self.value % self.p**self.n)

    @property
    def modulus(self) -> int:
        return self.p**self.n

    def _coerce(self, other) -> int:
        if isinstance(other, ResidueInt):
            if (other.p, other.n) != (self.p, self.n):
                raise PrecisionMismatch(
                    f"Z/{self.p}^{self.n} vs Z/{other.p}^{other.n}"
                )
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _new(self, value: int) -> ResidueInt:
        return ResidueInt(self.p, self.n, value)

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._new(self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._new(self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._new(v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._new(self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._new(pow(self.value, e, self.modulus))

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def inverse(self) -> ResidueInt:
        if not self.is_unit():
            raise NonUnit(f"{self.value} is not a unit mod {self.p}^{self.n}")
        return self._new(pow(self.value, -1, self.modulus))

    def reduce(self, n: int) -> ResidueInt:
        if not 1 <= n <= self.n:
            raise PrecisionMismatch(f"cannot reduce precision {self.n} to {n}")
        return ResidueInt(self.p, n, self.value)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} mod {self.p}^{self.n}"


def embed_rational(a, p: int, n: int) -> ResidueInt:
    """Image of the p-integral rational ``a`` in Z/p^n."""
    a = as_rational(a)
    if a.denominator % p == 0:
        raise DenominatorNotUnit(f"{a} is not {p}-integral")
    m = p**n
    return ResidueInt(p, n, a.numerator * pow(a.denominator, -1, m))


def residue_arith(x: ResidueInt, y, op: str) -> ResidueInt:
    """Dispatch ``op`` in {add, sub, mul, inv, pow}; ``y`` is the exponent for pow
    and is ignored for inv."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "pow":
        return x ** int(y)
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, constant term first)
# ---------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _fp_mulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _fp_mod(prod, m, p)


def _fp_powmod(a, e, m, p):
    result = [1]
    base = _fp_mod(a, m, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        e >>= 1
    return result


def _fp_sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim([c % p for c in out])


def _fp_gcd(a, b, p):
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a polynomial over F_p."""
    f = len(modulus) - 1
    if f < 1 or modulus[-1] % p == 0:
        return False
    if f == 1:
        return True
    x = [0, 1]
    if _fp_sub(_fp_powmod(x, p**f, modulus, p), x, p):
        return False
    for ell in prime_factors(f):
        h = _fp_sub(_fp_powmod(x, p ** (f // ell), modulus, p), x, p)
        if len(_fp_gcd(modulus, h, p)) != 1:
            return False
    return True


# coefficients constant term first; all monic
DEFAULT_MODULI = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (1, 0, 1),  # x^2 + 1
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
    25: (2, 1, 1),  # x^2 + x + 2
    27: (1, 2, 0, 1),  # x^3 + 2x + 1
    49: (1, 0, 1),  # x^2 + 1
    121: (1, 0, 1),  # x^2 + 1
}


@lru_cache(maxsize=None)
def default_modulus(p: int, f: int) -> tuple[int, ...]:
    """Built-in modulus for q = p^f; falls back to the least monic irreducible."""
    _check_prime(p)
    if f == 1:
        return (0, 1)
    q = p**f
    if q in DEFAULT_MODULI:
        return DEFAULT_MODULI[q]
    for tail in itertools.product(range(p), repeat=f):
        m = tuple(reversed(tail)) + (1,)
        if m[0] and is_irreducible(m, p):
            return m
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def parse_modulus(text: str) -> tuple[int, ...]:
    """Parse a comma-separated coefficient list, constant term first."""
    return tuple(int(c) for c in text.split(","))


def format_poly(coeffs: Sequence[int], var: str = "x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return " + ".join(terms) or "0"


@dataclass(frozen=True)
class FqSpec:
    """F_q = F_p[x]/(modulus), q = p^f."""

    p: int
    f: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        _check_prime(self.p)
        m = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", m)
        if len(m) != self.f + 1 or m[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.f}: {m}")
        if not is_irreducible(m, self.p):
            raise ReducibleModulus(f"{format_poly(m)} is reducible over F_{self.p}")

    @classmethod
    def default(cls, p: int, f: int = 1) -> FqSpec:
        return cls(p, f, default_modulus(p, f))

    @property
    def q(self) -> int:
        return self.p**self.f

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements of F_q as coefficient tuples, ordered by base-p encoding."""
        for code in range(self.q):
            yield self.decode(code)

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.f):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    def encode(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))


# ---------------------------------------------------------------------------
# W(F_q) / p^n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WittRing:
    """W(F_q)/p^n as (Z/p^n)[x]/(m(x)), m the least-residue lift of the modulus.

    Element-level operations act on tuples of f ints; :class:`WittElement`
    wraps them for callers.
    """

    spec: FqSpec
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("precision must be >= 1")

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def f(self) -> int:
        return self.spec.f

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def pn(self) -> int:
        return self.spec.p**self.n

    def cardinality(self) -> int:
        return self.pn**self.f

    def with_precision(self, n: int) -> WittRing:
        return build_witt_ring(self.spec, n)

    # raw tuple arithmetic

    def _add(self, a, b):
        m = self.pn
        return tuple((x + y) % m for x, y in zip(a, b))

    def _sub(self, a, b):
        m = self.pn
        return tuple((x - y) % m for x, y in zip(a, b))

    def _mul(self, a, b):
        m = self.pn
        f = self.f
        if f == 1:
            return (a[0] * b[0] % m,)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        mod = self.spec.modulus
        for k in range(2 * f - 2, f - 1, -1):
            c = prod[k]
            if c:
                base = k - f
                for i in range(f):
                    prod[base + i] -= c * mod[i]
        return tuple(c % m for c in prod[:f])

    def _pow(self, a, e: int):
        result = self._one()
        base = a
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    def _one(self):
        return (1,) + (0,) * (self.f - 1)

    # element construction

    def element(self, coeffs: Sequence[int]) -> WittElement:
        coeffs = tuple(int(c) % self.pn for c in coeffs)
        if len(coeffs) != self.f:
            raise ValueError(f"expected {self.f} coefficients, got {len(coeffs)}")
        return WittElement(self, coeffs)

    def scalar(self, c: int) -> WittElement:
        return WittElement(self, (c % self.pn,) + (0,) * (self.f - 1))

    def one(self) -> WittElement:
        return self.scalar(1)

    def zero(self) -> WittElement:
        return self.scalar(0)

    def horner(self, coeffs: Sequence[int], x: WittElement) -> WittElement:
        """Evaluate sum(coeffs[k] * x^k), scalar coefficients in Z/p^n."""
        m = self.pn
        if self.f == 1:
            xv = x.coeffs[0]
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * xv + c) % m
            return WittElement(self, (acc,))
        acc = (0,) * self.f
        xc = x.coeffs
        for c in reversed(coeffs):
            acc = self._mul(acc, xc)
            acc = ((acc[0] + c) % m,) + acc[1:]
        return WittElement(self, acc)

    def teichmuller_points(self) -> list[WittElement]:
        """Teichmueller lifts of all of F_q^*, in base-p encoding order."""
        residue_ring = self.with_precision(1)
        return [
            teichmuller_lift(residue_ring.element(x), self.n)
            for x in self.spec.elements()
            if any(x)
        ]


@lru_cache(maxsize=None)
def build_witt_ring(spec: FqSpec, n: int) -> WittRing:
    """Arithmetic context for W(F_q)/p^n."""
    return WittRing(spec, n)


@dataclass(frozen=True)
class WittElement:
    ring: WittRing
    coeffs: tuple[int, ...]

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def n(self) -> int:
        return self.ring.n

    def coefficient(self, i: int) -> ResidueInt:
        return ResidueInt(self.ring.p, self.ring.n, self.coeffs[i])

    def _other(self, other) -> tuple[int, ...]:
        if isinstance(other, WittElement):
            if other.ring != self.ring:
                raise PrecisionMismatch(f"{self.ring} vs {other.ring}")
            return other.coeffs
        if isinstance(other, int):
            return self.ring.scalar(other).coeffs
        if isinstance(other, ResidueInt):
            if (other.p, other.n) != (self.ring.p, self.ring.n):
                raise PrecisionMismatch(f"{self.ring} vs Z/{other.p}^{other.n}")
            return self.ring.scalar(other.value).coeffs
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return WittElement(self.ring, self.ring._add(self.coeffs, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return WittElement(self.ring, self.ring._sub(self.coeffs, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return WittElement(self.ring, self.ring._sub(o, self.coeffs))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return WittElement(self.ring, self.ring._mul(self.coeffs, o))

    __rmul__ = __mul__

    def __neg__(self):
        return WittElement(self.ring, tuple((-c) % self.ring.pn for c in self.coeffs))

    def __pow__(self, e: int):
        if e < 0:
            return witt_unit_inverse(self) ** (-e)
        return WittElement(self.ring, self.ring._pow(self.coeffs, e))

    def residue(self) -> tuple[int, ...]:
        """Reduction mod p, as an F_q coefficient tuple."""
        return tuple(c % self.ring.p for c in self.coeffs)

    def is_unit(self) -> bool:
        return any(self.residue())

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def reduce(self, n: int) -> WittElement:
        if not 1 <= n <= self.ring.n:
            raise PrecisionMismatch(f"cannot reduce precision {self.ring.n} to {n}")
        return self.ring.with_precision(n).element(self.coeffs)

    def lift(self, n: int) -> WittElement:
        """Same coefficient representatives, viewed at a (higher) precision."""
        return self.ring.with_precision(n).element(self.coeffs)

    def inverse(self) -> WittElement:
        return witt_unit_inverse(self)

    def __int__(self):
        if self.ring.f != 1:
            raise TypeError("only elements of Z/p^n convert to int")
        return self.coeffs[0]

    def __repr__(self):
        if self.ring.f == 1:
            return f"{self.coeffs[0]} mod {self.ring.p}^{self.ring.n}"
        return f"[{','.join(map(str, self.coeffs))}] mod {self.ring.p}^{self.ring.n}"


def _fq_inverse(x: WittElement) -> tuple[int, ...]:
    spec = x.ring.spec
    r1 = build_witt_ring(spec, 1)
    return r1._pow(x.residue(), spec.q - 2)


def witt_unit_inverse(x: WittElement) -> WittElement:
    """Inverse of a unit by Newton iteration from the F_q inverse."""
    if not x.is_unit():
        raise NonUnit(f"{x} is not a unit")
    ring = x.ring
    y = _fq_inverse(x)
    prec = 1
    two = ring.scalar(2).coeffs
    while prec < ring.n:
        # y <- y (2 - x y) doubles the number of correct p-adic digits
        y = ring._mul(y, ring._sub(two, ring._mul(x.coeffs, y)))
        prec *= 2
    return WittElement(ring, y)


def teichmuller_lift(x: WittElement, target_n: int) -> WittElement:
    """The (q-1)-th root of unity reducing to ``x`` mod p."""
    if not x.is_unit():
        raise ZeroInput("Teichmueller lift of 0")
    ring = x.ring.with_precision(target_n)
    z = ring.element(x.residue()).coeffs
    for _ in range(target_n):
        z = ring._pow(z, ring.q)
    return WittElement(ring, z)


def teichmuller(spec: FqSpec, residue: Sequence[int] | int, n: int) -> WittElement:
    """Convenience: Teichmueller lift of an F_q element given by coefficients."""
    if isinstance(residue, int):
        residue = (residue,) + (0,) * (spec.f - 1)
    x = build_witt_ring(spec, 1).element(residue)
    return teichmuller_lift(x, n)
