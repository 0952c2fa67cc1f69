"""Truncated hypergeometric series and Dwork's p-adic hypergeometric function.

Only the tuple (a, ..., a) with lower parameters all 1 is supported:

    F_a(t) = sum_k ((a)_k / k!)^(d+1) t^k.

Coefficients are formed as exact rationals and embedded into Z/p^n
afterwards, since k! is not invertible mod p.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from .errors import DenominatorNotUnit, NonUnit, NotInDomain
from .padic import (
    ResidueInt,
    WittElement,
    as_rational,
    embed_rational,
    is_prime,
    rational_valuation,
)


@dataclass(frozen=True)
class HGParameter:
    """The tuple (a, ..., a) of length d+1 at the prime p.

    ``theorem_mode`` additionally requires 0 < a < 1, the range in which
    the t <-> 1/t transformation is a theorem rather than a conjecture.
    """

    a: Fraction
    d: int
    p: int
    theorem_mode: bool = True

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.d < 0:
            raise ValueError("d must be >= 0")
        if self.a.denominator % self.p == 0:
            raise DenominatorNotUnit(f"{self.a} is not {self.p}-integral")
        if self.theorem_mode and not 0 < self.a < 1:
            raise ValueError(f"theorem mode requires 0 < a < 1, got {self.a}")

    @property
    def N(self) -> int:
        return self.a.denominator

    def with_a(self, a) -> HGParameter:
        return HGParameter(a, self.d, self.p, self.theorem_mode)


@dataclass(frozen=True)
class DworkOrbit:
    """Iterates a = a^(0), a^(1), ... of the Dwork prime map.

    ``steps[i] = (a^(i), l_i)``; the sequence closes with
    a^(len(steps)) == a^(preperiod).
    """

    params: HGParameter
    steps: tuple[tuple[Fraction, int], ...]
    period: int
    preperiod: int = 0

    @property
    def values(self) -> list[Fraction]:
        return [a for a, _ in self.steps]

    def iterate(self, i: int) -> Fraction:
        """a^(i) for any i >= 0."""
        if i < len(self.steps):
            return self.steps[i][0]
        j = self.preperiod + (i - self.preperiod) % self.period
        return self.steps[j][0]


@dataclass(frozen=True)
class TruncatedPoly:
    """Polynomial over Z/p^n, constant term first."""

    p: int
    n: int
    coeffs: tuple[int, ...]

    def __len__(self):
        return len(self.coeffs)

    def residues(self) -> list[ResidueInt]:
        return [ResidueInt(self.p, self.n, c) for c in self.coeffs]

    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def __call__(self, x: WittElement) -> WittElement:
        if x.n < self.n:
            raise ValueError(f"point has precision {x.n} < {self.n}")
        if x.n > self.n:
            x = x.reduce(self.n)
        return x.ring.horner(self.coeffs, x)

    def __mul__(self, other: TruncatedPoly) -> TruncatedPoly:
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("coefficient rings differ")
        m = self.p**self.n
        out = [0] * (len(self) + len(other) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] = (out[i + j] + x * y) % m
        return TruncatedPoly(self.p, self.n, tuple(out))


# ---------------------------------------------------------------------------
# exact rational coefficients
# ---------------------------------------------------------------------------

_ratio_cache: dict[Fraction, list[Fraction]] = {}
_ratio_lock = threading.Lock()


def pochhammer_ratios(a, m: int) -> list[Fraction]:
    """[(a)_k / k! for k < m] as exact rationals (cached, append-only)."""
    a = as_rational(a)
    with _ratio_lock:
        seq = _ratio_cache.setdefault(a, [Fraction(1)])
        while len(seq) < m:
            k = len(seq)
            seq.append(seq[-1] * (a + k - 1) / k)
        return seq[:m]


def pochhammer_exact(a, k: int) -> Fraction:
    a = as_rational(a)
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def pochhammer(a, k: int, p: int, n: int) -> ResidueInt:
    """(a)_k = a(a+1)...(a+k-1) embedded in Z/p^n."""
    return embed_rational(pochhammer_exact(a, k), p, n)


@lru_cache(maxsize=4096)
def hg_coefficients(a, d: int, m: int, p: int, n: int) -> tuple[int, ...]:
    """First m coefficients of F_a(t) for the (d+1)-fold tuple, mod p^n."""
    mod = p**n
    out = []
    for r in pochhammer_ratios(a, m):
        if r.denominator % p == 0:
            # cannot happen for p-integral a; F_a has Z_p coefficients
            raise DenominatorNotUnit(f"coefficient {r} of F_{a} is not {p}-integral")
        out.append(pow(r.numerator * pow(r.denominator, -1, mod), d + 1, mod))
    return tuple(out)


def truncated_hg(params: HGParameter, m: int, n: int) -> TruncatedPoly:
    """[F_a(t)]_{<m} with coefficients in Z/p^n."""
    if m < 1:
        raise ValueError("truncation bound must be >= 1")
    return TruncatedPoly(
        params.p, n, hg_coefficients(params.a, params.d, m, params.p, n)
    )


# ---------------------------------------------------------------------------
# Dwork primes
# ---------------------------------------------------------------------------


def exponent_l(a, modulus: int) -> int:
    """The unique l in [0, modulus) with a + l = 0 mod ``modulus``."""
    a = as_rational(a)
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(a.denominator, modulus) != 1:
        raise DenominatorNotUnit(f"{a} has denominator not coprime to {modulus}")
    return (-a.numerator * pow(a.denominator, -1, modulus)) % modulus


def dwork_prime(a, p: int) -> tuple[Fraction, int]:
    """(a', l) with a' = (a + l)/p and l in [0, p)."""
    a = as_rational(a)
    if a.denominator % p == 0:
        raise DenominatorNotUnit(f"{a} is not {p}-integral")
    l = exponent_l(a, p)
    return (a + l) / p, l


@lru_cache(maxsize=4096)
def dwork_orbit(params: HGParameter) -> DworkOrbit:
    """Iterate the Dwork prime until a value repeats.

    For 0 < a < 1 the orbit is purely periodic; for other p-integral a it
    is eventually periodic and ``preperiod`` records the tail length.
    """
    seen: dict[Fraction, int] = {}
    steps = []
    a = params.a
    while a not in seen:
        seen[a] = len(steps)
        nxt, l = dwork_prime(a, params.p)
        steps.append((a, l))
        a = nxt
    start = seen[a]
    return DworkOrbit(params, tuple(steps), len(steps) - start, start)


@lru_cache(maxsize=4096)
def h_polynomial(params: HGParameter) -> TruncatedPoly:
    """h_a(t) mod p: product of [F_{a^(i)}]_{<p} for i = 1 .. len(orbit).

    For a purely periodic orbit this is one full period; for an eventually
    periodic one it covers the tail (from i = 1) and one period.
    """
    orbit = dwork_orbit(params)
    p = params.p
    h = TruncatedPoly(p, 1, (1,))
    for i in range(1, len(orbit.steps) + 1):
        h = h * truncated_hg(params.with_a(orbit.iterate(i)), p, 1)
    return h


def mod_p_factors(params: HGParameter) -> list[TruncatedPoly]:
    orbit = dwork_orbit(params)
    return [
        truncated_hg(params.with_a(orbit.iterate(i)), params.p, 1)
        for i in range(1, len(orbit.steps) + 1)
    ]


def in_domain(params: HGParameter, t0: WittElement) -> bool:
    """True iff h_a(t0) is nonzero mod p, the condition for evaluating F^Dw."""
    x = t0.reduce(1)
    return not h_polynomial(params)(x).is_zero()


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _ratio_value(
    params: HGParameter,
    shift: int,
    num_terms: int,
    den_terms: int,
    t0: WittElement,
    n: int,
) -> WittElement:
    """[F_a]_{<num_terms}(t0) / [F_{a^(shift)}]_{<den_terms}(t0^(p^shift)) mod p^n."""
    if t0.n < n:
        raise ValueError(f"point has precision {t0.n} < {n}")
    if not t0.is_unit():
        raise NonUnit("evaluation point must be a unit")
    if not in_domain(params, t0):
        raise NotInDomain(f"h(t) vanishes mod {params.p} at {t0.reduce(1)}")
    x = t0.reduce(n)
    num = truncated_hg(params, num_terms, n)(x)
    shifted = dwork_orbit(params).iterate(shift)
    den_poly = truncated_hg(params.with_a(shifted), den_terms, n)
    den = den_poly(x ** (params.p**shift))
    if not den.is_unit():
        raise NonUnit(f"denominator truncation is not a unit at {x}")
    return num * den.inverse()


def dwork_eval(params: HGParameter, t0: WittElement, n: int) -> WittElement:
    """F^Dw_a(t0) mod p^n via Dwork's congruence

        F_a(t)/F_a'(t^p) = [F_a(t)]_{<p^n} / [F_a'(t^p)]_{<p^n}  (mod p^n).

    The denominator truncation is taken in the variable t, so it keeps the
    p^(n-1) lowest terms of F_a'.
    """
    p = params.p
    return _ratio_value(params, 1, p**n, p ** (n - 1), t0, n)


def dwork_eval_f(params: HGParameter, f: int, t0: WittElement, n: int) -> WittElement:
    """F^{Dw,f}_a(t0) = F_a(t0)/F_{a^(f)}(t0^q) mod p^n, q = p^f.

    Uses [F_a]_{<p^(n+f-1)} over [F_{a^(f)}]_{<p^(n-1)} evaluated at t0^q,
    the telescoped product of f single-step congruences at precision n.
    """
    if f < 1:
        raise ValueError("f must be >= 1")
    p = params.p
    return _ratio_value(params, f, p ** (n + f - 1), p ** (n - 1), t0, n)


def dwork_eval_f_product(
    params: HGParameter, f: int, t0: WittElement, n: int
) -> WittElement:
    """Product form prod_{i=0}^{f-1} F^Dw_{a^(i)}(t0^(p^i)), for cross-checks."""
    orbit = dwork_orbit(params)
    x = t0.reduce(n)
    out = x.ring.one()
    for i in range(f):
        out = out * dwork_eval(params.with_a(orbit.iterate(i)), x ** (params.p**i), n)
    return out


def series_ratio_oracle(
    params: HGParameter, shift: int, t0: WittElement, n: int, terms: int
) -> WittElement:
    """Independent route: expand F_a(t)/F_{a^(shift)}(t^(p^shift)) as one power
    series in Z_p[[t]] to ``terms`` coefficients and evaluate at t0.

    Only meaningful for points where the series converges p-adically fast
    enough, e.g. when the quotient is a polynomial mod p^n up to ``terms``.
    """
    p = params.p
    step = p**shift
    mod = p**n
    num = hg_coefficients(params.a, params.d, terms, p, n)
    shifted = dwork_orbit(params).iterate(shift)
    den_short = hg_coefficients(shifted, params.d, (terms + step - 1) // step, p, n)
    den = [0] * terms
    for k, c in enumerate(den_short):
        den[k * step] = c
    # power series division; den[0] = 1
    quot = []
    for k in range(terms):
        s = num[k]
        for j in range(1, k + 1):
            if den[j]:
                s -= den[j] * quot[k - j]
        quot.append(s % mod)
    return t0.reduce(n).ring.horner(quot, t0.reduce(n))


def coefficient_valuations(a, d: int, m: int, p: int) -> list[int]:
    """p-adic valuations of ((a)_k/k!)^(d+1), k < m (zero coefficients give None)."""
    out = []
    for r in pochhammer_ratios(a, m):
        out.append(None if r == 0 else (d + 1) * rational_valuation(r, p))
    return out


def poly_from_residues(coeffs: Sequence[int], p: int, n: int) -> TruncatedPoly:
    mod = p**n
    return TruncatedPoly(p, n, tuple(c % mod for c in coeffs))
