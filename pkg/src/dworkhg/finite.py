"""Character sums over F_q and the finite-field hypergeometric function.

Elements of F_q are encoded as integers 0 <= x < q whose base-p digits are
the coefficients against 1, x, ..., x^(f-1) modulo the field's modulus.
Multiplicative characters are indexed by an exponent k modulo q-1 relative
to a fixed primitive root g: chi_k(g^j) = exp(2 pi i jk/(q-1)).
Values are complex doubles; identities are checked to an absolute
tolerance ``TAU``.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import HypothesisViolated
from .padic import FqSpec, build_witt_ring, default_modulus, prime_factors

TAU = 1e-9


class FqField:
    """F_q with a fixed primitive root and discrete log tables."""

    def __init__(self, spec: FqSpec):
        self.spec = spec
        self.p = spec.p
        self.f = spec.f
        self.q = spec.q
        ring = build_witt_ring(spec, 1)
        self._ring = ring
        m = self.q - 1
        self.generator = self._find_generator()
        self.exp = [0] * m
        self.log: list = [None] * self.q
        x = ring.one().coeffs
        g = spec.decode(self.generator)
        for j in range(m):
            code = spec.encode(x)
            self.exp[j] = code
            self.log[code] = j
            x = ring._mul(x, g)
        self.roots = [cmath.exp(2j * math.pi * k / m) for k in range(m)]
        self.p_roots = [cmath.exp(2j * math.pi * k / self.p) for k in range(self.p)]

    def __eq__(self, other):
        return isinstance(other, FqField) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"FqField(q={self.q}, modulus={self.spec.modulus})"

    def _find_generator(self) -> int:
        m = self.q - 1
        ring = self._ring
        one = ring.one().coeffs
        exps = [m // ell for ell in prime_factors(m)] if m > 1 else []
        for code in range(1, self.q):
            g = self.spec.decode(code)
            if all(ring._pow(g, e) != one for e in exps):
                return code
        raise AssertionError("F_q^* is cyclic; a generator must exist")

    # element arithmetic on codes

    def add(self, x: int, y: int) -> int:
        p = self.p
        out, scale = 0, 1
        while x or y:
            out += ((x % p + y % p) % p) * scale
            x //= p
            y //= p
            scale *= p
        return out

    def neg(self, x: int) -> int:
        p = self.p
        out, scale = 0, 1
        while x:
            out += (-(x % p) % p) * scale
            x //= p
            scale *= p
        return out

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self.exp[(self.log[x] + self.log[y]) % (self.q - 1)]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        return self.exp[-self.log[x] % (self.q - 1)]

    def power(self, x: int, e: int) -> int:
        if x == 0:
            return 0 if e else 1
        return self.exp[(self.log[x] * e) % (self.q - 1)]

    def minus_one(self) -> int:
        return self.neg(1)

    def trace(self, x: int) -> int:
        """Absolute trace F_q -> F_p, as an integer in [0, p)."""
        total = 0
        for i in range(self.f):
            total = self.add(total, self.power(x, self.p**i))
        if total >= self.p:
            raise AssertionError("trace left F_p")
        return total

    @cached_property
    def traces(self) -> list[int]:
        return [self.trace(x) for x in range(self.q)]

    def nonzero(self) -> range:
        return range(1, self.q)

    def character(self, k: int) -> FqChar:
        return FqChar(self, k % (self.q - 1))

    def characters(self) -> list[FqChar]:
        return [FqChar(self, k) for k in range(self.q - 1)]

    def trivial(self) -> FqChar:
        return FqChar(self, 0)

    def parse_element(self, text: str) -> int:
        """``"5"`` is an integer representative; ``"1,2"`` a coefficient vector."""
        parts = [int(c) for c in str(text).split(",")]
        if len(parts) == 1 and self.f > 1:
            return parts[0] % self.q
        if len(parts) != self.f:
            raise ValueError(f"expected {self.f} coefficients, got {text!r}")
        return self.spec.encode(parts)

    def format_element(self, x: int) -> str:
        if self.f == 1:
            return str(x)
        return ",".join(map(str, self.spec.decode(x)))

    # Gauss sum tables, keyed by the additive character scale c

    def gauss_table(self, c: int = 1) -> list[complex]:
        cache = self.__dict__.setdefault("_gauss", {})
        if c not in cache:
            cache[c] = [_gauss_sum_raw(self, k, c) for k in range(self.q - 1)]
        return cache[c]


def build_field(spec: FqSpec) -> FqField:
    """F_q with the least primitive root (by base-p encoding) and its log table."""
    return _build_field_cached(spec)


_field_cache: dict[FqSpec, FqField] = {}


def _build_field_cached(spec: FqSpec) -> FqField:
    if spec not in _field_cache:
        _field_cache[spec] = FqField(spec)
    return _field_cache[spec]


def field_for(q: int, modulus=None) -> FqField:
    p = prime_factors(q)[0]
    f = round(math.log(q, p))
    if p**f != q:
        raise ValueError(f"{q} is not a prime power")
    return build_field(FqSpec(p, f, modulus if modulus is not None else default_modulus(p, f)))


@dataclass(frozen=True)
class FqChar:
    """The multiplicative character chi_k; chi(0) = 0 for every k."""

    field: FqField
    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % (self.field.q - 1))

    def __call__(self, x: int) -> complex:
        if x == 0:
            return 0j
        return self.field.roots[(self.k * self.field.log[x]) % (self.field.q - 1)]

    def __mul__(self, other: FqChar) -> FqChar:
        return FqChar(self.field, self.k + other.k)

    def conj(self) -> FqChar:
        return FqChar(self.field, -self.k)

    def is_trivial(self) -> bool:
        return self.k == 0

    def order(self) -> int:
        m = self.field.q - 1
        return m // math.gcd(m, self.k)

    def __repr__(self):
        return f"chi_{self.k}"


def additive_character(field: FqField, x: int, c: int = 1) -> complex:
    """psi(x) = exp(2 pi i Tr(c x)/p); c = 1 is the canonical choice."""
    return field.p_roots[field.traces[field.mul(c, x)]]


def _gauss_sum_raw(field: FqField, k: int, c: int) -> complex:
    m = field.q - 1
    total = 0j
    for x in field.nonzero():
        total += field.roots[(k * field.log[x]) % m] * additive_character(field, x, c)
    return -total


def gauss_sum(field: FqField, phi: FqChar, c: int = 1) -> complex:
    """g(phi) = -sum_x phi(x) psi(x)."""
    return field.gauss_table(c)[phi.k]


def gauss_sum_variant(field: FqField, phi: FqChar, c: int = 1) -> complex:
    """g°(phi): g(phi) for nontrivial phi, q for the trivial character."""
    if phi.is_trivial():
        return complex(field.q)
    return gauss_sum(field, phi, c)


def ff_pochhammer(field: FqField, phi: FqChar, nu: FqChar, c: int = 1) -> complex:
    """(phi)_nu = g(phi nu)/g(phi)."""
    return gauss_sum(field, phi * nu, c) / gauss_sum(field, phi, c)


def ff_pochhammer_variant(field: FqField, phi: FqChar, nu: FqChar, c: int = 1) -> complex:
    """(phi)°_nu = g°(phi nu)/g°(phi)."""
    return gauss_sum_variant(field, phi * nu, c) / gauss_sum_variant(field, phi, c)


def _as_exponents(field: FqField, chars) -> list[int]:
    out = []
    for ch in chars:
        if isinstance(ch, FqChar):
            if ch.field != field:
                raise ValueError("character belongs to a different field")
            out.append(ch.k)
        else:
            out.append(int(ch) % (field.q - 1))
    return out


def finite_hg(
    field: FqField, alphas: Sequence, betas: Sequence, t: int, c: int = 1
) -> complex:
    """The character-sum hypergeometric function _{d+1}F_d(alphas; betas; t) over F_q.

    ``alphas`` has d+1 entries and ``betas`` d; entries are :class:`FqChar`
    or bare exponents.
    """
    a = _as_exponents(field, alphas)
    b = _as_exponents(field, betas)
    if len(a) != len(b) + 1:
        raise ValueError("need len(alphas) == len(betas) + 1")
    if t == 0:
        return 0j
    m = field.q - 1
    g = field.gauss_table(c)
    q = float(field.q)

    def g0(k):
        return q if k == 0 else g[k]

    logt = field.log[t]
    total = 0j
    for nu in range(m):
        num = 1 + 0j
        for ai in a:
            num *= g[(ai + nu) % m] / g[ai]
        den = g0(nu) / q
        for bj in b:
            den *= g0((bj + nu) % m) / g0(bj)
        total += num / den * field.roots[(nu * logt) % m]
    return total / (1 - field.q)


def gs_identity_sides(field: FqField, phi: FqChar, c: int = 1) -> tuple[complex, complex]:
    lhs = gauss_sum(field, phi, c) * gauss_sum_variant(field, phi.conj(), c)
    rhs = phi(field.minus_one()) * field.q
    return lhs, rhs


def verify_gs_identity(field: FqField, phi: FqChar, c: int = 1, tol: float = TAU) -> bool:
    """g(phi) g°(conj phi) == phi(-1) q."""
    lhs, rhs = gs_identity_sides(field, phi, c)
    return abs(lhs - rhs) < tol


def transform_general_sides(
    field: FqField, alphas: Sequence, betas: Sequence, t: int, c: int = 1
) -> tuple[complex, complex]:
    """Both sides of the general t <-> 1/t transformation over F_q."""
    a = _as_exponents(field, alphas)
    b = _as_exponents(field, betas)
    if len(a) != len(b) + 1:
        raise ValueError("need len(alphas) == len(betas) + 1")
    if a[0] == 0:
        raise HypothesisViolated("alpha_0 must be nontrivial")
    if any(ai == bi for ai, bi in zip(a[1:], b)):
        raise HypothesisViolated("need alpha_i != beta_i for i >= 1")
    if t == 0:
        raise HypothesisViolated("t must be nonzero")
    ch = field.character
    a0 = ch(a[0])
    factor = a0.conj()(field.neg(t))
    for ai, bi in zip(a[1:], b):
        alpha, beta = ch(ai), ch(bi)
        factor *= (
            gauss_sum(field, a0 * beta.conj(), c)
            * gauss_sum_variant(field, alpha.conj(), c)
            / (gauss_sum_variant(field, a0 * alpha.conj(), c) * gauss_sum(field, beta.conj(), c))
        )
    new_alphas = [a[0]] + [a[0] - bi for bi in b]
    new_betas = [a[0] - ai for ai in a[1:]]
    lhs = finite_hg(field, a, b, t, c)
    rhs = factor * finite_hg(field, new_alphas, new_betas, field.inv(t), c)
    return lhs, rhs


def verify_transform_general(
    field: FqField, alphas: Sequence, betas: Sequence, t: int, c: int = 1, tol: float = TAU
) -> bool:
    lhs, rhs = transform_general_sides(field, alphas, betas, t, c)
    return abs(lhs - rhs) < tol


def transform_special_sides(
    field: FqField, alpha, d: int, t: int, c: int = 1
) -> tuple[complex, complex]:
    """F(alpha,...,alpha; eps,...,eps; t) against conj(alpha)((-1)^(d+1) t) F(...; 1/t)."""
    (k,) = _as_exponents(field, [alpha])
    if k == 0:
        raise HypothesisViolated("alpha must be nontrivial")
    if t == 0:
        raise HypothesisViolated("t must be nonzero")
    alphas = [k] * (d + 1)
    betas = [0] * d
    arg = t if (d + 1) % 2 == 0 else field.neg(t)
    lhs = finite_hg(field, alphas, betas, t, c)
    rhs = field.character(-k)(arg) * finite_hg(field, alphas, betas, field.inv(t), c)
    return lhs, rhs


def verify_transform_special(
    field: FqField, alpha, d: int, t: int, c: int = 1, tol: float = TAU
) -> bool:
    lhs, rhs = transform_special_sides(field, alpha, d, t, c)
    return abs(lhs - rhs) < tol


def field_isomorphism(src: FqField, dst: FqField) -> tuple[list[int], int]:
    """An isomorphism src -> dst, as an element map and the exponent map.

    The image of x is a root of src's modulus in dst. Returns ``(image, u)``
    where ``image[x]`` is the image of the element with code x, and
    chi_k on src corresponds to chi_{k u} on dst.
    """
    if (src.p, src.f) != (dst.p, dst.f):
        raise ValueError("fields of different size")
    mod = src.spec.modulus

    def evaluate(coeffs, r):
        acc = 0
        for cf in reversed(coeffs):
            acc = dst.add(dst.mul(acc, r), cf % dst.p)
        return acc

    root = next(r for r in range(dst.q) if evaluate(mod, r) == 0)
    image = [evaluate(src.spec.decode(x), root) for x in range(src.q)]
    m = src.q - 1
    s = dst.log[image[src.generator]]  # sigma(g_src) = g_dst^s
    return image, pow(s, -1, m)


# ---------------------------------------------------------------------------
# sweep cases
# ---------------------------------------------------------------------------


def fmt_complex(z: complex) -> str:
    """'re,im' with 12 significant digits; values below 1e-12 print as 0."""
    re = 0.0 if abs(z.real) < 1e-12 else z.real
    im = 0.0 if abs(z.imag) < 1e-12 else z.imag
    return f"{re:.12g},{im:.12g}"


def random_general_tuple(field: FqField, d: int, rng: random.Random):
    m = field.q - 1
    a0 = rng.randrange(1, m) if m > 1 else None
    if a0 is None:
        raise HypothesisViolated("F_2 has no nontrivial character")
    alphas, betas = [a0], []
    for _ in range(d):
        ai = rng.randrange(m)
        bi = rng.randrange(m - 1)
        if bi >= ai:
            bi += 1
        alphas.append(ai)
        betas.append(bi)
    return alphas, betas, rng.randrange(1, field.q)


def run_finite_case(case, seed: int = 0):
    from .verify import CaseResult, PointRecord, _case_rng, case_params

    spec = FqSpec(case.p, case.f, case.modulus or default_modulus(case.p, case.f))
    field = build_field(spec)
    result = CaseResult(case.case_id, case.kind, case_params(case))
    rng = _case_rng(case, seed)
    m = field.q - 1
    fe = field.format_element

    def record(point, lhs, rhs):
        result.records.append(
            PointRecord(
                point=point,
                lhs=fmt_complex(lhs),
                rhs=fmt_complex(rhs),
                match=abs(lhs - rhs) < TAU,
            )
        )

    if case.kind == "gs-identity":
        for phi in field.characters():
            record(f"phi={phi.k}", *gs_identity_sides(field, phi))
    elif case.kind == "finite-special":
        if case.tuples == "random":
            pairs = [
                (rng.randrange(1, m), rng.randrange(1, field.q))
                for _ in range(case.samples or 100)
            ]
        else:
            pairs = [(k, t) for k in range(1, m) for t in field.nonzero()]
        for k, t in pairs:
            record(f"alpha={k};t={fe(t)}", *transform_special_sides(field, k, case.d, t))
    elif case.kind == "finite-general":
        for _ in range(case.samples or 100):
            alphas, betas, t = random_general_tuple(field, case.d, rng)
            point = (
                f"alpha={','.join(map(str, alphas))};"
                f"beta={','.join(map(str, betas))};t={fe(t)}"
            )
            record(point, *transform_general_sides(field, alphas, betas, t))
    else:
        raise ValueError(f"not a finite-field kind: {case.kind}")
    result.extra["generator"] = fe(field.generator)
    result.passed = all(r.match for r in result.records)
    return result
