"""Arithmetic in prime-power finite fields GF(p^k).

Elements are coefficient vectors over GF(p) in the polynomial basis
1, x, ..., x^(k-1), reduced modulo a fixed monic irreducible polynomial.
The canonical index of an element is the base-p integer

    index(c_0, ..., c_{k-1}) = sum_i c_i * p**i,

so index 0 is the zero element and enumeration order is stable across
runs.  The irreducible polynomial per (p, k) is pinned to the Conway
polynomial (for k = 1, x - g with g the smallest primitive root mod p),
which keeps everything built on element indexing -- MUB matrices,
affine permutation families -- bit-identical between runs.

Supported field sizes are the prime powers q <= 64.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

# Conway polynomials for the extension fields p^k <= 64, constant
# coefficient first.  Prime fields (k = 1) are generated on demand.
_CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def smallest_primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group of GF(p)."""
    if p == 2:
        return 1
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise ArithmeticError(f"no primitive root found mod {p}")


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p**k, or raise if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = min(_prime_factors(q))
    k = 0
    m = q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


def is_prime_power(q: int) -> bool:
    try:
        factor_prime_power(q)
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficient vectors constant-first
# ---------------------------------------------------------------------------

def _poly_trim(c: list[int]) -> list[int]:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m) and any(a):
        a = _poly_trim(a)
        if len(a) < len(m):
            break
        shift = len(a) - len(m)
        factor = (a[-1] * inv_lead) % p
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * mi) % p
        a = _poly_trim(a)
    return _poly_trim(a)


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Exhaustive search for monic factors of degree 1..deg//2."""
    k = len(poly) - 1
    for deg in range(1, k // 2 + 1):
        for idx in range(p ** deg):
            cand = [0] * deg + [1]
            t = idx
            for i in range(deg):
                cand[i] = t % p
                t //= p
            if _poly_mod(poly, cand, p) == [0]:
                return False
    return True


# ---------------------------------------------------------------------------
# field specification and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) with a pinned monic irreducible polynomial of degree k."""

    p: int
    k: int
    irreducible: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise ValueError("extension degree must be >= 1")
        if len(self.irreducible) != self.k + 1 or self.irreducible[-1] != 1:
            raise ValueError("irreducible must be monic of degree k")
        if any(not 0 <= c < self.p for c in self.irreducible):
            raise ValueError("irreducible coefficients out of range")
        if not _is_irreducible(self.irreducible, self.p):
            raise ValueError(f"{self.irreducible} is reducible over GF({self.p})")

    @property
    def q(self) -> int:
        return self.p ** self.k


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.spec.k:
            raise ValueError("coefficient vector has wrong length")
        if any(not 0 <= c < self.spec.p for c in self.coeffs):
            raise ValueError("coefficients out of range")

    @property
    def index(self) -> int:
        return sum(c * self.spec.p ** i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


@lru_cache(maxsize=None)
def field_spec(q: int) -> FieldSpec:
    """The canonical FieldSpec for a prime power q <= 64."""
    p, k = factor_prime_power(q)
    if q > 64:
        raise ValueError("field sizes are limited to q <= 64")
    if k == 1:
        g = smallest_primitive_root(p)
        irreducible = ((-g) % p, 1)
    else:
        irreducible = _CONWAY[(p, k)]
    return FieldSpec(p, k, irreducible)


def zero(spec: FieldSpec) -> FieldElement:
    return FieldElement(spec, (0,) * spec.k)


def one(spec: FieldSpec) -> FieldElement:
    return FieldElement(spec, (1,) + (0,) * (spec.k - 1))


def element_from_index(spec: FieldSpec, index: int) -> FieldElement:
    if not 0 <= index < spec.q:
        raise ValueError(f"index {index} out of range for GF({spec.q})")
    coeffs = []
    for _ in range(spec.k):
        coeffs.append(index % spec.p)
        index //= spec.p
    return FieldElement(spec, tuple(coeffs))


def enumerate_field(spec: FieldSpec) -> list[FieldElement]:
    """All q elements in canonical base-p digit order; index 0 is zero."""
    return [element_from_index(spec, i) for i in range(spec.q)]


def _check_specs(x: FieldElement, y: FieldElement):
    if x.spec != y.spec:
        raise ValueError("field mismatch")


def gf_add(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_specs(x, y)
    p = x.spec.p
    return FieldElement(x.spec, tuple((a + b) % p for a, b in zip(x.coeffs, y.coeffs)))


def gf_neg(x: FieldElement) -> FieldElement:
    p = x.spec.p
    return FieldElement(x.spec, tuple((-a) % p for a in x.coeffs))


def gf_sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return gf_add(x, gf_neg(y))


def gf_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    _check_specs(x, y)
    spec = x.spec
    prod = _poly_mul(list(x.coeffs), list(y.coeffs), spec.p)
    red = _poly_mod(prod, list(spec.irreducible), spec.p)
    red = red + [0] * (spec.k - len(red))
    return FieldElement(spec, tuple(red[: spec.k]))


def gf_pow(x: FieldElement, n: int) -> FieldElement:
    if n < 0:
        return gf_pow(gf_inv(x), -n)
    result = one(x.spec)
    base = x
    while n:
        if n & 1:
            result = gf_mul(result, base)
        base = gf_mul(base, base)
        n >>= 1
    return result


def gf_inv(x: FieldElement) -> FieldElement:
    if x.is_zero():
        raise ZeroDivisionError("zero has no inverse")
    # x^(q-2) = x^(-1) in GF(q)
    return gf_pow(x, x.spec.q - 2)


def gf_trace(x: FieldElement) -> int:
    """Field trace Tr(x) = sum_i x^(p^i) into the prime subfield."""
    spec = x.spec
    acc = x
    frob = x
    for _ in range(spec.k - 1):
        frob = gf_pow(frob, spec.p)
        acc = gf_add(acc, frob)
    if any(acc.coeffs[1:]):
        raise ArithmeticError("trace did not land in the prime subfield")
    return acc.coeffs[0]
