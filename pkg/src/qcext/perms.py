"""Pairwise independent affine permutation families over GF(q).

The family {x -> a*x + b : a != 0, b} acting on the canonical element
enumeration of GF(q); under a uniformly random member, any two distinct
points land on any two distinct targets with probability exactly
1/(q(q-1)).  That property is verified here by exact integer counting,
never in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import fields
from .fields import FieldElement


@dataclass(frozen=True)
class AffinePermutation:
    """x -> a*x + b on GF(q); a != 0 makes it a bijection."""

    a: FieldElement
    b: FieldElement

    def __post_init__(self):
        if self.a.spec != self.b.spec:
            raise ValueError("field mismatch")
        if self.a.is_zero():
            raise ValueError("a must be nonzero")

    @property
    def spec(self):
        return self.a.spec

    def apply(self, x: FieldElement) -> FieldElement:
        return fields.gf_add(fields.gf_mul(self.a, x), self.b)

    def index_map(self) -> tuple[int, ...]:
        """pi with pi[index(x)] = index(a*x + b)."""
        elems = fields.enumerate_field(self.spec)
        return tuple(self.apply(x).index for x in elems)

    def inverse(self) -> "AffinePermutation":
        a_inv = fields.gf_inv(self.a)
        return AffinePermutation(a_inv, fields.gf_neg(fields.gf_mul(a_inv, self.b)))

    def compose(self, other: "AffinePermutation") -> "AffinePermutation":
        """self o other: x -> self(other(x))."""
        return AffinePermutation(
            fields.gf_mul(self.a, other.a),
            fields.gf_add(fields.gf_mul(self.a, other.b), self.b),
        )


def build_affine_family(q: int) -> list[AffinePermutation]:
    """All q(q-1) affine bijections, a-index major, b-index minor."""
    spec = fields.field_spec(q)
    elems = fields.enumerate_field(spec)
    return [
        AffinePermutation(a, b)
        for a in elems
        if not a.is_zero()
        for b in elems
    ]


def verify_pairwise_independence(family, q: int) -> float:
    """Exact max deviation of Pr[pi(x1)=y1, pi(x2)=y2] from 1/(q(q-1)).

    Counts events over the whole family with integer arithmetic and
    returns float(max |count/L - 1/(q(q-1))|) over all tuples with
    x1 != x2, y1 != y2.
    """
    if not family:
        raise ValueError("empty family")
    maps = [p.index_map() for p in family]
    L = len(maps)
    counts = {}
    for pi in maps:
        for x1 in range(q):
            for x2 in range(q):
                if x1 == x2:
                    continue
                key = (x1, x2, pi[x1], pi[x2])
                counts[key] = counts.get(key, 0) + 1
    target = Fraction(1, q * (q - 1))
    worst = Fraction(0)
    for x1 in range(q):
        for x2 in range(q):
            if x1 == x2:
                continue
            for y1 in range(q):
                for y2 in range(q):
                    if y1 == y2:
                        continue
                    dev = abs(Fraction(counts.get((x1, x2, y1, y2), 0), L) - target)
                    if dev > worst:
                        worst = dev
    return float(worst)


def permutation_unitary(perm: AffinePermutation) -> np.ndarray:
    """0/1 matrix sending basis vector x to basis vector index(a*x+b)."""
    pi = perm.index_map()
    q = perm.spec.q
    mat = np.zeros((q, q), dtype=complex)
    for x, y in enumerate(pi):
        mat[y, x] = 1.0
    return mat
