"""Mutually unbiased bases in prime-power dimension.

A family member U is the unitary that maps its basis to the
computational one: the measurement it defines is "apply U, then measure
in the standard basis", so the basis vectors themselves are the columns
of U^dag.

Constructions (validated exhaustively by ``verify_mub_property``, an
equality check, so any correct variant is interchangeable):

* odd characteristic, q = p^k:   U_j[b, x] = q^(-1/2) w^(-Tr(j x^2 + b x))
  with w = exp(2 pi i / p) and Tr the field trace to GF(p);
* even characteristic, q = 2^k:  the quadratic phases live in Z4,
  U_j[b, x] = q^(-1/2) (-i)^(g_j(x)) (-1)^(Tr(b x)) where, expanding
  x = sum x_i e_i over a GF(2)-basis,

      g_j(x) = sum_i x_i Tr(j e_i^2) + 2 sum_{i<l} x_i x_l Tr(j e_i e_l)  (mod 4),

  which satisfies g_j(x+y) = g_j(x) + g_j(y) + 2 Tr(j x y) and hence
  yields flat Gauss sums |S|^2 = q.

Every basis vector has first component q^(-1/2) > 0, which fixes the
per-vector phase gauge reproducibly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import fields
from .linalg import HERM_TOL, dagger, hs_norm, swap_operator, tensor

FAMILY_KINDS = ("full-mub", "bitwise", "clifford", "haar", "mub-perm", "bitwise-perm")


@dataclass(frozen=True)
class UnitaryFamily:
    """Ordered list of unitaries on a dim-dimensional system; seed = index."""

    dim: int
    members: tuple[np.ndarray, ...]
    label: str

    def __post_init__(self):
        members = tuple(np.asarray(m, dtype=complex) for m in self.members)
        object.__setattr__(self, "members", members)
        if self.label not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.label!r}")
        eye = np.eye(self.dim)
        for idx, u in enumerate(members):
            if u.shape != (self.dim, self.dim):
                raise ValueError(f"member {idx} has shape {u.shape}")
            if hs_norm(dagger(u) @ u - eye) > HERM_TOL:
                raise ValueError(f"member {idx} is not unitary")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def single_qubit_mubs() -> UnitaryFamily:
    """The three qubit MUB measurements: computational, Hadamard, Y basis."""
    v0 = np.eye(2, dtype=complex)
    v1 = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    v2 = np.array([[1, 1j], [1j, 1]], dtype=complex) / math.sqrt(2)
    return UnitaryFamily(2, (v0, v1, v2), "bitwise")


def _mub_members_odd(q: int) -> list[np.ndarray]:
    spec = fields.field_spec(q)
    elems = fields.enumerate_field(spec)
    omega = np.exp(2j * np.pi / spec.p)
    tr = [fields.gf_trace(e) for e in elems]
    mul = [[fields.gf_mul(a, b).index for b in elems] for a in elems]
    members = [np.eye(q, dtype=complex)]
    for j in range(q):
        u = np.empty((q, q), dtype=complex)
        for b in range(q):
            for x in range(q):
                phase = tr[(fields.gf_add(
                    elems[mul[j][mul[x][x]]], elems[mul[b][x]])).index]
                u[b, x] = omega ** (-phase)
        members.append(u / math.sqrt(q))
    return members


def _mub_members_even(q: int) -> list[np.ndarray]:
    spec = fields.field_spec(q)
    k = spec.k
    elems = fields.enumerate_field(spec)
    basis = [fields.element_from_index(spec, 2 ** i) for i in range(k)]
    members = [np.eye(q, dtype=complex)]
    for j_el in elems:
        # g_j per computational index, built from the GF(2) digit expansion
        g = np.zeros(q, dtype=int)
        tr_sq = [fields.gf_trace(fields.gf_mul(j_el, fields.gf_mul(e, e)))
                 for e in basis]
        tr_cross = [[fields.gf_trace(fields.gf_mul(j_el, fields.gf_mul(basis[i], basis[l])))
                     for l in range(k)] for i in range(k)]
        for x in range(q):
            digits = [(x >> i) & 1 for i in range(k)]
            val = sum(d * t for d, t in zip(digits, tr_sq))
            val += 2 * sum(digits[i] * digits[l] * tr_cross[i][l]
                           for i in range(k) for l in range(i + 1, k))
            g[x] = val % 4
        u = np.empty((q, q), dtype=complex)
        for b in range(q):
            b_el = elems[b]
            for x in range(q):
                trbx = fields.gf_trace(fields.gf_mul(b_el, elems[x]))
                u[b, x] = (-1j) ** g[x] * (-1) ** trbx
        members.append(u / math.sqrt(q))
    return members


def build_full_mub_set(q: int) -> UnitaryFamily:
    """q+1 mutually unbiased bases of C^q, identity (computational) first."""
    if not fields.is_prime_power(q):
        raise ValueError("dimension must be a prime power")
    if q > 64:
        raise ValueError("field sizes are limited to q <= 64")
    if q == 2:
        members = single_qubit_mubs().members
    elif q % 2 == 0:
        members = _mub_members_even(q)
    else:
        members = _mub_members_odd(q)
    return UnitaryFamily(q, tuple(members), "full-mub")


def verify_mub_property(fam: UnitaryFamily) -> float:
    """max over i != j, a, a' of | |<a'| U_j U_i^dag |a>|^2 - 1/dim |."""
    inv_d = 1.0 / fam.dim
    worst = 0.0
    for i, ui in enumerate(fam.members):
        for j, uj in enumerate(fam.members):
            if i == j:
                continue
            overlap = np.abs(uj @ dagger(ui)) ** 2
            worst = max(worst, float(np.max(np.abs(overlap - inv_d))))
    return worst


def verify_projective_2design(fam: UnitaryFamily) -> float:
    """HS deviation of the MUB-vector second moment from 2 Pi_sym / (q(q+1)).

    For a full set of q+1 MUBs the two sides are equal, so the return
    value is numerical noise; a deficient family gives a strictly
    positive deviation.
    """
    q = fam.dim
    moment = np.zeros((q * q, q * q), dtype=complex)
    for u in fam.members:
        udag = dagger(u)
        for a in range(q):
            v = udag[:, a]
            w = np.kron(v, v)
            moment += np.outer(w, np.conj(w))
    moment /= q * (q + 1)
    target = (np.eye(q * q) + swap_operator(q)) / (q * (q + 1))
    return hs_norm(moment - target)


def build_bitwise_family(d: int, n: int) -> UnitaryFamily:
    """All (d+1)^n tensor products of single-qudit MUB unitaries.

    Member order follows the base-(d+1) digits of (u_1, ..., u_n) with
    u_1 most significant, matching the composite index convention.
    """
    if d ** n > 64:
        raise ValueError(f"dimension budget exceeded: {d}^{n} > 64")
    single = build_full_mub_set(d)
    members = []
    for word in product(range(d + 1), repeat=n):
        members.append(tensor(*(single.members[u] for u in word)))
    return UnitaryFamily(d ** n, tuple(members), "bitwise")
