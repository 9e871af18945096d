"""Exact unitary 2-designs and Haar sampling.

The single-qubit Clifford group (24 elements modulo global phase) is
generated by closure from H and S.  The 2-design property is checked
through the decoupling moment operator: for

    M = sum_{a1 a2 a2'} |a1 a2><a1 a2| (x) |a1 a2'><a1 a2'|

the family average Gamma_hat = (1/L) sum_i (U_i^dag)^(x2) M U_i^(x2) is
compared in Hilbert-Schmidt norm with the Haar second moment

    Gamma = (|A||A2| - 1)/(|A|^2 - 1) * I  +  (|A| - |A2|)/(|A|^2 - 1) * F.

Haar unitaries come from QR of a complex Ginibre matrix with the R
diagonal phase fix, so a fixed RNG stream reproduces matrices exactly.
"""

from __future__ import annotations

import numpy as np

from .linalg import dagger, hs_norm, swap_operator, tensor
from .mubs import UnitaryFamily


def canonical_phase(u: np.ndarray) -> np.ndarray:
    """Normalize the global phase: first nonzero entry real positive."""
    flat = u.reshape(-1)
    for z in flat:
        if abs(z) > 1e-9:
            return u * (np.conj(z) / abs(z))
    raise ValueError("zero matrix has no phase gauge")


def single_qubit_clifford() -> UnitaryFamily:
    """The 24 single-qubit Cliffords (up to phase), closed under H and S."""
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    s = np.array([[1, 0], [0, 1j]], dtype=complex)
    gens = (h, s)

    def key_of(u):
        return (np.round(u, 10) + 0.0).tobytes()  # +0.0 folds -0.0 into +0.0

    members = [canonical_phase(np.eye(2, dtype=complex))]
    seen = {key_of(members[0])}
    frontier = [members[0]]
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                cand = canonical_phase(g @ u)
                key = key_of(cand)
                if key not in seen:
                    seen.add(key)
                    members.append(cand)
                    nxt.append(cand)
        frontier = nxt
    return UnitaryFamily(2, tuple(members), "clifford")


def haar_moment_operator(dim_a: int, dim_a2: int) -> np.ndarray:
    c_id = (dim_a * dim_a2 - 1) / (dim_a ** 2 - 1)
    c_sw = (dim_a - dim_a2) / (dim_a ** 2 - 1)
    return c_id * np.eye(dim_a * dim_a) + c_sw * swap_operator(dim_a)


def verify_unitary_2design(fam: UnitaryFamily, dim_a2: int) -> float:
    """HS deviation of the family's decoupling moment from the Haar value."""
    dim_a = fam.dim
    if dim_a % dim_a2 != 0:
        raise ValueError(f"|A2|={dim_a2} does not divide |A|={dim_a}")
    diag = np.zeros(dim_a * dim_a)
    for x in range(dim_a):
        for y in range(dim_a):
            if x // dim_a2 == y // dim_a2:
                diag[x * dim_a + y] = 1.0
    m = np.diag(diag).astype(complex)
    avg = np.zeros_like(m)
    for u in fam.members:
        u2 = tensor(u, u)
        avg += dagger(u2) @ m @ u2
    avg /= len(fam.members)
    return hs_norm(avg - haar_moment_operator(dim_a, dim_a2))


def two_design_size_lower_bound(dim_a: int) -> int:
    """Minimum member count of an exact 2-design on a dim_a system."""
    return dim_a ** 4 - 2 * dim_a ** 2 + 2


def sample_haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via Ginibre + QR with phase-fixed R diagonal."""
    if d > 64:
        raise ValueError("dimension budget exceeded")
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
