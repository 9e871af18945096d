"""Exact QC-extractor distances and the closed-form bounds they obey.

The evaluated quantity is the average measured-output distance

    (1/L) sum_i || T(U_i rho_AE U_i^dag) - I_{A1}/|A1| (x) rho_E ||_1,

where T traces out A2 and dephases A1 in the standard basis.  Family
constructors pair MUB / bitwise unitaries with pairwise independent
affine permutations of the computational index set, identified with
GF(|A|) through the canonical field element ordering.

Bound evaluators return the right-hand sides

    full MUB set:   sqrt(|A1|/(|A|+1) * 2^-Hmin) + 2 delta
    2-design:       sqrt(|A1|/|A|     * 2^-Hmin) + 2 delta
    bitwise:        sqrt(2^((1 - log(d+1) + xi log d) n) (1 + 2^(-Hmin+z)))
                    + 2 (delta + delta'),   z = log(2/delta'^2 + 1/(1-delta))

evaluated here at smoothing delta = 0 with the exact min-entropy, which
keeps every inequality valid (the smooth constants only weaken it).

Per-member distances are independent; set QCEXT_THREADS to evaluate
them on a thread pool.  The average is reduced in member-index order
regardless of the worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import perms
from .designs import sample_haar_unitary
from .entropy import EntropyReport, hmin
from .linalg import DensityOperator, density, partial_trace, trace_norm
from .mubs import UnitaryFamily, build_bitwise_family, build_full_mub_set


@dataclass(frozen=True)
class ExtractorEvalReport:
    family_label: str
    dim_a: int
    dim_a1: int
    dim_a2: int
    dim_e: int
    lhs_avg_distance: float
    per_member_distances: tuple[float, ...]
    bound_name: str | None = None
    rhs_bound: float = float("nan")
    entropy_inputs: EntropyReport | None = None
    margin: float = float("nan")
    subsampled: bool = False

    def __post_init__(self):
        if not -1e-12 <= self.lhs_avg_distance <= 2.0 + 1e-9:
            raise ValueError(f"average distance {self.lhs_avg_distance} out of [0, 2]")


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("QCEXT_THREADS", "1")))
    except ValueError:
        return 1


def measured_blocks(u: np.ndarray, rho: DensityOperator, dim_a1: int) -> np.ndarray:
    """E-blocks of T(U rho U^dag): blocks[a1] = sum_a2 <a1 a2|U rho U^dag|a1 a2>_E."""
    dim_a = u.shape[0]
    dim_a2 = dim_a // dim_a1
    dim_e = rho.dim // dim_a
    u_ext = np.kron(u, np.eye(dim_e))
    out = u_ext @ rho.mat @ np.conj(u_ext.T)
    t = out.reshape(dim_a1, dim_a2, dim_e, dim_a1, dim_a2, dim_e)
    return np.einsum("iaeiaf->ief", t)


def eval_qc_distance(fam: UnitaryFamily, rho_ae: DensityOperator, dim_a1: int,
                     subsample: int | None = None,
                     rng: np.random.Generator | None = None) -> ExtractorEvalReport:
    """Average trace distance of the measured output from uniform (x) rho_E."""
    dims = rho_ae.dims
    if dims[0] != fam.dim:
        raise ValueError(f"family dim {fam.dim} does not match state dims {dims}")
    if fam.dim % dim_a1 != 0:
        raise ValueError(f"|A1|={dim_a1} does not divide |A|={fam.dim}")
    dim_a2 = fam.dim // dim_a1
    dim_e = rho_ae.dim // fam.dim
    rho_e = partial_trace(rho_ae, tuple(range(1, len(dims)))).mat if len(dims) > 1 \
        else np.array([[rho_ae.trace]])
    target = rho_e / dim_a1

    members = fam.members
    subsampled = False
    if subsample is not None and subsample < len(members):
        if rng is None:
            raise ValueError("subsampling requires an rng")
        idx = rng.choice(len(members), size=subsample, replace=False)
        members = tuple(members[i] for i in sorted(idx))
        subsampled = True

    def one(u):
        blocks = measured_blocks(u, rho_ae, dim_a1)
        return math.fsum(trace_norm(blocks[i] - target) for i in range(dim_a1))

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            dists = tuple(pool.map(one, members))
    else:
        dists = tuple(one(u) for u in members)
    avg = math.fsum(dists) / len(dists)
    return ExtractorEvalReport(
        family_label=fam.label, dim_a=fam.dim, dim_a1=dim_a1, dim_a2=dim_a2,
        dim_e=dim_e, lhs_avg_distance=avg, per_member_distances=dists,
        subsampled=subsampled)


def with_bound(report: ExtractorEvalReport, bound_name: str, rhs: float,
               entropy_inputs: EntropyReport | None = None) -> ExtractorEvalReport:
    return replace(report, bound_name=bound_name, rhs_bound=rhs,
                   entropy_inputs=entropy_inputs, margin=rhs - report.lhs_avg_distance)


# ---------------------------------------------------------------------------
# family constructors
# ---------------------------------------------------------------------------

def compose_mub_perm_family(q: int, dim_a1: int | None = None) -> UnitaryFamily:
    """{P U_i} for all affine P and the q+1 MUB members, P-major i-minor."""
    if dim_a1 is not None and q % dim_a1 != 0:
        raise ValueError(f"|A1|={dim_a1} does not divide |A|={q}")
    mub = build_full_mub_set(q)
    members = []
    for p in perms.build_affine_family(q):
        pu = perms.permutation_unitary(p)
        for u in mub.members:
            members.append(pu @ u)
    return UnitaryFamily(q, tuple(members), "mub-perm")


def compose_bitwise_perm_family(d: int, n: int) -> UnitaryFamily:
    """{P V} with V the bitwise tensor family and P affine over GF(d^n)."""
    if d ** n > 16:
        raise ValueError(
            f"full bitwise-perm family in dimension {d}^{n} exceeds the exact "
            "evaluation budget; evaluate a subsample instead")
    bitwise = build_bitwise_family(d, n)
    members = []
    for p in perms.build_affine_family(d ** n):
        pu = perms.permutation_unitary(p)
        for v in bitwise.members:
            members.append(pu @ v)
    return UnitaryFamily(d ** n, tuple(members), "bitwise-perm")


# ---------------------------------------------------------------------------
# bound evaluators (all logs base 2, smoothing enters as explicit constants)
# ---------------------------------------------------------------------------

def bound_full_mub(q: int, dim_a1: int, hmin_delta: float, delta: float) -> float:
    return math.sqrt(dim_a1 / (q + 1) * 2.0 ** (-hmin_delta)) + 2.0 * delta


def bound_2design(dim_a: int, dim_a1: int, hmin_delta: float, delta: float) -> float:
    return math.sqrt(dim_a1 / dim_a * 2.0 ** (-hmin_delta)) + 2.0 * delta


def bound_bitwise(d: int, n: int, dim_a1: int, hmin_delta: float,
                  delta: float, delta_prime: float) -> float:
    if delta_prime <= 0:
        raise ValueError("delta_prime must be positive")
    if not 0 <= delta < 1:
        raise ValueError("delta must lie in [0, 1)")
    m = round(math.log(dim_a1, d)) if dim_a1 > 1 else 0
    if dim_a1 != d ** m or m > n:
        raise ValueError(f"|A1|={dim_a1} is not a power of d={d} within n={n}")
    z = math.log2(2.0 / delta_prime ** 2 + 1.0 / (1.0 - delta))
    # (1 - log(d+1) + xi log d) n  with  xi = m/n
    exponent = (1.0 - math.log2(d + 1)) * n + m * math.log2(d)
    return math.sqrt(2.0 ** exponent * (1.0 + 2.0 ** (-hmin_delta + z))) \
        + 2.0 * (delta + delta_prime)


def max_output_size(rho_ae: DensityOperator) -> float:
    """log|A| + Hmin(A|E), the output-size ceiling for this state."""
    return math.log2(rho_ae.dims[0]) + hmin(rho_ae).value


def seed_lower_bound_witness(fam: UnitaryFamily, dim_a1: int) -> float:
    """Distance of the witness state under the family's first member.

    The state spreads 2/|A| mass over the U_1-rotated basis states whose
    A1 index lies in the first half S; measuring with U_1 then lands
    exactly half the A1 outcomes at 2/|A1| and the rest at 0, at trace
    distance exactly 1 from uniform.
    """
    if dim_a1 % 2 != 0:
        raise ValueError("|A1| must be even to take a half-size subset")
    dim_a = fam.dim
    dim_a2 = dim_a // dim_a1
    u1 = fam.members[0]
    diag = np.zeros(dim_a)
    for a1 in range(dim_a1 // 2):
        diag[a1 * dim_a2:(a1 + 1) * dim_a2] = 2.0 / dim_a
    rho = density(np.conj(u1.T) @ np.diag(diag).astype(complex) @ u1, (dim_a,))
    report = eval_qc_distance(fam, rho, dim_a1)
    return report.per_member_distances[0]


# ---------------------------------------------------------------------------
# random test states and empirical Haar families
# ---------------------------------------------------------------------------

def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def max_entangled(dim_a: int, dim_e: int) -> DensityOperator:
    r = min(dim_a, dim_e)
    v = np.zeros(dim_a * dim_e, dtype=complex)
    for i in range(r):
        v[i * dim_e + i] = 1.0 / math.sqrt(r)
    return DensityOperator.from_vector(v, (dim_a, dim_e))


def sample_test_states(dim_a: int, dim_e: int, count: int,
                       rng: np.random.Generator,
                       include_edges: bool = True) -> list[DensityOperator]:
    """Random rho_AE spanning positive, zero, and negative Hmin regimes.

    Each draw is (1-t) * (mixture of up to 3 random pure states) +
    t * Phi, with t cycling {0, 0.5, 1} and Phi maximally entangled
    across A:E (a random pure state when E is trivial).  The exact
    maximally mixed and maximally entangled states are prepended as edge
    cases.
    """
    dims = (dim_a, dim_e) if dim_e > 1 else (dim_a,)
    total = dim_a * dim_e
    out: list[DensityOperator] = []
    if include_edges and count >= 2:
        out.append(density(np.eye(total) / total, dims))
        if dim_e > 1:
            phi = max_entangled(dim_a, dim_e)
            out.append(density(phi.mat, dims))
        else:
            out.append(DensityOperator.from_vector(random_pure(dim_a, rng), dims))
    t_cycle = (0.0, 0.5, 1.0)
    while len(out) < count:
        t = t_cycle[len(out) % 3]
        r = int(rng.integers(1, 4))
        weights = rng.dirichlet(np.ones(r))
        mix = np.zeros((total, total), dtype=complex)
        for w in weights:
            v = random_pure(total, rng)
            mix += w * np.outer(v, np.conj(v))
        if dim_e > 1:
            phi = max_entangled(dim_a, dim_e).mat
        else:
            v = random_pure(total, rng)
            phi = np.outer(v, np.conj(v))
        out.append(density((1.0 - t) * mix + t * phi, dims))
    return out[:count]


def eval_haar_empirical(dim_a: int, dim_a1: int, n_members: int, trials: int,
                        rng: np.random.Generator,
                        dim_e: int = 1) -> ExtractorEvalReport:
    """Sample a Haar family, sweep random states, report the worst margin.

    The 2-design bound is attached as a diagnostic reference curve only;
    no theorem is asserted for a finite Haar sample.
    """
    members = tuple(sample_haar_unitary(dim_a, rng) for _ in range(n_members))
    fam = UnitaryFamily(dim_a, members, "haar")
    worst: ExtractorEvalReport | None = None
    for rho in sample_test_states(dim_a, dim_e, trials, rng):
        rep = eval_qc_distance(fam, rho, dim_a1)
        k = hmin(rho if len(rho.dims) > 1 else density(rho.mat, (dim_a, 1)))
        rhs = bound_2design(dim_a, dim_a1, k.value, 0.0)
        rep = with_bound(rep, "2design-reference", rhs)
        if worst is None or rep.margin < worst.margin:
            worst = rep
    assert worst is not None
    return worst
