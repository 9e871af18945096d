"""Entropic uncertainty relations with quantum side information.

The bridge from extractor distances to uncertainty is the classical-
quantum state over outcome, side information, and seed,

    rho_K1EJ = (1/L) sum_j M_j(rho_AE) (x) |j><j|_J ,

whose trace distance from iota = I/|K1| (x) rho_EJ equals the average
extractor distance eps(rho).  Two consequences are checked exactly:

* the purified-distance core P(rho_K1EJ, iota) <= sqrt(2 eps(rho)),
  which is what makes the smooth min-entropy of the outcome at least
  log|K1| (the entropic restatement follows by definition and is not
  re-asserted);
* the von Neumann lower bound (1 - 4 eps) log|K1| - 2 h(eps) via the
  improved Alicki-Fannes continuity inequality.

``ur_table_bound`` evaluates the closed-form min-entropy lower bounds
for the two-design, full-MUB, and bitwise measurement schemes;
``vn_ur_check`` evaluates the exact von Neumann relation

    (1/(d+1)^n) sum_j H(K|E) >= n (log(d+1) - 1) + min{0, H(A|E)}

for the bitwise MUB measurements with nothing traced out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import cond_von_neumann
from .extractor_lab import eval_qc_distance, measured_blocks
from .linalg import DensityOperator, partial_trace, purified_distance
from .mubs import UnitaryFamily, build_bitwise_family


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError("binary entropy needs an argument in [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def build_kej_state(fam: UnitaryFamily, rho_ae: DensityOperator,
                    dim_a1: int) -> DensityOperator:
    """rho_K1EJ: measured output (x) uniform classical seed register."""
    if rho_ae.dims[0] != fam.dim:
        raise ValueError("family dim does not match state")
    if fam.dim % dim_a1 != 0:
        raise ValueError(f"|A1|={dim_a1} does not divide |A|={fam.dim}")
    dim_e = rho_ae.dim // fam.dim
    n_seed = len(fam.members)
    out = np.zeros((dim_a1, dim_e, n_seed, dim_a1, dim_e, n_seed), dtype=complex)
    for j, u in enumerate(fam.members):
        blocks = measured_blocks(u, rho_ae, dim_a1) / n_seed
        for k in range(dim_a1):
            out[k, :, j, k, :, j] = blocks[k]
    d = dim_a1 * dim_e * n_seed
    return DensityOperator(out.reshape(d, d), (dim_a1, dim_e, n_seed))


@dataclass(frozen=True)
class MetaCheck:
    eps_rho: float
    purified_dist: float
    threshold: float


def meta_minentropy_check(fam: UnitaryFamily, rho_ae: DensityOperator,
                          dim_a1: int) -> MetaCheck:
    """P(rho_K1EJ, I/|K1| (x) rho_EJ) against sqrt(2 eps(rho)).

    Raises if the inequality fails beyond 1e-7, which would contradict
    the trace-distance/purified-distance sandwich.
    """
    eps_rho = eval_qc_distance(fam, rho_ae, dim_a1).lhs_avg_distance
    rho_kej = build_kej_state(fam, rho_ae, dim_a1)
    rho_ej = partial_trace(rho_kej, (1, 2))
    iota = DensityOperator(
        np.kron(np.eye(dim_a1) / dim_a1, rho_ej.mat), rho_kej.dims)
    p = purified_distance(rho_kej, iota)
    threshold = math.sqrt(2.0 * eps_rho)
    if p > threshold + 1e-7:
        raise RuntimeError(
            f"purified distance {p} exceeds sqrt(2 eps) = {threshold}")
    return MetaCheck(eps_rho=eps_rho, purified_dist=p, threshold=threshold)


def vn_lower_from_distance(eps_rho: float, log_k1: float) -> float:
    """(1 - 4 eps) log|K1| - 2 h(eps), the Alicki-Fannes consequence."""
    if not 0.0 <= eps_rho <= 1.0:
        raise ValueError("eps_rho must lie in [0, 1]")
    return (1.0 - 4.0 * eps_rho) * log_k1 - 2.0 * binary_entropy(eps_rho)


def ur_table_bound(scheme: str, **params) -> float:
    """Closed-form smooth min-entropy lower bounds, in bits.

    two-design: dim_a, hmin, eps, delta
    full-mub:   dim_a, hmin, eps, delta
    bitwise:    d, n, hmin, eps, delta, delta_prime
    """
    eps = params["eps"]
    delta = params.get("delta", 0.0)
    if scheme in ("two-design", "full-mub"):
        slack = eps ** 2 / 2.0 - 2.0 * delta
        if slack <= 0:
            raise ValueError("bound vacuous/undefined: eps^2/2 must exceed 2 delta")
        lead = math.log2(params["dim_a"]) if scheme == "two-design" \
            else math.log2(params["dim_a"] + 1)
        return lead + params["hmin"] + 2.0 * math.log2(slack)
    if scheme == "bitwise":
        d, n = params["d"], params["n"]
        delta_prime = params["delta_prime"]
        slack = eps ** 2 / 2.0 - 2.0 * delta - delta_prime
        if slack <= 0 or delta >= 0.5 or delta_prime <= 0:
            raise ValueError(
                "bound vacuous/undefined: need eps^2/2 > 2 delta + delta' and delta < 1/2")
        corr = math.log2(2.0 / delta_prime ** 2 + 1.0 / (1.0 - 2.0 * delta))
        return n * (math.log2(d + 1) - 1.0) \
            + min(0.0, params["hmin"] - corr) \
            + 2.0 * math.log2(slack) - 1.0
    raise ValueError(f"unknown scheme {scheme!r}")


def vn_ur_check(d: int, n: int, rho_ae: DensityOperator) -> tuple[float, float]:
    """Exact von Neumann uncertainty relation for bitwise MUB measurements.

    Returns (lhs, rhs): the average H(K|E) over all (d+1)^n measurements
    of the full register (|A1| = |A|), and n(log(d+1)-1) + min{0, H(A|E)}.
    """
    dim_a = d ** n
    if rho_ae.dims[0] != dim_a:
        raise ValueError("state dims do not match d^n")
    if rho_ae.dim > 64:
        raise ValueError("dimension budget exceeded")
    fam = build_bitwise_family(d, n)
    dim_e = rho_ae.dim // dim_a
    entropies = []
    for u in fam.members:
        blocks = measured_blocks(u, rho_ae, dim_a)
        out = np.zeros((dim_a * dim_e, dim_a * dim_e), dtype=complex)
        for k in range(dim_a):
            out[k * dim_e:(k + 1) * dim_e, k * dim_e:(k + 1) * dim_e] = blocks[k]
        cq = DensityOperator(out, (dim_a, dim_e))
        entropies.append(cond_von_neumann(cq))
    lhs = math.fsum(entropies) / len(entropies)
    if dim_e > 1:
        h_cond = cond_von_neumann(rho_ae)
    else:
        h_cond = cond_von_neumann(DensityOperator(rho_ae.mat, (dim_a, 1)))
    rhs = n * (math.log2(d + 1) - 1.0) + min(0.0, h_cond)
    return lhs, rhs
