"""Conditional entropies at smoothing zero.

Conventions: all logs are base 2, 0 log 0 = 0, and the conditioning
system is everything after the first subsystem of the state's dims.

The conditional min-entropy is the SDP

    minimize  tr(sigma)   subject to   I_A (x) sigma >= rho_AB,

with Hmin = -log2 of the optimum.  It is solved by a small dense
barrier (path-following) method over the sigma block: damped Newton
steps on  t*tr(sigma) - log det(I (x) sigma - rho)  along an increasing
t schedule, started from sigma = lambda_max(rho) * I (padded into the
strict interior).  A feasible dual point X with tr_A X = I is recovered
from the barrier gradient, so the reported duality gap is a certificate,
not an estimate.  No external solver is involved.

Generalized inverses threshold eigenvalues below 1e-10 * lambda_max.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import DensityOperator, dagger, eig_herm, partial_trace, purify

GAP_TOL = 1e-8
MAX_NEWTON = 200
SUPPORT_TOL = 1e-10


class SolverError(RuntimeError):
    """Barrier solver ran out of iterations; carries the best bounds."""

    def __init__(self, message: str, primal: float | None = None, dual: float | None = None):
        super().__init__(message)
        self.primal = primal
        self.dual = dual


def _entropy_of_eigs(vals: np.ndarray) -> float:
    vals = np.clip(vals, 0.0, None)
    nz = vals[vals > 0]
    return float(-np.sum(nz * np.log2(nz)))


def von_neumann(rho: DensityOperator) -> float:
    return _entropy_of_eigs(np.linalg.eigvalsh(rho.mat))


def cond_von_neumann(rho: DensityOperator) -> float:
    """H(A|B) = H(AB) - H(B) with A the first subsystem."""
    if len(rho.dims) < 2:
        raise ValueError("conditional entropy needs at least two subsystems")
    rest = tuple(range(1, len(rho.dims)))
    return von_neumann(rho) - von_neumann(partial_trace(rho, rest))


def _geninv_power(mat: np.ndarray, power: float) -> np.ndarray:
    """mat**power on the support, zero elsewhere."""
    vals, vecs = np.linalg.eigh(mat)
    lam_max = max(float(vals[-1]), 0.0)
    out = np.zeros_like(vals)
    mask = vals > SUPPORT_TOL * max(lam_max, 1e-300)
    out[mask] = vals[mask] ** power
    return (vecs * out) @ dagger(vecs)


def _check_support(rho: DensityOperator, sigma_b: DensityOperator):
    """supp(rho_B) must lie inside supp(sigma_B)."""
    rho_b = partial_trace(rho, tuple(range(1, len(rho.dims)))).mat
    vals, vecs = np.linalg.eigh(sigma_b.mat)
    lam_max = max(float(vals[-1]), 0.0)
    null = vecs[:, vals <= SUPPORT_TOL * max(lam_max, 1e-300)]
    if null.shape[1] and np.max(np.abs(dagger(null) @ rho_b @ null)) > 1e-10:
        raise ValueError("sigma support insufficient")


def _conditioner(rho: DensityOperator, sigma_b: DensityOperator, power: float) -> np.ndarray:
    d_a = rho.dims[0]
    d_b = rho.dim // d_a
    if sigma_b.dim != d_b:
        raise ValueError("sigma dimension does not match the conditioning system")
    return np.kron(np.eye(d_a), _geninv_power(sigma_b.mat, power))


def hmin_given_sigma(rho: DensityOperator, sigma_b: DensityOperator) -> float:
    """-log2 lambda_max((I (x) sigma^(-1/2)) rho (I (x) sigma^(-1/2)))."""
    _check_support(rho, sigma_b)
    g = _conditioner(rho, sigma_b, -0.5)
    tilted = g @ rho.mat @ g
    lam = float(np.linalg.eigvalsh((tilted + dagger(tilted)) / 2)[-1])
    return -math.log2(lam)


def h2_cond(rho: DensityOperator, sigma_b: DensityOperator) -> float:
    """Conditional collision entropy -log2 tr[((I (x) s^-1/4) rho (I (x) s^-1/4))^2]."""
    _check_support(rho, sigma_b)
    g = _conditioner(rho, sigma_b, -0.25)
    tilted = g @ rho.mat @ g
    return -math.log2(float(np.trace(tilted @ tilted).real))


# ---------------------------------------------------------------------------
# min-entropy SDP
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _herm_basis(d: int) -> tuple[np.ndarray, ...]:
    """Orthonormal (HS inner product) basis of d x d Hermitian matrices."""
    out = []
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        out.append(e)
    inv_sqrt2 = 1.0 / math.sqrt(2)
    for i in range(d):
        for j in range(i + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = inv_sqrt2
            e[j, i] = inv_sqrt2
            out.append(e)
            f = np.zeros((d, d), dtype=complex)
            f[i, j] = 1j * inv_sqrt2
            f[j, i] = -1j * inv_sqrt2
            out.append(f)
    return tuple(out)


@lru_cache(maxsize=None)
def _lifted_basis(d_a: int, d_b: int) -> np.ndarray:
    gs = _herm_basis(d_b)
    eye = np.eye(d_a)
    return np.stack([np.kron(eye, g) for g in gs])


def _is_pd(mat: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(mat)
        return True
    except np.linalg.LinAlgError:
        return False


def _logdet(mat: np.ndarray) -> float:
    chol = np.linalg.cholesky(mat)
    return 2.0 * float(np.sum(np.log(np.diag(chol).real)))


@dataclass(frozen=True)
class HminResult:
    """Certified conditional min-entropy.

    ``sigma`` is the normalized optimizer; 2**(-value) * sigma.mat is the
    primal-feasible point with I (x) sigma* - rho PSD, and ``gap`` the
    certified duality gap on tr(sigma*).
    """

    value: float
    sigma: DensityOperator
    gap: float
    newton_steps: int


def hmin(rho: DensityOperator, gap_tol: float = GAP_TOL,
         max_newton: int = MAX_NEWTON) -> HminResult:
    """Hmin(A|B) via the barrier SDP; A is the first subsystem."""
    d_a = rho.dims[0]
    d_b = rho.dim // d_a
    r = rho.mat
    if d_b == 1:
        lam = float(np.linalg.eigvalsh(r)[-1])
        sigma = DensityOperator(np.array([[1.0 + 0j]]), (1,))
        return HminResult(-math.log2(lam), sigma, 0.0, 0)

    m = d_a * d_b
    lifted = _lifted_basis(d_a, d_b)
    n_par = lifted.shape[0]
    gs = _herm_basis(d_b)
    trace_vec = np.array([np.trace(g).real for g in gs])

    lam_max = float(np.linalg.eigvalsh(r)[-1])
    sigma0 = (lam_max * (1.0 + 1e-3) + 1e-9) * np.eye(d_b)
    s = np.array([np.trace(sigma0 @ g).real for g in gs])

    def sigma_of(svec):
        return np.tensordot(svec, np.asarray(gs), axes=(0, 0))

    def z_of(svec):
        return np.kron(np.eye(d_a), sigma_of(svec)) - r

    t = 1.0
    mu = 25.0
    steps = 0
    z = z_of(s)
    zinv = np.linalg.inv(z)
    final_t = t >= 2.0 * m / gap_tol
    while True:
        # center f_t(s) = t tr(sigma) - log det Z(s); only the final stage
        # needs tight centering (it feeds the dual certificate)
        target_decrement = 1e-13 if final_t else 1e-7
        for _ in range(60):
            p = np.matmul(zinv[None, :, :], lifted)
            grad = t * trace_vec - np.einsum("iaa->i", p).real
            pm = p.reshape(n_par, m * m)
            pt = p.transpose(0, 2, 1).reshape(n_par, m * m)
            hess = (pm @ pt.T).real
            try:
                delta = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                delta = np.linalg.lstsq(hess, -grad, rcond=None)[0]
            decrement = float(-grad @ delta)
            if decrement / 2.0 < target_decrement:
                break
            f_cur = t * float(trace_vec @ s) - _logdet(z)
            # fraction-to-boundary: largest alpha with Z + alpha*dZ > 0
            dz = np.kron(np.eye(d_a), sigma_of(delta))
            lam_min = float(np.min(np.linalg.eigvals(zinv @ dz).real))
            step = 1.0 if lam_min >= 0 else min(1.0, -0.99 / lam_min)
            while step > 1e-14:
                cand = s + step * delta
                z_cand = z_of(cand)
                if _is_pd(z_cand):
                    f_new = t * float(trace_vec @ cand) - _logdet(z_cand)
                    if f_new <= f_cur + 0.25 * step * float(grad @ delta):
                        break
                step *= 0.5
            else:
                raise SolverError("line search failed", primal=float(trace_vec @ s))
            s = s + step * delta
            z = z_of(s)
            zinv = np.linalg.inv(z)
            steps += 1
            if steps > max_newton:
                raise SolverError(
                    f"no convergence in {max_newton} Newton steps",
                    primal=float(trace_vec @ s))
        if final_t:
            primal, dual, sigma_mat = _certify(r, s, zinv, t, d_a, d_b, gs)
            if primal - dual <= gap_tol:
                break
            if steps > max_newton:
                raise SolverError(
                    f"certified gap {primal - dual:g} above tolerance",
                    primal=primal, dual=dual)
        t *= mu
        final_t = t >= 2.0 * m / gap_tol

    tr_sigma = primal
    sigma_hat = DensityOperator(sigma_mat / tr_sigma, (d_b,))
    return HminResult(-math.log2(tr_sigma), sigma_hat, primal - dual, steps)


def _certify(r, s, zinv, t, d_a, d_b, gs):
    sigma_mat = np.tensordot(s, np.asarray(gs), axes=(0, 0))
    primal = float(np.trace(sigma_mat).real)
    x = zinv / t
    y = np.einsum("iaib->ab", x.reshape(d_a, d_b, d_a, d_b))
    y_isqrt = _geninv_power((y + dagger(y)) / 2, -0.5)
    corr = np.kron(np.eye(d_a), y_isqrt)
    x_feas = corr @ x @ corr
    dual = float(np.trace(r @ x_feas).real)
    return primal, dual, sigma_mat


def hmax(rho: DensityOperator) -> float:
    """Hmax(A|B) = -Hmin(A|C) on a purification ABC (duality at eps = 0)."""
    if abs(rho.trace - 1.0) > 1e-9:
        raise ValueError("hmax requires a normalized state")
    if len(rho.dims) < 2:
        raise ValueError("hmax needs a conditioning system")
    pure = purify(rho)
    n = len(pure.dims)
    keep = (0,) + tuple(range(len(rho.dims), n))  # A and the purifier
    rho_ac = partial_trace(pure, keep)
    # flatten (A, C...) into bipartite A|C
    d_a = rho.dims[0]
    flat = DensityOperator(rho_ac.mat, (d_a, rho_ac.dim // d_a))
    return -hmin(flat).value


@dataclass(frozen=True)
class EntropyReport:
    """H, Hmin (with certifying sigma), H2 at sigma = rho_B, Hmax."""

    h_vn: float
    hmin: float
    hmin_sigma: DensityOperator
    h2_rho_rho: float
    hmax: float
    solver_gap: float

    def __post_init__(self):
        if self.solver_gap > 1e-7:
            raise ValueError(f"solver gap {self.solver_gap} above 1e-7")
        if self.hmin > self.h2_rho_rho + 1e-7:
            raise ValueError("Hmin exceeds collision entropy")


def entropy_report(rho: DensityOperator) -> EntropyReport:
    rest = tuple(range(1, len(rho.dims)))
    rho_b = partial_trace(rho, rest)
    res = hmin(rho)
    return EntropyReport(
        h_vn=cond_von_neumann(rho),
        hmin=res.value,
        hmin_sigma=res.sigma,
        h2_rho_rho=h2_cond(rho, rho_b),
        hmax=hmax(rho),
        solver_gap=res.gap,
    )
