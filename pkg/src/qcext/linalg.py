"""Dense complex linear algebra with subsystem bookkeeping.

Composite indices follow the convention a = a1 * |A2| + a2 for A = A1 A2
(leftmost tensor factor most significant), which is exactly numpy's
``kron`` ordering.  All state-level helpers work on ``DensityOperator``,
a matrix plus an ordered tuple of subsystem dimensions.

Matrix square roots and fidelities go through Hermitian
eigendecompositions with eigenvalues clamped at zero when they fall in
[-1e-10, 0), never through SVDs of non-Hermitian products:
F(rho, sigma) = tr sqrt(sqrt(sigma) rho sqrt(sigma)).

Everything here is a pure function over immutable inputs; dense storage
only, total dimension <= 256.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

HERM_TOL = 1e-10
EIG_CLAMP = 1e-10
DIM_BUDGET = 256


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product, leftmost factor most significant."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m.T)


def hs_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(m)))


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values; Hermitian input uses |eigenvalues|."""
    m = np.asarray(m, dtype=complex)
    if m.shape[0] != m.shape[1]:
        raise ValueError("trace norm requires a square matrix")
    if np.max(np.abs(m - dagger(m))) <= HERM_TOL * max(1.0, np.max(np.abs(m))):
        return float(np.sum(np.abs(np.linalg.eigvalsh(m))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def eig_herm(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order with matching eigenvector columns."""
    vals, vecs = np.linalg.eigh(np.asarray(m, dtype=complex))
    order = np.argsort(vals)[::-1]
    return vals[order].real, vecs[:, order]


def swap_operator(d: int) -> np.ndarray:
    f = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            f[a * d + b, b * d + a] = 1.0
    return f


def _sqrt_psd(m: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(m)
    vals = np.where((vals < 0) & (vals > -EIG_CLAMP), 0.0, vals)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ dagger(vecs)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian PSD operator with trace in (0, 1], plus subsystem dims."""

    mat: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        n = mat.shape[0]
        if mat.ndim != 2 or mat.shape[1] != n:
            raise ValueError("density operator must be square")
        if math.prod(self.dims) != n:
            raise ValueError(f"dims {self.dims} do not match matrix size {n}")
        if n > DIM_BUDGET:
            raise ValueError(f"total dimension {n} exceeds budget {DIM_BUDGET}")
        if not np.all(np.isfinite(mat.view(float))):
            raise ValueError("matrix entries must be finite")
        if np.max(np.abs(mat - dagger(mat))) > HERM_TOL * max(1.0, float(np.max(np.abs(mat)))):
            raise ValueError("matrix is not Hermitian")
        eigs = np.linalg.eigvalsh(mat)
        if eigs[0] < -EIG_CLAMP:
            raise ValueError(f"matrix has negative eigenvalue {eigs[0]}")
        tr = float(np.trace(mat).real)
        if not 0.0 < tr <= 1.0 + 1e-10:
            raise ValueError(f"trace {tr} outside (0, 1]")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    @classmethod
    def from_vector(cls, vec: np.ndarray, dims: tuple[int, ...]) -> "DensityOperator":
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        return cls(np.outer(vec, np.conj(vec)), dims)


def density(mat: np.ndarray, dims) -> DensityOperator:
    return DensityOperator(mat, tuple(dims))


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Trace out every subsystem not listed in ``keep`` (kept order preserved)."""
    dims = rho.dims
    n = len(dims)
    keep = tuple(keep)
    if any(not 0 <= k < n for k in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"bad subsystem indices {keep} for dims {dims}")
    keep = tuple(sorted(keep))
    if not keep:
        return DensityOperator(np.array([[np.trace(rho.mat)]]), (1,))
    t = rho.mat.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out_idx = [i for i in keep] + [i + n for i in keep]
    t = np.einsum(t, row + col, out_idx)
    d_keep = math.prod(dims[i] for i in keep)
    return DensityOperator(t.reshape(d_keep, d_keep), tuple(dims[i] for i in keep))


def fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Uhlmann fidelity F = || sqrt(rho) sqrt(sigma) ||_1 in [0, 1]."""
    if rho.dim != sigma.dim:
        raise ValueError("dimension mismatch")
    s = _sqrt_psd(sigma.mat)
    inner = s @ rho.mat @ s
    vals = np.linalg.eigvalsh((inner + dagger(inner)) / 2.0)
    vals = np.clip(vals, 0.0, None)
    return float(np.sum(np.sqrt(vals)))


def generalized_fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    extra = max(0.0, 1.0 - rho.trace) * max(0.0, 1.0 - sigma.trace)
    return fidelity(rho, sigma) + math.sqrt(extra)


def purified_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """P = sqrt(1 - Fbar^2); sandwiched by the trace distance."""
    fbar = generalized_fidelity(rho, sigma)
    # For normalized states 1 - F <= tr-dist/2 (Fuchs-van de Graaf); use it
    # as a floor so that near-identical states do not pick up eigensolver
    # noise of order sqrt(eps_machine).
    if abs(rho.trace - 1.0) < 1e-12 and abs(sigma.trace - 1.0) < 1e-12:
        fbar = max(fbar, 1.0 - 0.5 * trace_norm(rho.mat - sigma.mat))
    fbar = min(fbar, 1.0)
    return math.sqrt(max(0.0, 1.0 - fbar * fbar))


def measurement_map(rho: DensityOperator, dim_a1: int, dim_a2: int) -> DensityOperator:
    """Trace out A2 and dephase A1 in the standard basis, keeping the rest.

    The first subsystem of ``rho`` must have dimension dim_a1 * dim_a2;
    the output is classical (diagonal) on A1 and retains any further
    subsystems untouched.
    """
    dims = rho.dims
    if dims[0] != dim_a1 * dim_a2:
        raise ValueError(f"split {dim_a1}x{dim_a2} does not match subsystem {dims[0]}")
    d_rest = math.prod(dims[1:]) if len(dims) > 1 else 1
    t = rho.mat.reshape(dim_a1, dim_a2, d_rest, dim_a1, dim_a2, d_rest)
    blocks = np.einsum("iaeiaf->ief", t)
    out = np.zeros((dim_a1 * d_rest, dim_a1 * d_rest), dtype=complex)
    for i in range(dim_a1):
        out[i * d_rest:(i + 1) * d_rest, i * d_rest:(i + 1) * d_rest] = blocks[i]
    return DensityOperator(out, (dim_a1,) + dims[1:])


def purify(rho: DensityOperator) -> DensityOperator:
    """Rank-minimal purification; the purifying system is appended last."""
    vals, vecs = eig_herm(rho.mat)
    sel = vals > 1e-12
    if not np.any(sel):
        sel = np.array([True] + [False] * (len(vals) - 1))
    lam = np.clip(vals[sel], 0.0, None)
    v = vecs[:, sel]
    r = v.shape[1]
    psi = (v * np.sqrt(lam)).reshape(-1)  # index (orig, c), c minor
    return DensityOperator.from_vector(psi, rho.dims + (r,))


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": [float(x) for x in m.real.reshape(-1)],
        "im": [float(x) for x in m.imag.reshape(-1)],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise ValueError("matrix JSON entry count does not match rows*cols")
    return (re + 1j * im).reshape(rows, cols)


def load_matrix(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))
