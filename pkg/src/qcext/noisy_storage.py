"""Weak-string-erasure security parameters and channel-fidelity machinery.

Security of the three-basis WSE protocol against a noisy-storage
adversary reduces to the channel fidelity of decode o (storage (x) id_M)
o encode.  The calculators evaluate

    lambda = log 3 - 1 - (1/n) max{0, max log 2^n F_c + kappa} - (xi+1)/n

with kappa = log(2/delta'^2 + 1), xi = log(1/(eps^2/2 - delta')^2), and
the bounded-storage specialization lambda = (log 3 - 1) - nu -
(kappa + xi + 1)/n, valid only for storage rate nu < log 3 - 1.

The adversarial maximization over encode/decode pairs is never solved
here; ``strong_converse_witness`` only checks the identity-channel
strong-converse inequality F_c <= 2^(-(R-1) N) for supplied or sampled
strategies.  Classical forward communication is modeled as a block
register of up to 4 blocks alongside the storage qubits.

The honest protocol itself is simulated classically: the three-MUB
overlap structure fixes the statistics (matched bases reproduce Alice's
bit, unmatched bases give an independent fair coin), so transcripts of
any length are cheap.  Batch simulation derives one RNG substream per
transcript from the master seed by counter-mode splitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOG3_MINUS_1 = math.log2(3.0) - 1.0


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Channel:
    """Completely positive trace-preserving map in Kraus form."""

    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        kraus = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        object.__setattr__(self, "kraus", kraus)
        if not kraus:
            raise ValueError("a channel needs at least one Kraus operator")
        rows, cols = kraus[0].shape
        if any(k.shape != (rows, cols) for k in kraus):
            raise ValueError("Kraus operators must share one shape")
        acc = sum(np.conj(k.T) @ k for k in kraus)
        if np.max(np.abs(acc - np.eye(cols))) > 1e-10:
            raise ValueError("Kraus operators are not trace preserving")

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return sum(k @ rho @ np.conj(k.T) for k in self.kraus)

    def compose(self, inner: "Channel") -> "Channel":
        """self o inner, pruning numerically vanishing Kraus products."""
        if inner.dim_out != self.dim_in:
            raise ValueError("channel dimensions do not compose")
        prods = [d @ e for d in self.kraus for e in inner.kraus]
        kept = tuple(k for k in prods if np.linalg.norm(k) > 1e-14)
        return Channel(kept if kept else (prods[0],))


def identity_channel(d: int) -> Channel:
    return Channel((np.eye(d, dtype=complex),))


def _weyl_ops(d: int) -> list[np.ndarray]:
    omega = np.exp(2j * np.pi / d)
    x = np.zeros((d, d), dtype=complex)
    for i in range(d):
        x[(i + 1) % d, i] = 1.0
    z = np.diag(omega ** np.arange(d))
    out = []
    for a in range(d):
        for b in range(d):
            out.append(np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b))
    return out


def depolarizing(d: int, r: float) -> Channel:
    """rho -> r rho + (1-r) I/d, in Kraus form via Heisenberg-Weyl operators."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("retention probability must lie in [0, 1]")
    ops = _weyl_ops(d)
    kraus = [math.sqrt(r + (1.0 - r) / d ** 2) * ops[0]]
    kraus += [math.sqrt((1.0 - r) / d ** 2) * w for w in ops[1:]]
    return Channel(tuple(kraus))


def channel_fidelity(ch: Channel) -> float:
    """F_c = <Phi| (id (x) ch)(Phi) |Phi> for the maximally entangled Phi."""
    if ch.dim_in != ch.dim_out:
        raise ValueError("channel fidelity needs dim_in == dim_out")
    d = ch.dim_in
    phi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        phi[i * d + i] = 1.0 / math.sqrt(d)
    total = 0.0
    for k in ch.kraus:
        w = (np.kron(np.eye(d), k) @ phi)
        total += abs(np.vdot(phi, w)) ** 2
    return float(total)


# ---------------------------------------------------------------------------
# WSE parameter calculators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WseParams:
    """Protocol parameters with the derived constants kappa and xi."""

    n: int
    eps: float
    delta_prime: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not (self.eps ** 2 / 2.0 > self.delta_prime > 0.0):
            raise ValueError("need eps^2/2 > delta' > 0")

    @property
    def kappa(self) -> float:
        return math.log2(2.0 / self.delta_prime ** 2 + 1.0)

    @property
    def xi(self) -> float:
        return math.log2(1.0 / (self.eps ** 2 / 2.0 - self.delta_prime) ** 2)


def wse_lambda(n: int, fc_log_term: float, eps: float, delta_prime: float) -> float:
    """Security rate for a general storage channel.

    ``fc_log_term`` is the caller-supplied value of
    max over decode/encode of log2(2^n F_c); -inf is accepted and clamps
    the adversarial term to zero.
    """
    params = WseParams(n, eps, delta_prime)
    adv = max(0.0, fc_log_term + params.kappa) if math.isfinite(fc_log_term) \
        else (0.0 if fc_log_term < 0 else float("inf"))
    return LOG3_MINUS_1 - adv / n - (params.xi + 1.0) / n


def wse_lambda_bounded(n: int, nu: float, eps: float, delta_prime: float) -> float:
    """Bounded (noise-free) storage: lambda = (log 3 - 1) - nu - (kappa+xi+1)/n."""
    if nu >= LOG3_MINUS_1:
        raise ValueError(
            f"no security in this regime: nu must be below log(3)-1 ~ {LOG3_MINUS_1:.4f}")
    if nu < 0:
        raise ValueError("storage rate must be nonnegative")
    params = WseParams(n, eps, delta_prime)
    return LOG3_MINUS_1 - nu - (params.kappa + params.xi + 1.0) / n


def gamma_identity(rate: float) -> float:
    """Strong converse parameter of the one-qubit identity channel: R - 1."""
    if rate <= 1.0:
        raise ValueError("no strong converse below capacity (need R > 1)")
    return rate - 1.0


def strong_converse_witness(n_cells: int, rate: float, encode: Channel,
                            decode: Channel) -> tuple[float, float]:
    """Channel fidelity of decode o encode against 2^(-(R-1) N).

    The storage itself is the identity on N qubits, so the composite is
    just the supplied pair; any classical register blocks live inside
    the intermediate dimension.  Raises if the strong-converse bound is
    violated beyond 1e-9.
    """
    d_code = 2.0 ** (n_cells * rate)
    if abs(d_code - round(d_code)) > 1e-9:
        raise ValueError("2^(N R) must be an integer dimension")
    d_code = round(d_code)
    if encode.dim_in != d_code or decode.dim_out != d_code:
        raise ValueError(f"encode/decode must act on dimension {d_code}")
    if encode.dim_out != decode.dim_in:
        raise ValueError("encode output and decode input dimensions differ")
    d_store = 2 ** n_cells
    if encode.dim_out % d_store != 0 or encode.dim_out // d_store > 4:
        raise ValueError("intermediate space must be storage times <= 4 classical blocks")
    fc = channel_fidelity(decode.compose(encode))
    bound = 2.0 ** (-(rate - 1.0) * n_cells)
    if fc > bound + 1e-9:
        raise RuntimeError(f"strong converse violated: F_c = {fc} > {bound}")
    return fc, bound


def _random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def sample_storage_strategy(n_cells: int, rate: float, rng: np.random.Generator,
                            m_blocks: int = 1) -> tuple[Channel, Channel]:
    """Random compress-and-dump encoder with matching embed decoder.

    With m_blocks > 1 the encoder splits the code space into blocks,
    stores the block content, and forwards the block index classically;
    the decoder re-embeds conditioned on the index.  The block strategy
    meets the identity-channel strong-converse bound with equality.
    """
    d_code = round(2.0 ** (n_cells * rate))
    d_store = 2 ** n_cells
    if m_blocks == 1:
        v = _random_isometry(d_code, d_store, rng)  # columns: stored subspace
        dump = _random_isometry(d_store, 1, rng).reshape(-1)
        # extend v to a full unitary; the extra columns span the discarded
        # subspace, which gets dumped onto a fixed pure state
        g = rng.standard_normal((d_code, d_code - d_store)) \
            + 1j * rng.standard_normal((d_code, d_code - d_store))
        q, _ = np.linalg.qr(np.hstack([v, g]))
        perp = q[:, d_store:]
        enc_kraus = [np.conj(v.T)]
        enc_kraus += [np.outer(dump, np.conj(perp[:, j]))
                      for j in range(perp.shape[1])]
        decode = Channel((_random_isometry(d_code, d_store, rng),))
        return Channel(tuple(enc_kraus)), decode
    if m_blocks > 4:
        raise ValueError("classical register is limited to 4 blocks")
    if m_blocks * d_store > d_code:
        raise ValueError("block strategy needs d_code >= m_blocks * d_store")
    # block strategy: store chunk m of the code basis, flag m classically;
    # intermediate index is m * d_store + s
    d_mid = m_blocks * d_store
    enc_kraus = []
    dec_kraus = []
    for m in range(m_blocks):
        b = np.zeros((d_mid, d_code), dtype=complex)
        for s in range(d_store):
            b[m * d_store + s, m * d_store + s] = 1.0
        enc_kraus.append(b)
        dec = np.zeros((d_code, d_mid), dtype=complex)
        for s in range(d_store):
            dec[m * d_store + s, m * d_store + s] = 1.0
        dec_kraus.append(dec)
    for c in range(d_mid, d_code):  # overflow columns dumped on block 0
        k = np.zeros((d_mid, d_code), dtype=complex)
        k[0, c] = 1.0
        enc_kraus.append(k)
    return Channel(tuple(enc_kraus)), Channel(tuple(dec_kraus))


# ---------------------------------------------------------------------------
# honest-protocol simulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WseTranscript:
    """One honest run: Alice's bits, both basis strings, Bob's share."""

    x: tuple[int, ...]
    theta: tuple[int, ...]
    theta_tilde: tuple[int, ...]
    matched: tuple[int, ...]
    x_sub: tuple[int, ...]

    def __post_init__(self):
        n = len(self.x)
        if len(self.theta) != n or len(self.theta_tilde) != n:
            raise ValueError("basis strings must match the bit string length")
        expect = tuple(i for i in range(n) if self.theta[i] == self.theta_tilde[i])
        if self.matched != expect:
            raise ValueError("matched index set is inconsistent")
        if self.x_sub != tuple(self.x[i] for i in self.matched):
            raise ValueError("substring does not agree with x on matched indices")


def simulate_wse(n: int, rng: np.random.Generator) -> WseTranscript:
    """Honest run in the measurement-statistics picture.

    Matched bases reproduce Alice's bit exactly; unmatched bases yield
    an independent fair bit (MUB overlap 1/2).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    x = rng.integers(0, 2, size=n)
    theta = rng.integers(0, 3, size=n)
    theta_tilde = rng.integers(0, 3, size=n)
    noise = rng.integers(0, 2, size=n)
    bob = np.where(theta == theta_tilde, x, noise)
    matched = tuple(int(i) for i in np.nonzero(theta == theta_tilde)[0])
    return WseTranscript(
        x=tuple(int(b) for b in x),
        theta=tuple(int(b) for b in theta),
        theta_tilde=tuple(int(b) for b in theta_tilde),
        matched=matched,
        x_sub=tuple(int(bob[i]) for i in matched),
    )


def simulate_wse_batch(n: int, samples: int, seed: int) -> list[WseTranscript]:
    """Independent transcripts on counter-split substreams of one seed."""
    out = []
    for i in range(samples):
        stream = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(i,))))
        out.append(simulate_wse(n, stream))
    return out
