"""Index-modulation ISAC signal chain at desk scale.

A codeword S (a Tx subarray) is transmitted as ``U @ J_S`` where ``U`` is a
T x Q basis with orthonormal columns and ``J_S`` picks the selected Tx
columns. The same waveform feeds the monostatic sensing model and the
downlink to an M-antenna UE that knows ``H`` and ``U``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .codebook import Codebook, CodebookError
from .geometry import ArrayGeometry, GeometryError, sum_set

RANK_RTOL = 1e-8
MIN_SINE_SEPARATION = 0.05


class SimulationError(ValueError):
    pass


def selection_matrix(s: ArrayGeometry, tx: ArrayGeometry) -> np.ndarray:
    """Binary ``|s| x |tx|`` matrix with a one where ``s[i] == tx[n]``."""
    if not s.issubset(tx):
        raise GeometryError("not a subset")
    col = {p: n for n, p in enumerate(tx.positions)}
    J = np.zeros((len(s), len(tx)), dtype=np.int8)
    for i, p in enumerate(s.positions):
        J[i, col[p]] = 1
    return J


def dft_basis(T: int, Q: int) -> np.ndarray:
    """First Q columns of the unitary T-point DFT matrix."""
    if T < Q:
        raise SimulationError(f"basis rank infeasible: T={T} < Q={Q}")
    t = np.arange(T)[:, None]
    q = np.arange(Q)[None, :]
    return np.exp(-2j * np.pi * t * q / T) / np.sqrt(T)


def orthonormal_basis(T: int, Q: int, seed: Optional[int] = None) -> np.ndarray:
    """T x Q matrix with orthonormal columns.

    With ``seed=None`` this is :func:`dft_basis`; otherwise the Q factor of a
    seeded complex Gaussian matrix.
    """
    if T < Q:
        raise SimulationError(f"basis rank infeasible: T={T} < Q={Q}")
    if seed is None:
        return dft_basis(T, Q)
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((T, Q)) + 1j * rng.standard_normal((T, Q))
    U, R = np.linalg.qr(G)
    # fix the phase ambiguity so the result is a deterministic function of G
    return U * (np.diag(R) / np.abs(np.diag(R)))


def numerical_rank(A: np.ndarray, rtol: float = RANK_RTOL) -> int:
    sv = np.linalg.svd(A, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


@dataclass(frozen=True)
class WaveformMatrix:
    samples: np.ndarray  # T x N_tx
    codeword: ArrayGeometry
    tx: ArrayGeometry
    basis: np.ndarray  # T x Q
    basis_rank: int

    @property
    def T(self) -> int:
        return self.samples.shape[0]


def build_waveform(basis: np.ndarray, s: ArrayGeometry, tx: ArrayGeometry) -> WaveformMatrix:
    basis = np.asarray(basis)
    if basis.ndim != 2 or basis.shape[1] != len(s):
        raise SimulationError(f"basis has {basis.shape[-1]} columns, codeword has {len(s)} sensors")
    J = selection_matrix(s, tx)
    return WaveformMatrix(basis @ J, s, tx, basis, numerical_rank(basis))


def steering_matrix(d: ArrayGeometry | Sequence[int], angles) -> np.ndarray:
    """``exp(i pi d[n] sin(theta_k))`` for positions in half wavelengths."""
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if np.any(angles < -np.pi / 2) or np.any(angles >= np.pi / 2):
        raise SimulationError("angles must lie in [-pi/2, pi/2)")
    pos = np.asarray(tuple(d), dtype=float)
    return np.exp(1j * np.pi * np.outer(pos, np.sin(angles)))


@dataclass(frozen=True)
class SensingScene:
    angles: np.ndarray
    gains: np.ndarray
    noise_power: float = 0.0

    def __post_init__(self):
        angles = np.atleast_1d(np.asarray(self.angles, dtype=float))
        gains = np.atleast_1d(np.asarray(self.gains, dtype=complex))
        if angles.size < 1:
            raise SimulationError("scene needs at least one target")
        if angles.shape != gains.shape:
            raise SimulationError("angles and gains differ in length")
        if np.unique(angles).size != angles.size:
            raise SimulationError("target angles must be distinct")
        if np.any(gains == 0):
            raise SimulationError("target gains must be nonzero")
        if self.noise_power < 0:
            raise SimulationError("noise power must be nonnegative")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "gains", gains)

    @property
    def K(self) -> int:
        return self.angles.size


def complex_noise(rng: np.random.Generator, shape, power: float) -> np.ndarray:
    """Circular complex Gaussian entries with variance ``power``."""
    if power == 0:
        return np.zeros(shape, dtype=complex)
    scale = np.sqrt(power / 2)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sensing_snapshot(tx: ArrayGeometry, rx: ArrayGeometry, w: WaveformMatrix,
                     scene: SensingScene, seed: Optional[int] = None) -> np.ndarray:
    """``Y = A_rx diag(gamma) A_tx^T S^T + N``, shape ``N_rx x T``."""
    if w.tx != tx:
        raise SimulationError("waveform was built for a different Tx array")
    A_rx = steering_matrix(rx, scene.angles)
    A_tx = steering_matrix(tx, scene.angles)
    Y = (A_rx * scene.gains) @ A_tx.T @ w.samples.T
    rng = np.random.default_rng(seed)
    return Y + complex_noise(rng, Y.shape, scene.noise_power)


def virtual_sum_coarray(y: np.ndarray, w: WaveformMatrix, rx: ArrayGeometry,
                        tx: Optional[ArrayGeometry] = None) -> tuple[ArrayGeometry, np.ndarray]:
    """Matched-filter a noiseless snapshot onto the sum co-array of the codeword.

    Removes the basis to get ``X = A_rx diag(gamma) A_S^T`` and averages
    entries sharing the same sum ``rx[j] + s[i]``. Returns the support (in
    absolute coordinates) and one value per support position.
    """
    if tx is not None and w.tx != tx:
        raise SimulationError("waveform was built for a different Tx array")
    Q = len(w.codeword)
    if w.basis_rank < Q:
        raise SimulationError("waveform not matched: basis is rank deficient")
    X = np.asarray(y) @ np.linalg.pinv(w.basis).T
    sums = np.add.outer(np.asarray(rx.positions), np.asarray(w.codeword.positions))
    support = sum_set(w.codeword, rx)
    lookup = {p: m for m, p in enumerate(support.positions)}
    idx = np.vectorize(lookup.__getitem__)(sums).ravel()
    acc = np.zeros(len(support), dtype=complex)
    np.add.at(acc, idx, X.ravel())
    counts = np.bincount(idx, minlength=len(support))
    return support, acc / counts


def draw_separated_sines(rng: np.random.Generator, K: int,
                         min_sep: float = MIN_SINE_SEPARATION, max_tries: int = 10_000) -> np.ndarray:
    """K values in [-1, 1) whose pairwise distance, also across the
    wrap-around at +-1, is at least ``min_sep``."""
    if K * min_sep > 2:
        raise SimulationError(f"cannot place {K} sines {min_sep} apart")
    for _ in range(max_tries):
        u = rng.uniform(-1.0, 1.0, size=K)
        if K == 1:
            return u
        d = np.abs(u[:, None] - u[None, :])
        d = np.minimum(d, 2.0 - d)
        np.fill_diagonal(d, np.inf)
        if d.min() >= min_sep:
            return np.sort(u)
    raise SimulationError("failed to draw well-separated angles")


def identifiability_rank_check(s: ArrayGeometry, rx: ArrayGeometry, K: int,
                               seed: Optional[int] = None) -> bool:
    """Whether K random well-separated targets give full column rank on ``s + rx``."""
    support = sum_set(s, rx)
    if K < 1:
        raise SimulationError("K must be positive")
    if K > len(support) // 2:
        raise SimulationError(f"K={K} exceeds identifiability bound {len(support) // 2}")
    rng = np.random.default_rng(seed)
    u = draw_separated_sines(rng, K)
    V = np.exp(1j * np.pi * np.outer(np.asarray(support.positions, dtype=float), u))
    return numerical_rank(V) == K


@dataclass
class DownlinkConfig:
    channel: np.ndarray  # M x N_tx, known to the UE
    snr_db: float = float("inf")
    trials: int = 1000
    seed: int = 0
    ue_antennas: int = field(init=False)

    def __post_init__(self):
        self.channel = np.asarray(self.channel, dtype=complex)
        if self.channel.ndim != 2:
            raise SimulationError("channel must be an M x N_tx matrix")
        if self.trials < 1:
            raise SimulationError("trials must be positive")
        self.ue_antennas = self.channel.shape[0]


def random_channel(M: int, N_tx: int, seed: Optional[int] = None) -> np.ndarray:
    """Rayleigh channel with unit-variance circular Gaussian entries."""
    return complex_noise(np.random.default_rng(seed), (M, N_tx), 1.0)


def _check_link(cfg: DownlinkConfig, basis: np.ndarray, codebook: Codebook) -> None:
    if len(codebook) == 0:
        raise CodebookError("empty codebook")
    if cfg.channel.shape[1] != len(codebook.tx_array):
        raise SimulationError(f"channel has {cfg.channel.shape[1]} Tx columns, "
                              f"Tx array has {len(codebook.tx_array)} sensors")
    if basis.shape[1] != codebook.Q:
        raise SimulationError(f"basis has {basis.shape[1]} columns, Q={codebook.Q}")


def noiseless_downlink(cfg: DownlinkConfig, basis: np.ndarray, codebook: Codebook) -> np.ndarray:
    """``H (U J_S)^T`` for every codeword, stacked as ``|C| x M x T``."""
    basis = np.asarray(basis)
    _check_link(cfg, basis, codebook)
    col = {p: n for n, p in enumerate(codebook.tx_array.positions)}
    out = []
    for word in codebook:
        sel = [col[p] for p in word.positions]
        out.append(cfg.channel[:, sel] @ basis.T)
    return np.stack(out)


def ml_decode(z: np.ndarray, cfg: DownlinkConfig, basis: np.ndarray, codebook: Codebook,
              candidates: Optional[np.ndarray] = None) -> int:
    """Index of the codeword minimising ``||Z - H (U J_S)^T||_F``; ties go to the lowest index.

    ``candidates`` may carry a precomputed :func:`noiseless_downlink` stack.
    """
    if candidates is None:
        candidates = noiseless_downlink(cfg, basis, codebook)
    z = np.asarray(z)
    if z.shape != candidates.shape[1:]:
        raise SimulationError(f"received block {z.shape} does not match {candidates.shape[1:]}")
    dist = np.sum(np.abs(candidates - z) ** 2, axis=(1, 2))
    return int(np.argmin(dist))


def noise_power_for(signal: np.ndarray, snr_db: float) -> float:
    """Per-entry noise variance giving ``||signal||_F^2 / (size * power) = SNR``."""
    if np.isinf(snr_db) and snr_db > 0:
        return 0.0
    return float(np.sum(np.abs(signal) ** 2) / signal.size / 10 ** (snr_db / 10))


def monte_carlo_ser(cfg: DownlinkConfig, codebook: Codebook, basis: np.ndarray) -> tuple[float, int]:
    """Symbol error rate of the ML detector over ``cfg.trials`` uniform codewords.

    Trial ``i`` draws from its own stream seeded by ``(cfg.seed, i)``, so the
    result does not depend on execution order.
    """
    candidates = noiseless_downlink(cfg, basis, codebook)
    powers = [noise_power_for(c, cfg.snr_db) for c in candidates]
    errors = 0
    for i in range(cfg.trials):
        rng = np.random.default_rng([cfg.seed, i])
        k = int(rng.integers(len(codebook)))
        z = candidates[k] + complex_noise(rng, candidates[k].shape, powers[k])
        if ml_decode(z, cfg, basis, codebook, candidates) != k:
            errors += 1
    return errors / cfg.trials, cfg.trials
