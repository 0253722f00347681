"""Signal model and reconstruction-quality metrics.

Signals are exactly k-sparse with i.i.d. Gaussian amplitudes on a uniformly
random support, normalized to unit energy. All randomness is driven by
explicit seeds through NumPy's PCG64 generator (``np.random.default_rng``),
so every draw is reproducible.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SparseSignal",
    "ReconstructionReport",
    "generate_signal",
    "snr_db",
    "support_metrics",
]


@dataclass(frozen=True)
class SparseSignal:
    """Length-n real vector with exactly k nonzeros and unit Euclidean norm."""

    values: np.ndarray
    n: int
    k: int


@dataclass(frozen=True)
class ReconstructionReport:
    """Per-run quality and cost metrics.

    ``snr_db`` is ``math.inf`` for exact recovery. ``runtime_seconds`` covers
    the reconstruction phase only (never acquisition).
    """

    snr_db: float
    runtime_seconds: float
    part1_zero_identified: int
    part1_false_zeros: int
    residual_problem_size: int
    iterations_used: int
    consistent: bool

    def __post_init__(self):
        if self.part1_false_zeros > self.part1_zero_identified:
            raise ValueError("false zeros cannot exceed identified zeros")


def generate_signal(n, k, seed) -> SparseSignal:
    """Draw a unit-norm signal with k nonzero Gaussian amplitudes.

    Support positions come from a partial Fisher-Yates shuffle, amplitudes
    from the same PCG64 stream immediately after (positions first, then
    amplitudes), so the draw order is fixed and runs are reproducible.

    Parameters
    ----------
    n : int
        Signal length.
    k : int
        Number of nonzero coefficients, 1 <= k <= n.
    seed : int
        Generator seed.
    """
    if n < 1:
        raise ValueError(f"signal length must be positive, got n={n}")
    if k < 1 or k > n:
        raise ValueError(f"sparsity must satisfy 1 <= k <= n, got k={k}, n={n}")

    rng = np.random.default_rng(seed)
    idx = np.arange(n)
    for i in range(k):
        j = int(rng.integers(i, n))
        idx[i], idx[j] = idx[j], idx[i]
    support = idx[:k]

    amplitudes = rng.standard_normal(k)
    values = np.zeros(n)
    values[support] = amplitudes
    values /= np.linalg.norm(values)
    return SparseSignal(values=values, n=n, k=k)


def snr_db(x, xhat) -> float:
    """Reconstruction SNR in dB: 10*log10(||x||^2 / ||x - xhat||^2).

    Returns ``math.inf`` when ``xhat`` equals ``x`` exactly.
    """
    x = np.asarray(x, dtype=float)
    xhat = np.asarray(xhat, dtype=float)
    if x.shape != xhat.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {xhat.shape}")
    signal_energy = float(np.dot(x, x))
    if signal_energy == 0.0:
        raise ValueError("snr_db undefined for an all-zero reference signal")
    err = x - xhat
    error_energy = float(np.dot(err, err))
    if error_energy == 0.0:
        return float("inf")
    return float(10.0 * np.log10(signal_energy / error_energy))


def support_metrics(x: SparseSignal, zero_set):
    """Count identified zeros and false zeros for a declared zero set.

    Returns ``(zero_identified, false_zeros)`` where ``false_zeros`` is the
    number of declared-zero positions whose true coefficient is nonzero.
    Indices are 0-based.
    """
    zero_set = np.asarray(zero_set, dtype=np.int64)
    if zero_set.size == 0:
        return 0, 0
    if zero_set.min() < 0 or zero_set.max() >= x.n:
        raise ValueError("zero_set contains out-of-range indices")
    false_zeros = int(np.count_nonzero(x.values[zero_set]))
    return int(zero_set.size), false_zeros
