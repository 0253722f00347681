"""Stage-1 zero identification from small-valued measurements.

A coefficient is declared zero when its column support meets the set S of
small-valued measurements in at least ``threshold`` positions. Counting uses
a boolean membership mask over measurement indices plus one pass over the
stored nonzeros, so the stage costs O(nnz).
"""

from dataclasses import dataclass

import numpy as np

from .sensing import ALPHABET_MAGNITUDE, BitMeasurements

__all__ = ["Part1Result", "small_measurement_set", "identify_zeros"]


@dataclass(frozen=True)
class Part1Result:
    """Partition produced by zero identification.

    ``zero_set`` and ``residual_set`` are disjoint, strictly increasing, and
    together cover 0..n-1; ``residual_set`` is what stage 2 must solve for.
    """

    zero_set: np.ndarray
    residual_set: np.ndarray
    s_set: np.ndarray


def small_measurement_set(bits: BitMeasurements) -> np.ndarray:
    """Indices of magnitude bits equal to 0, ascending."""
    if bits.alphabet != ALPHABET_MAGNITUDE:
        raise ValueError(f"expected magnitude bits, got alphabet {bits.alphabet!r}")
    return np.flatnonzero(bits.bits == 0).astype(np.int64)


def identify_zeros(col_supports, s_set, num_measurements, threshold) -> Part1Result:
    """Declare coefficient i zero when |col_supports[i] ∩ s_set| >= threshold.

    Parameters
    ----------
    col_supports : list of 1-d integer arrays
        Measurement indices touching each coefficient (one list entry per
        coefficient). Coefficients that are never measured have an empty
        support and always land in the residual set.
    s_set : 1-d integer array
        Indices of small-valued measurements, within 0..num_measurements-1.
    num_measurements : int
        Total number of measurements (sizes the membership mask).
    threshold : int
        Minimum intersection count, >= 1.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1 (0 would declare everything zero)")
    s_set = np.asarray(s_set, dtype=np.int64)
    if s_set.size and (s_set.min() < 0 or s_set.max() >= num_measurements):
        raise ValueError("s_set contains out-of-range measurement indices")

    n = len(col_supports)
    mask = np.zeros(num_measurements, dtype=bool)
    mask[s_set] = True

    lengths = np.array([len(s) for s in col_supports], dtype=np.int64)
    total = int(lengths.sum())
    if total > 0:
        flat = np.concatenate(col_supports)
        if flat.min() < 0 or flat.max() >= num_measurements:
            raise ValueError("col_supports contain out-of-range measurement indices")
        owner = np.repeat(np.arange(n, dtype=np.int64), lengths)
        counts = np.bincount(owner, weights=mask[flat].astype(float), minlength=n)
    else:
        counts = np.zeros(n)

    zero_set = np.flatnonzero(counts >= threshold).astype(np.int64)
    residual_set = np.flatnonzero(counts < threshold).astype(np.int64)
    return Part1Result(zero_set=zero_set, residual_set=residual_set, s_set=s_set)
