"""Measurement matrices, noisy linear measurement, and 1-bit quantizers.

Two operator types: a sparse binary Bernoulli matrix stored as row/column
support lists (every nonzero equals 1/sqrt(p)), and a dense i.i.d. standard
normal matrix. Rows of the Bernoulli matrix are i.i.d.; fixed-row-weight
matrices are not supported.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SparseBinaryMatrix",
    "DenseGaussianMatrix",
    "BitMeasurements",
    "ALPHABET_MAGNITUDE",
    "ALPHABET_SIGN",
    "gen_bernoulli_matrix",
    "gen_gaussian_matrix",
    "measure",
    "quantize_sign",
    "quantize_magnitude",
]

ALPHABET_MAGNITUDE = "magnitude"  # bits in {0, 1}
ALPHABET_SIGN = "sign"            # bits in {-1, +1}


@dataclass(frozen=True)
class SparseBinaryMatrix:
    """m1 x n sparse binary operator with constant nonzero value ``scale``.

    ``row_supports[j]`` holds the column indices of the nonzeros in row j,
    ``col_supports[i]`` the row indices of the nonzeros in column i; both are
    strictly increasing and describe the same nonzero set.
    """

    m1: int
    n: int
    row_supports: list = field(repr=False)
    col_supports: list = field(repr=False)
    scale: float


@dataclass(frozen=True)
class DenseGaussianMatrix:
    """m x n dense matrix with i.i.d. N(0,1) entries, materialized."""

    m: int
    n: int
    entries: np.ndarray = field(repr=False)
    seed: int


@dataclass(frozen=True)
class BitMeasurements:
    """1-bit measurements over a declared alphabet.

    ``magnitude`` bits live in {0, 1}, ``sign`` bits in {-1, +1}.
    """

    bits: np.ndarray
    alphabet: str

    def __post_init__(self):
        if self.alphabet == ALPHABET_MAGNITUDE:
            allowed = (0, 1)
        elif self.alphabet == ALPHABET_SIGN:
            allowed = (-1, 1)
        else:
            raise ValueError(f"unknown bit alphabet: {self.alphabet!r}")
        if not np.isin(self.bits, allowed).all():
            raise ValueError(f"bits outside the {self.alphabet} alphabet {allowed}")

    def __len__(self):
        return len(self.bits)


def gen_bernoulli_matrix(m1, n, p, seed) -> SparseBinaryMatrix:
    """Draw an m1 x n matrix with i.i.d. Bernoulli(p) support, scaled 1/sqrt(p).

    Rows are drawn in order from one PCG64 stream (n uniforms per row), so a
    matrix with the same seed and a larger m1 extends this one row for row.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"Bernoulli parameter must be in (0, 1], got p={p}")
    if m1 < 0 or n < 1:
        raise ValueError(f"invalid shape {m1} x {n}")

    rng = np.random.default_rng(seed)
    row_supports = [np.flatnonzero(rng.random(n) < p) for _ in range(m1)]

    lengths = np.array([len(s) for s in row_supports], dtype=np.int64)
    if lengths.sum() > 0:
        cols = np.concatenate(row_supports)
        rows = np.repeat(np.arange(m1, dtype=np.int64), lengths)
        order = np.argsort(cols, kind="stable")  # row-major gen keeps rows sorted per column
        cols_sorted = cols[order]
        rows_sorted = rows[order]
        boundaries = np.searchsorted(cols_sorted, np.arange(1, n))
        col_supports = np.split(rows_sorted, boundaries)
    else:
        col_supports = [np.empty(0, dtype=np.int64) for _ in range(n)]

    return SparseBinaryMatrix(
        m1=m1,
        n=n,
        row_supports=row_supports,
        col_supports=col_supports,
        scale=1.0 / np.sqrt(p),
    )


def gen_gaussian_matrix(m, n, seed, dtype=np.float64) -> DenseGaussianMatrix:
    """Draw an m x n matrix of i.i.d. N(0,1) entries, deterministic in the seed."""
    if m < 1 or n < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m} x {n}")
    rng = np.random.default_rng(seed)
    entries = rng.standard_normal((m, n)).astype(dtype, copy=False)
    return DenseGaussianMatrix(m=m, n=n, entries=entries, seed=seed)


def measure(matrix, x, noise_variance, noise_seed) -> np.ndarray:
    """Apply ``matrix @ x`` and add i.i.d. zero-mean Gaussian noise.

    ``noise_variance = 0`` returns the exact product (the noise stream is not
    touched). The sparse apply visits each stored nonzero once. Noise comes
    from its own seed so realizations can vary with the matrix held fixed.
    """
    x = np.asarray(x, dtype=float)
    if isinstance(matrix, SparseBinaryMatrix):
        if x.shape != (matrix.n,):
            raise ValueError(f"signal length {x.shape} does not match n={matrix.n}")
        y = np.empty(matrix.m1)
        for j, support in enumerate(matrix.row_supports):
            y[j] = x[support].sum()
        y *= matrix.scale
    elif isinstance(matrix, DenseGaussianMatrix):
        if x.shape != (matrix.n,):
            raise ValueError(f"signal length {x.shape} does not match n={matrix.n}")
        y = matrix.entries @ x
    else:
        raise TypeError(f"unsupported matrix type: {type(matrix).__name__}")

    if noise_variance < 0:
        raise ValueError("noise variance must be nonnegative")
    if noise_variance > 0:
        rng = np.random.default_rng(noise_seed)
        y = y + rng.normal(0.0, np.sqrt(noise_variance), len(y))
    return y


def quantize_sign(y) -> BitMeasurements:
    """Elementwise sign quantizer with sign(0) = +1."""
    y = np.asarray(y, dtype=float)
    bits = np.where(y >= 0.0, 1, -1).astype(np.int8)
    return BitMeasurements(bits=bits, alphabet=ALPHABET_SIGN)


def quantize_magnitude(y, epsilon) -> BitMeasurements:
    """Magnitude quantizer: bit 0 when |y| <= epsilon, else 1.

    The boundary |y| = epsilon maps to 0, so with epsilon = 0 the bit is 0
    exactly where the measurement is exactly zero.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    y = np.asarray(y, dtype=float)
    bits = (np.abs(y) > epsilon).astype(np.int8)
    return BitMeasurements(bits=bits, alphabet=ALPHABET_MAGNITUDE)
