"""Binary iterative hard thresholding for 1-bit measurements.

Both one-sided variants are provided: the l1 flavor for noiseless bits and
the l2 flavor for noisy bits. Iterates start from zero, so the first step is
the matched-filter estimate (tau/2) * Phi^T y; only the final output is
normalized to unit energy.
"""

from dataclasses import dataclass, field

import numpy as np

from .sensing import ALPHABET_SIGN, BitMeasurements, DenseGaussianMatrix

__all__ = [
    "BihtConfig",
    "SolverTrace",
    "hard_threshold",
    "biht",
    "consistency_check",
]


@dataclass(frozen=True)
class BihtConfig:
    """Solver knobs.

    ``step_size=None`` picks the default for the variant: 1 for ``l1`` and
    1/m for ``l2`` (so l2 steps stay bounded as m grows). Noiseless runs
    normally set ``stop_on_consistency=True`` with a cap of 100 iterations;
    noisy runs use a fixed iteration count.
    """

    k: int
    variant: str = "l1"
    step_size: float | None = None
    max_iterations: int = 100
    stop_on_consistency: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("sparsity k must be >= 1")
        if self.step_size is not None and self.step_size <= 0:
            raise ValueError("step size must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.variant not in ("l1", "l2"):
            raise ValueError(f"unknown variant {self.variant!r}, expected 'l1' or 'l2'")


@dataclass(frozen=True)
class SolverTrace:
    iterations_run: int
    consistent: bool
    hamming_errors_per_iteration: list = field(repr=False)


def hard_threshold(a, k) -> np.ndarray:
    """Keep the k largest-magnitude entries, zero the rest.

    Ties are broken by keeping the lowest index first (stable sort order),
    so results are deterministic. ``k >= len(a)`` returns a copy unchanged.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = np.asarray(a, dtype=float)
    if k >= a.size:
        return a.copy()
    out = np.zeros_like(a)
    if k == 0:
        return out
    keep = np.argsort(-np.abs(a), kind="stable")[:k]
    out[keep] = a[keep]
    return out


def _sign_bits(w):
    # quantizer convention: sign(0) = +1
    return np.where(w >= 0.0, 1, -1).astype(np.int8)


def biht(matrix: DenseGaussianMatrix, y: BitMeasurements, config: BihtConfig):
    """Recover a k-sparse unit-norm vector from sign measurements.

    Starting from a = 0, iterates

        l1:  a <- H_k(a + (tau/2) * Phi^T (y - sign(Phi a)))
        l2:  a <- H_k(a - tau * Phi^T (y * min(y * Phi a, 0)))

    where H_k is :func:`hard_threshold` and the update's sign() is the plain
    signum (0 at 0). The loop stops at ``max_iterations``, or earlier when
    ``stop_on_consistency`` and the re-quantized iterate reproduces y. The
    final iterate is normalized to unit norm; an all-zero iterate is returned
    as-is and flagged inconsistent.

    Returns
    -------
    (xhat, trace) : (np.ndarray, SolverTrace)
        ``trace`` records the Hamming distance between sign(Phi a) and y
        after every iteration.
    """
    if y.alphabet != ALPHABET_SIGN:
        raise ValueError(f"expected sign bits, got alphabet {y.alphabet!r}")
    if len(y) != matrix.m:
        raise ValueError(f"got {len(y)} bits for {matrix.m} measurements")

    phi = matrix.entries
    y_bits = y.bits
    y_real = y_bits.astype(float)
    tau = config.step_size
    if tau is None:
        tau = 1.0 if config.variant == "l1" else 1.0 / matrix.m

    a = np.zeros(matrix.n)
    w = np.zeros(matrix.m)  # Phi @ a, carried across iterations
    hamming = []
    iterations_run = 0
    for _ in range(config.max_iterations):
        if config.variant == "l1":
            grad = phi.T @ (y_real - np.sign(w))
            a = hard_threshold(a + 0.5 * tau * grad, config.k)
        elif not a.any():
            # the one-sided l2 penalty has zero gradient at a = 0, so the
            # zero iterate takes the matched-filter step instead
            a = hard_threshold(0.5 * tau * (phi.T @ y_real), config.k)
        else:
            residual = y_real * np.minimum(y_real * w, 0.0)
            a = hard_threshold(a - tau * (phi.T @ residual), config.k)
        w = phi @ a
        errors = int(np.count_nonzero(_sign_bits(w) != y_bits))
        hamming.append(errors)
        iterations_run += 1
        if config.stop_on_consistency and errors == 0:
            break

    norm = np.linalg.norm(a)
    if norm == 0.0:
        xhat = a
        consistent = False
    else:
        xhat = a / norm
        # recompute on the returned estimate: rescaling preserves signs in
        # exact arithmetic but can flip a float sign at measurements near 0
        final_errors = int(np.count_nonzero(_sign_bits(phi @ xhat) != y_bits))
        hamming[-1] = final_errors
        consistent = final_errors == 0
    trace = SolverTrace(
        iterations_run=iterations_run,
        consistent=consistent,
        hamming_errors_per_iteration=hamming,
    )
    return xhat, trace


def consistency_check(matrix: DenseGaussianMatrix, y: BitMeasurements, xhat):
    """Compare sign(Phi @ xhat) with y, using sign(0) = +1.

    Returns ``(consistent, hamming_errors)``. Invariant under positive
    rescaling of ``xhat``.
    """
    if y.alphabet != ALPHABET_SIGN:
        raise ValueError(f"expected sign bits, got alphabet {y.alphabet!r}")
    xhat = np.asarray(xhat, dtype=float)
    if xhat.shape != (matrix.n,):
        raise ValueError(f"xhat length {xhat.shape} does not match n={matrix.n}")
    if len(y) != matrix.m:
        raise ValueError(f"got {len(y)} bits for {matrix.m} measurements")
    errors = int(np.count_nonzero(_sign_bits(matrix.entries @ xhat) != y.bits))
    return errors == 0, errors
