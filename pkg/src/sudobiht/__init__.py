"""Two-part sparse recovery from 1-bit measurements.

Stage 1 identifies zero coefficients from sparse binary measurements
quantized to magnitude bits; stage 2 runs binary iterative hard thresholding
(BIHT) on the surviving columns of a dense Gaussian matrix. A benchmark
harness sweeps measurement rates and compares against direct BIHT.
"""

__version__ = "0.1.0"

from .biht import BihtConfig, SolverTrace, biht, consistency_check, hard_threshold
from .model import (
    ReconstructionReport,
    SparseSignal,
    generate_signal,
    snr_db,
    support_metrics,
)
from .pipeline import (
    DirectSeeds,
    Seeds,
    TwoPartConfig,
    embed_solution,
    reduce_columns,
    run_direct,
    run_two_part,
)
from .sensing import (
    ALPHABET_MAGNITUDE,
    ALPHABET_SIGN,
    BitMeasurements,
    DenseGaussianMatrix,
    SparseBinaryMatrix,
    gen_bernoulli_matrix,
    gen_gaussian_matrix,
    measure,
    quantize_magnitude,
    quantize_sign,
)
from .zero_ident import Part1Result, identify_zeros, small_measurement_set

__all__ = [
    "__version__",
    "ALPHABET_MAGNITUDE",
    "ALPHABET_SIGN",
    "BihtConfig",
    "BitMeasurements",
    "DenseGaussianMatrix",
    "DirectSeeds",
    "Part1Result",
    "ReconstructionReport",
    "Seeds",
    "SolverTrace",
    "SparseBinaryMatrix",
    "SparseSignal",
    "TwoPartConfig",
    "biht",
    "consistency_check",
    "embed_solution",
    "gen_bernoulli_matrix",
    "gen_gaussian_matrix",
    "generate_signal",
    "hard_threshold",
    "identify_zeros",
    "measure",
    "quantize_magnitude",
    "quantize_sign",
    "reduce_columns",
    "run_direct",
    "run_two_part",
    "small_measurement_set",
    "snr_db",
    "support_metrics",
]
