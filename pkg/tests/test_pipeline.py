from pathlib import Path

import numpy as np
import pytest

from sudobiht import (
    BihtConfig,
    DirectSeeds,
    Seeds,
    TwoPartConfig,
    embed_solution,
    gen_gaussian_matrix,
    generate_signal,
    reduce_columns,
    run_direct,
    run_two_part,
)
from sudobiht.bench import derive_seed, two_part_seeds

GOLDEN_PATH = Path(__file__).parent / "data" / "golden_two_part.npz"


def _noiseless_config(n=200, k=4, m1=120, m2=200, seed_tag=0, max_iterations=100):
    return TwoPartConfig(
        n=n, k=k, m1=m1, m2=m2, p=1.0 / k, epsilon=0.0, zero_threshold=1,
        noise_variance=0.0,
        biht=BihtConfig(k=k, variant="l1", max_iterations=max_iterations),
        seeds=two_part_seeds(derive_seed(2718, "pipeline", seed_tag)),
    )


class TestReduceColumns:
    def test_full_index_set_is_identity(self):
        matrix = gen_gaussian_matrix(5, 7, seed=1)
        reduced = reduce_columns(matrix, np.arange(7))
        assert np.array_equal(reduced.entries, matrix.entries)

    def test_single_column(self):
        matrix = gen_gaussian_matrix(2, 3, seed=2)
        reduced = reduce_columns(matrix, [1])
        assert reduced.m == 2 and reduced.n == 1
        assert np.array_equal(reduced.entries[:, 0], matrix.entries[:, 1])

    def test_columns_match_elementwise(self):
        rng = np.random.default_rng(9)
        matrix = gen_gaussian_matrix(6, 20, seed=3)
        t = np.sort(rng.choice(20, size=8, replace=False))
        reduced = reduce_columns(matrix, t)
        for j, source in enumerate(t):
            assert np.array_equal(reduced.entries[:, j], matrix.entries[:, source])

    def test_empty_rejected(self):
        matrix = gen_gaussian_matrix(2, 3, seed=0)
        with pytest.raises(ValueError):
            reduce_columns(matrix, [])

    def test_out_of_range_rejected(self):
        matrix = gen_gaussian_matrix(2, 3, seed=0)
        with pytest.raises(ValueError):
            reduce_columns(matrix, [3])


class TestEmbedSolution:
    def test_placement(self):
        out = embed_solution([2.5, -1.0], [1, 4], 5)
        assert np.array_equal(out, [0.0, 2.5, 0.0, 0.0, -1.0])

    def test_empty_set_gives_zeros(self):
        assert np.array_equal(embed_solution([], [], 4), np.zeros(4))

    def test_roundtrip(self):
        rng = np.random.default_rng(21)
        values = rng.standard_normal(6)
        t = np.sort(rng.choice(30, size=6, replace=False))
        assert np.array_equal(embed_solution(values, t, 30)[t], values)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            embed_solution([1.0, 2.0], [0], 5)

    def test_zero_removal_exactness(self):
        """When t covers the true support, the embedding error equals the
        reduced-problem error exactly."""
        rng = np.random.default_rng(33)
        for _ in range(25):
            n, k = 50, 4
            x = generate_signal(n, k, seed=int(rng.integers(1 << 30)))
            support = np.flatnonzero(x.values)
            extra = rng.choice(np.setdiff1d(np.arange(n), support), size=5, replace=False)
            t = np.sort(np.concatenate([support, extra]))
            xhat2 = rng.standard_normal(t.size)
            embedded = embed_solution(xhat2, t, n)
            assert np.linalg.norm(x.values - embedded) == pytest.approx(
                np.linalg.norm(x.values[t] - xhat2), abs=1e-13
            )


class TestTwoPartConfig:
    def _kwargs(self, **overrides):
        base = dict(
            n=50, k=3, m1=20, m2=30, p=0.2, epsilon=0.0, zero_threshold=1,
            noise_variance=0.0, biht=BihtConfig(k=3),
            seeds=two_part_seeds(0),
        )
        base.update(overrides)
        return base

    def test_valid(self):
        TwoPartConfig(**self._kwargs())

    @pytest.mark.parametrize(
        "overrides",
        [
            {"m1": -1},
            {"m2": 0},
            {"p": 0.0},
            {"p": 1.0001},
            {"epsilon": -0.1},
            {"noise_variance": -1.0},
            {"epsilon": 0.0, "noise_variance": 0.01},
            {"zero_threshold": 0},
        ],
    )
    def test_invalid(self, overrides):
        with pytest.raises(ValueError):
            TwoPartConfig(**self._kwargs(**overrides))


class TestRunTwoPart:
    def test_noiseless_never_false_zeros(self):
        for tag in range(20):
            _, report = run_two_part(_noiseless_config(seed_tag=tag))
            assert report.part1_false_zeros == 0

    def test_report_partition_invariant(self):
        for tag in range(10):
            _, report = run_two_part(_noiseless_config(seed_tag=tag))
            assert report.part1_zero_identified + report.residual_problem_size == 200
            assert report.part1_false_zeros <= report.part1_zero_identified

    def test_residual_equals_support_when_m1_large(self):
        # fixed-seed instance where stage 1 resolves everything but the support
        config = TwoPartConfig(
            n=200, k=4, m1=150, m2=200, p=0.1, epsilon=0.0, zero_threshold=1,
            noise_variance=0.0, biht=BihtConfig(k=4, variant="l1", max_iterations=100),
            seeds=two_part_seeds(derive_seed(3141, "tsupport", 0)),
        )
        xhat, report = run_two_part(config)
        assert report.residual_problem_size == 4
        assert report.part1_false_zeros == 0
        x = generate_signal(200, 4, config.seeds.signal)
        assert np.array_equal(np.flatnonzero(xhat == 0), np.flatnonzero(x.values == 0))

    def test_embedded_output_unit_norm_when_no_false_zeros(self):
        xhat, report = run_two_part(_noiseless_config(seed_tag=1))
        assert report.part1_false_zeros == 0
        assert np.linalg.norm(xhat) == pytest.approx(1.0, abs=1e-12)

    def test_golden_regression(self):
        """Fixed-seed run must reproduce the stored output bit for bit.

        Regenerate with ``python tests/make_golden.py`` (serial mode only;
        the file is tied to this BLAS build).
        """
        if not GOLDEN_PATH.exists():
            pytest.fail(f"golden file missing; run tests/make_golden.py to create {GOLDEN_PATH}")
        stored = np.load(GOLDEN_PATH)
        xhat, report = run_two_part(_golden_config())
        assert np.array_equal(xhat, stored["xhat"])
        assert report.snr_db == stored["snr_db"]
        assert report.part1_zero_identified == stored["part1_zero_identified"]
        assert report.residual_problem_size == stored["residual_problem_size"]
        assert report.iterations_used == stored["iterations_used"]


def _golden_config():
    return TwoPartConfig(
        n=500, k=5, m1=100, m2=400, p=0.2, epsilon=0.0, zero_threshold=1,
        noise_variance=0.0,
        biht=BihtConfig(k=5, variant="l1", max_iterations=100),
        seeds=two_part_seeds(derive_seed(1618, "golden", 0)),
    )


class TestRunDirect:
    def test_dense_signal_edge(self):
        # k = n: thresholding never zeroes anything, output still unit norm
        seeds = DirectSeeds(signal=1, matrix=2, noise=3)
        xhat, report = run_direct(
            8, 8, 30, 0.0, BihtConfig(k=8, variant="l1", max_iterations=50), seeds
        )
        assert np.linalg.norm(xhat) == pytest.approx(1.0, abs=1e-12)
        assert report.residual_problem_size == 8

    def test_noiseless_consistency_rate(self):
        """n=200, k=4, m=400: consistency within 100 iterations on >= 80% of
        50 seeds (observed 44/50)."""
        consistent = 0
        for t in range(50):
            ts = derive_seed(888, "direct-noiseless", t)
            seeds = DirectSeeds(
                signal=derive_seed(ts, "signal"),
                matrix=derive_seed(ts, "matrix"),
                noise=derive_seed(ts, "noise"),
            )
            _, report = run_direct(
                200, 4, 400, 0.0,
                BihtConfig(k=4, variant="l1", max_iterations=100), seeds,
            )
            consistent += report.consistent
        assert consistent >= 40

    def test_invalid_m(self):
        with pytest.raises(ValueError):
            run_direct(10, 2, 0, 0.0, BihtConfig(k=2), DirectSeeds(0, 1, 2))
