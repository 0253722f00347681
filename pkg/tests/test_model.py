import math

import numpy as np
import pytest

from sudobiht import generate_signal, snr_db, support_metrics


class TestGenerateSignal:
    def test_shape_sparsity_and_unit_norm(self):
        x = generate_signal(10000, 50, seed=7)
        assert x.n == 10000 and x.k == 50
        assert np.count_nonzero(x.values) == 50
        assert abs(np.linalg.norm(x.values) - 1.0) <= 1e-12

    def test_deterministic_in_seed(self):
        a = generate_signal(300, 12, seed=42)
        b = generate_signal(300, 12, seed=42)
        assert np.array_equal(a.values, b.values)

    def test_different_seeds_differ(self):
        a = generate_signal(300, 12, seed=1)
        b = generate_signal(300, 12, seed=2)
        assert not np.array_equal(a.values, b.values)

    @pytest.mark.parametrize("seed", [0, 1, 99])
    def test_single_entry_is_plus_or_minus_one(self, seed):
        x = generate_signal(1, 1, seed=seed)
        assert x.values[0] in (1.0, -1.0)

    @pytest.mark.parametrize("n,k", [(10, 0), (10, 11), (0, 1)])
    def test_invalid_parameters(self, n, k):
        with pytest.raises(ValueError):
            generate_signal(n, k, seed=0)

    def test_support_positions_uniform(self):
        """Monte Carlo check: per-position support counts stay within 3 sigma
        of the multinomial expectation over 10,000 seeded draws."""
        n, k, draws = 100, 5, 10000
        counts = np.zeros(n, dtype=int)
        for seed in range(draws):
            x = generate_signal(n, k, seed=seed)
            counts[np.flatnonzero(x.values)] += 1
        expected = draws * k / n
        sigma = math.sqrt(draws * (k / n) * (1 - k / n))
        assert np.abs(counts - expected).max() <= 3 * sigma


class TestSnrDb:
    def test_exact_recovery_is_infinite(self):
        x = generate_signal(50, 3, seed=0).values
        assert snr_db(x, x.copy()) == math.inf

    def test_zero_estimate_of_unit_signal_is_zero_db(self):
        x = generate_signal(50, 3, seed=1).values
        assert abs(snr_db(x, np.zeros(50))) <= 1e-12

    def test_point_example(self):
        assert snr_db([1.0, 0.0], [0.9, 0.0]) == pytest.approx(20.0, abs=1e-10)

    @pytest.mark.parametrize("delta", [0.5, 0.1, 0.013])
    def test_scalar_shrinkage(self, delta):
        # snr_db(x, (1-delta) x) = -20 log10(delta) for unit-norm x
        x = generate_signal(200, 9, seed=3).values
        expected = -20.0 * math.log10(delta)
        assert snr_db(x, (1 - delta) * x) == pytest.approx(expected, abs=1e-9)

    def test_length_mismatch_raises(self):
        with pytest.raises(ValueError):
            snr_db([1.0, 0.0], [1.0])

    def test_all_zero_reference_raises(self):
        with pytest.raises(ValueError):
            snr_db([0.0, 0.0], [1.0, 0.0])


class TestSupportMetrics:
    def test_all_true_zeros(self):
        x = generate_signal(3, 1, seed=5)
        # place the nonzero deterministically by construction
        zeros = np.flatnonzero(x.values == 0)
        assert support_metrics(x, zeros) == (2, 0)

    def test_false_zero_counted(self):
        x = generate_signal(3, 1, seed=5)
        nonzero = int(np.flatnonzero(x.values)[0])
        assert support_metrics(x, [nonzero]) == (1, 1)

    def test_empty_set(self):
        x = generate_signal(10, 2, seed=0)
        assert support_metrics(x, []) == (0, 0)

    def test_out_of_range_raises(self):
        x = generate_signal(10, 2, seed=0)
        with pytest.raises(ValueError):
            support_metrics(x, [10])

    def test_matches_direct_scan(self):
        rng = np.random.default_rng(2024)
        for _ in range(50):
            n = int(rng.integers(5, 60))
            k = int(rng.integers(1, n + 1))
            x = generate_signal(n, k, seed=int(rng.integers(1 << 30)))
            size = int(rng.integers(0, n + 1))
            zero_set = np.sort(rng.choice(n, size=size, replace=False))
            identified, false_zeros = support_metrics(x, zero_set)
            assert identified == len(zero_set)
            assert false_zeros == sum(1 for i in zero_set if x.values[i] != 0)
