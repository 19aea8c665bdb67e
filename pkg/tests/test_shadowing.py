import math

import numpy as np
import pytest
from scipy import stats

from rsrp.data import DriveTestDataset, Measurement
from rsrp.exceptions import EmptyDiffs, InvalidAlpha, TooFewSamples
from rsrp.geo import GeoPoint, offset
from rsrp.shadowing import (NoiseOptions, ShadowingIndex, consecutive_differences, diff_std, estimate_shadowing,
                            estimate_sigma, local_noise_sigmas, sigma_confidence_interval)
from rsrp.synth import generate

from conftest import ORIGIN, line_config

P = GeoPoint(35.70, 51.40)


def track(values, cells=None, step_m=5.0):
    cells = cells or ["A"] * len(values)
    return DriveTestDataset(tuple(Measurement(i, 1000 * i, offset(P, step_m * i, 0.0), v, c)
                                  for i, (v, c) in enumerate(zip(values, cells))))


class TestConsecutiveDifferences:

    def test_basic_pairs(self):
        diffs = consecutive_differences(track([-80.0, -82.0, -79.0, -85.0]))
        assert [d.value_db for d in diffs] == [-2.0, 3.0, -6.0]
        assert [d.pair for d in diffs] == [(0, 1), (1, 2), (2, 3)]
        assert diffs[0].displacement_m == pytest.approx(5.0, abs=1e-3)

    def test_cell_change_and_missing_break_pairs(self):
        ds = track([-80.0, -82.0, None, -85.0, -86.0], cells=["A", "B", "B", "B", "B"])
        assert [d.pair for d in consecutive_differences(ds)] == [(3, 4)]

    def test_displacement_limit(self):
        ds = track([-80.0, -82.0, -79.0], step_m=20.0)
        assert consecutive_differences(ds, l_max_m=15.0) == []
        assert len(consecutive_differences(ds, l_max_m=25.0)) == 2

    def test_non_overlapping(self):
        ds = track([-80.0, -82.0, -79.0, -85.0, -84.0])
        assert [d.pair for d in consecutive_differences(ds, non_overlapping=True)] == [(0, 1), (2, 3)]

    def test_non_overlapping_skips_only_after_admitted_pair(self):
        ds = track([-80.0, None, -79.0, -85.0, -84.0])
        assert [d.pair for d in consecutive_differences(ds, non_overlapping=True)] == [(2, 3)]

    def test_disc_restriction(self):
        ds = track([-80.0 - i for i in range(20)])
        center = offset(P, 10.0, 0.0)
        diffs = consecutive_differences(ds, radius_m=12.0, center=center)
        # points 0..4 lie within 12 m of the center
        assert [d.pair for d in diffs] == [(0, 1), (1, 2), (2, 3), (3, 4)]

    def test_path_loss_cancels_on_short_steps(self):
        # samples 5 m apart at 2 km or more from the cell: the distance term
        # moves by less than 10 * 3.5 * log10(2005 / 2000) dB per step
        config = line_config(p0_dbm=-20.0, start_m=2000.0, end_m=2500.0, speed_kmh=18.0)
        dataset, _, _ = generate(config)
        diffs = consecutive_differences(dataset)
        assert len(diffs) == len(dataset) - 1
        assert max(abs(d.value_db) for d in diffs) < 0.05

    def test_differences_track_noise(self):
        config = line_config(sigma_db=3.0, seed=4, p0_dbm=-20.0, start_m=2000.0, end_m=2500.0, speed_kmh=18.0)
        dataset, _, truth = generate(config)
        for d in consecutive_differences(dataset):
            i, j = d.pair
            assert d.value_db == pytest.approx(truth.noise_db[j] - truth.noise_db[i], abs=0.05)


class TestEstimate:

    def test_sqrt2_law(self):
        rng = np.random.default_rng(2023)
        samples = rng.normal(0.0, 6.0, 100001)
        assert 5.88 <= estimate_sigma(np.diff(samples)) <= 6.12

    def test_zero_noise(self):
        assert estimate_sigma([0.0, 0.0, 0.0]) == 0.0

    def test_diff_std_known_zero_mean(self):
        assert diff_std([3.0, -3.0, 3.0, -3.0]) == pytest.approx(3.0)
        assert estimate_sigma([2.0, -2.0]) == pytest.approx(2.0 / math.sqrt(2.0))

    def test_empty(self):
        with pytest.raises(EmptyDiffs):
            estimate_sigma([])

    def test_single_pair_has_no_interval(self):
        est = estimate_shadowing([4.0])
        assert est.n_pairs == 1
        assert not est.has_interval

    def test_estimate_lies_in_interval(self):
        rng = np.random.default_rng(5)
        for alpha in (0.01, 0.05, 0.1, 0.2):
            est = estimate_shadowing(rng.normal(0.0, 6.0 * math.sqrt(2.0), 50), alpha)
            assert est.ci_low_db <= est.sigma_db <= est.ci_high_db
            assert est.confidence == pytest.approx(1.0 - alpha)


class TestConfidenceInterval:

    def test_closed_form(self):
        low, high = sigma_confidence_interval(4.0, 11, 0.05)
        a, b = stats.chi2.ppf(0.025, 10), stats.chi2.ppf(0.975, 10)
        assert low == pytest.approx(math.sqrt(10 * 16.0 / (2 * b)))
        assert high == pytest.approx(math.sqrt(10 * 16.0 / (2 * a)))

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.5])
    def test_invalid_alpha(self, alpha):
        with pytest.raises(InvalidAlpha):
            sigma_confidence_interval(1.0, 10, alpha)

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            sigma_confidence_interval(1.0, 1, 0.05)

    @pytest.mark.parametrize("n", [2, 3, 4, 6, 10, 30])
    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.3, 0.6, 0.8, 0.95, 0.99])
    def test_interval_always_brackets_estimate(self, n, alpha):
        low, high = sigma_confidence_interval(3.0, n, alpha)
        assert low <= 3.0 / math.sqrt(2.0) <= high

    def test_wide_alpha_on_one_pair_of_diffs(self):
        est = estimate_shadowing([2.0, -2.0], alpha=0.8)
        assert est.sigma_db == pytest.approx(math.sqrt(2.0))
        assert est.ci_low_db <= est.sigma_db <= est.ci_high_db

    @pytest.mark.parametrize("k", [-3.0, 0.5, 10.0])
    def test_scale_equivariance(self, k):
        values = np.random.default_rng(8).normal(0.0, 4.0, 40)
        base, scaled = estimate_shadowing(values), estimate_shadowing(k * values)
        assert scaled.sigma_db == pytest.approx(abs(k) * base.sigma_db, rel=1e-12)
        assert scaled.ci_low_db == pytest.approx(abs(k) * base.ci_low_db, rel=1e-12)
        assert scaled.ci_high_db == pytest.approx(abs(k) * base.ci_high_db, rel=1e-12)

    def test_coverage(self):
        rng = np.random.default_rng(31)
        hits = 0
        for _ in range(1000):
            a = rng.normal(0.0, 5.0, 200)
            b = rng.normal(0.0, 5.0, 200)
            low, high = sigma_confidence_interval(diff_std(a - b), 200, 0.05)
            hits += low <= 5.0 <= high
        assert 0.93 <= hits / 1000 <= 0.97


class TestShadowingIndex:

    def test_local_sigma_excludes_held_out_point(self):
        ds = track([-80.0, -82.0, -79.0, -85.0, -84.0])
        index = ShadowingIndex(ds)
        assert len(index) == 4
        center = offset(P, 10.0, 0.0)
        everything = index.local_values(center, 100.0)
        assert sorted(everything.tolist()) == [-6.0, -2.0, 1.0, 3.0]
        without_2 = index.local_values(center, 100.0, exclude_id=2)
        assert sorted(without_2.tolist()) == [-2.0, 1.0]
        assert index.local_sigma(center, 100.0, exclude_id=2, min_pairs=3) is None
        assert index.local_sigma(center, 100.0) == pytest.approx(estimate_sigma(everything))

    def test_global(self):
        assert ShadowingIndex(track([-80.0])).global_sigma() is None
        assert ShadowingIndex(track([-80.0, -82.0])).global_sigma() == pytest.approx(2.0 / math.sqrt(2.0))

    def test_local_noise_sigmas_floor_and_fallback(self):
        ds = track([-80.0, -80.0, -80.0, -80.0])
        options = NoiseOptions(min_sigma_db=0.5, min_pairs=2)
        index = ShadowingIndex(ds)
        far = Measurement(99, 0, offset(ORIGIN, 5000.0, 0.0), -80.0, "A")
        sigmas = local_noise_sigmas(index, list(ds) + [far], 50.0, options)
        # zero local noise is floored; the far point falls back to the global estimate (also floored)
        assert sigmas == (0.5, 0.5, 0.5, 0.5, 0.5)


@pytest.mark.slow
def test_recovers_generator_sigma():
    config = line_config(sigma_db=6.0, seed=8, p0_dbm=0.0, start_m=200.0, end_m=2700.0, speed_kmh=18.0)
    dataset, _, _ = generate(config)
    est = estimate_shadowing(consecutive_differences(dataset, non_overlapping=True))
    assert est.n_pairs >= 240
    assert abs(est.sigma_db - 6.0) < 0.9
