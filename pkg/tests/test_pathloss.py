import math

import numpy as np
import pytest

from rsrp.data import Measurement
from rsrp.exceptions import (ConfigError, DistanceBelowReference, SingularNormalMatrix, TooFewPoints,
                             WeightLengthMismatch)
from rsrp.geo import GeoPoint
from rsrp.pathloss import (FIT_MLE, FIT_MSE, FitBounds, NoiseWeights, PathLossParams, fit_group, fit_mle, fit_mse,
                           grid_oracle, grid_oracle_arrays, lattice, objective, predict_rsrp, regressors,
                           solve_box_ls)
from rsrp.selection import CellGroup
from rsrp.synth import generate

from conftest import line_config

BOUNDS = FitBounds()


def make_group(distances, powers, cell_id="A"):
    points = tuple((Measurement(i, i, GeoPoint(0.0, 0.0), float(p), cell_id), float(d))
                   for i, (d, p) in enumerate(zip(distances, powers)))
    return CellGroup(cell_id, points)


def random_instance(rng, n=30):
    d = rng.uniform(20.0, 500.0, n)
    p0 = rng.uniform(-100.0, 0.0)
    beta = rng.uniform(1.0, 8.0)
    p = p0 - 10.0 * beta * np.log10(d) + rng.normal(0.0, 4.0, n)
    return d, p


def unconstrained(d, p):
    slope, intercept = np.polyfit(regressors(d), p, 1)
    return intercept, -slope


class TestModel:

    def test_predict_rsrp(self):
        params = PathLossParams(-40.0, 3.5)
        assert predict_rsrp(params, 1.0) == -40.0
        assert predict_rsrp(params, 100.0) == pytest.approx(-110.0)

    def test_below_reference(self):
        with pytest.raises(DistanceBelowReference):
            predict_rsrp(PathLossParams(-40.0, 3.5), 0.5)

    def test_regressors_clamp(self):
        assert regressors([0.2, 1.0, 10.0]).tolist() == [0.0, 0.0, 10.0]

    def test_bounds(self):
        with pytest.raises(ConfigError):
            FitBounds(p0_low=-10.0, p0_high=-90.0)
        assert BOUNDS.contains(-40.0, 3.5)
        assert not BOUNDS.contains(-5.0, 3.5)
        assert BOUNDS.beta_mid == 4.0


class TestNoiselessRecovery:

    def test_fit_mse_recovers_truth(self, noiseless_scene):
        dataset, _, truth = noiseless_scene
        assert len(dataset) == 200
        group = make_group(truth.true_dist_m, [m.rsrp_dbm for m in dataset])
        params = fit_mse(group, BOUNDS)
        assert params.p0_dbm == pytest.approx(-40.0, abs=1e-6)
        assert params.beta == pytest.approx(3.5, abs=1e-6)
        assert params.residual_rss == pytest.approx(0.0, abs=1e-9)
        assert not params.degenerate

    def test_clamped_to_box(self):
        d = np.linspace(100.0, 1000.0, 20)
        params = fit_mse(make_group(d, -5.0 - 10.0 * 3.0 * np.log10(d)), BOUNDS)
        assert params.p0_dbm == pytest.approx(BOUNDS.p0_high)
        assert BOUNDS.contains(params.p0_dbm, params.beta, tol=1e-12)


class TestSolverOptimality:

    def test_matches_grid_oracle(self):
        rng = np.random.default_rng(2024)
        n_infeasible = 0
        for _ in range(100):
            d, p = random_instance(rng)
            x = regressors(d)
            if not BOUNDS.contains(*unconstrained(d, p)):
                n_infeasible += 1
            w = np.ones(d.shape[0])
            p0, beta = solve_box_ls(p, x, None, BOUNDS)
            assert BOUNDS.contains(p0, beta, tol=1e-12)
            g_p0, g_beta = grid_oracle_arrays(p, x, BOUNDS, 0.001)
            best = objective(g_p0, g_beta, p, x, w)
            assert objective(p0, beta, p, x, w) <= best + 1e-9 * max(1.0, abs(best))
        assert n_infeasible >= 20

    def test_grid_oracle_equals_full_lattice_scan(self):
        rng = np.random.default_rng(7)
        step = 0.05
        p0_nodes = lattice(BOUNDS.p0_low, BOUNDS.p0_high, step)
        betas = lattice(BOUNDS.beta_low, BOUNDS.beta_high, step)
        for _ in range(10):
            d, p = random_instance(rng)
            x = regressors(d)
            w = np.ones(d.shape[0])
            full = min(float(np.min(np.sum((p[None, :] - p0_nodes[:, None] + beta * x[None, :]) ** 2, axis=1)))
                       for beta in betas)
            g_p0, g_beta = grid_oracle_arrays(p, x, BOUNDS, step)
            assert objective(g_p0, g_beta, p, x, w) == pytest.approx(full, rel=1e-12)

    def test_shift_equivariance(self):
        rng = np.random.default_rng(9)
        d = np.linspace(30.0, 400.0, 25)
        p = -40.0 - 35.0 * np.log10(d) + rng.normal(0.0, 2.0, 25)
        p0, beta = solve_box_ls(p, regressors(d), None, BOUNDS)
        assert BOUNDS.contains(p0 + 7.5, beta)
        shifted_p0, shifted_beta = solve_box_ls(p + 7.5, regressors(d), None, BOUNDS)
        assert shifted_p0 == pytest.approx(p0 + 7.5, abs=1e-9)
        assert shifted_beta == pytest.approx(beta, abs=1e-9)

    def test_grid_oracle_on_group(self):
        d = np.linspace(50.0, 400.0, 15)
        group = make_group(d, -40.0 - 35.0 * np.log10(d))
        p0, beta = grid_oracle(group, BOUNDS, 0.01)
        assert p0 == pytest.approx(-40.0, abs=1e-6)
        assert beta == pytest.approx(3.5, abs=1e-6)

    def test_lattice(self):
        nodes = lattice(1.5, 6.5, 0.5)
        assert nodes.shape == (11,)
        assert nodes[-1] == pytest.approx(6.5)

    def test_singular(self):
        with pytest.raises(SingularNormalMatrix):
            solve_box_ls([-80.0, -81.0, -79.0], [20.0, 20.0, 20.0], None, BOUNDS)

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints):
            solve_box_ls([-80.0], [20.0], None, BOUNDS)

    def test_weight_length(self):
        with pytest.raises(WeightLengthMismatch):
            solve_box_ls([-80.0, -81.0], [20.0, 21.0], [1.0], BOUNDS)


class TestDegenerate:

    def test_equidistant_points_fix_beta(self):
        group = make_group([200.0] * 10, np.linspace(-100.0, -90.0, 10))
        params = fit_mse(group, BOUNDS)
        assert params.degenerate
        assert params.beta == BOUNDS.beta_mid
        # P0 is the mean received power lifted by beta * x
        expected = float(np.mean(np.linspace(-100.0, -90.0, 10))) + BOUNDS.beta_mid * 10.0 * math.log10(200.0)
        assert params.p0_dbm == pytest.approx(BOUNDS.clamp_p0(expected))


class TestMaximumLikelihood:

    def test_uniform_sigma_equals_mse(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            d = rng.uniform(20.0, 300.0, 25)
            p = rng.uniform(-40.0, -20.0) - 10.0 * rng.uniform(2.0, 3.5) * np.log10(d) + rng.normal(0.0, 4.0, 25)
            group = make_group(d, p)
            mse = fit_mse(group, BOUNDS)
            mle = fit_mle(group, NoiseWeights(float(rng.uniform(0.5, 10.0))), BOUNDS)
            assert mle.p0_dbm == pytest.approx(mse.p0_dbm, abs=1e-9)
            assert mle.beta == pytest.approx(mse.beta, abs=1e-9)
            assert mle.fit_kind == FIT_MLE

    def test_per_point_weights_length(self):
        group = make_group([100.0, 200.0, 300.0], [-110.0, -120.0, -126.0])
        with pytest.raises(WeightLengthMismatch):
            fit_mle(group, NoiseWeights((1.0, 2.0)), BOUNDS)

    def test_non_positive_sigma(self):
        with pytest.raises(ValueError):
            NoiseWeights((1.0, 0.0))

    def test_fit_group_dispatch(self):
        group = make_group([100.0, 200.0, 300.0], [-110.0, -120.0, -126.0])
        assert fit_group(group, BOUNDS, FIT_MSE).fit_kind == FIT_MSE
        with pytest.raises(ValueError):
            fit_group(group, BOUNDS, FIT_MLE)
        with pytest.raises(ConfigError):
            fit_group(group, BOUNDS, "lasso")

    @pytest.mark.slow
    def test_weighting_follows_reliable_half(self):
        # half the points at sigma 1, half at sigma 10: the weighted fit should
        # beat plain least squares at recovering the truth
        rng = np.random.default_rng(99)
        sigmas = np.where(np.arange(60) % 2 == 0, 1.0, 10.0)
        weights = NoiseWeights(tuple(sigmas)).resolve(60)
        err_mle, err_mse = [], []
        for _ in range(100):
            d = rng.uniform(50.0, 800.0, 60)
            x = regressors(d)
            p = -40.0 - 3.5 * x + rng.normal(0.0, 1.0, 60) * sigmas
            for errors, w in ((err_mle, weights), (err_mse, None)):
                p0, beta = solve_box_ls(p, x, w, BOUNDS)
                errors.append(abs(beta - 3.5) + abs(p0 + 40.0) / 10.0)
        assert np.mean(err_mle) < np.mean(err_mse)


def test_synthetic_group_recovery_with_noise():
    dataset, _, truth = generate(line_config(sigma_db=4.0, seed=5))
    ms = [m for m in dataset if m.has_rsrp]
    group = make_group([truth.true_dist_m[m.id] for m in ms], [m.rsrp_dbm for m in ms])
    params = fit_mse(group, BOUNDS)
    p0, beta = grid_oracle(group, BOUNDS, 0.01)
    x = regressors(group.distances())
    w = np.ones(group.n_points)
    best = objective(p0, beta, group.powers(), x, w)
    assert objective(params.p0_dbm, params.beta, group.powers(), x, w) <= best + 1e-9 * max(1.0, best)
    assert BOUNDS.contains(params.p0_dbm, params.beta, tol=1e-12)
