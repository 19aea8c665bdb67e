# encoding: utf-8
"""
Log-distance path-loss model

    P(d) = P0 - 10 * beta * log10(d / d0),   d0 = 1 m

fitted per serving cell by box-constrained (weighted) least squares. With
regressor x_i = 10 log10(d_i) the objective

    f(P0, beta) = sum_i w_i (P_i - P0 + beta x_i)^2

is a convex quadratic in two variables, so the constrained minimizer is found
exactly: the unconstrained solution if it is feasible, otherwise the best of
the four edge minimizers and the four corners.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .constants import REFERENCE_DISTANCE_M
from .exceptions import (ConfigError, DistanceBelowReference, SingularNormalMatrix, TooFewPoints,
                         WeightLengthMismatch)
from .selection import CellGroup

logger = logging.getLogger(__name__)

FIT_MSE = "mse"
FIT_MLE = "mle"
FIT_KINDS = (FIT_MSE, FIT_MLE)

SINGULAR_SPREAD = 1e-9


@dataclass(frozen=True)
class FitBounds:
    p0_low: float = -90.0
    p0_high: float = -10.0
    beta_low: float = 1.5
    beta_high: float = 6.5

    def __post_init__(self):
        if not self.p0_low < self.p0_high:
            raise ConfigError("p0_low must be < p0_high")
        if not self.beta_low < self.beta_high:
            raise ConfigError("beta_low must be < beta_high")

    def contains(self, p0, beta, tol=0.0):
        return (self.p0_low - tol <= p0 <= self.p0_high + tol) and (self.beta_low - tol <= beta <= self.beta_high + tol)

    def clamp_p0(self, p0):
        return min(self.p0_high, max(self.p0_low, p0))

    def clamp_beta(self, beta):
        return min(self.beta_high, max(self.beta_low, beta))

    @property
    def beta_mid(self):
        return 0.5 * (self.beta_low + self.beta_high)


def build_fit_bounds(cfg) -> FitBounds:
    return FitBounds(
        p0_low=float(cfg.FIT.P0_LOW),
        p0_high=float(cfg.FIT.P0_HIGH),
        beta_low=float(cfg.FIT.BETA_LOW),
        beta_high=float(cfg.FIT.BETA_HIGH),
    )


@dataclass(frozen=True)
class NoiseWeights:
    """
    Shadowing standard deviations, either one per measurement or a single
    uniform value.
    """
    sigmas_db: Union[float, Tuple[float, ...]]

    def __post_init__(self):
        values = np.atleast_1d(np.asarray(self.sigmas_db, dtype=float))
        if values.size == 0 or not np.all(values > 0):
            raise ValueError("every sigma must be > 0")

    @property
    def is_uniform(self):
        return np.ndim(self.sigmas_db) == 0

    def resolve(self, n) -> np.ndarray:
        """
        :return: weights 1 / sigma_i^2 of length n
        """
        if self.is_uniform:
            return np.full(n, 1.0 / float(self.sigmas_db) ** 2)
        sigmas = np.asarray(self.sigmas_db, dtype=float)
        if sigmas.shape[0] != n:
            raise WeightLengthMismatch("{} sigmas for {} points".format(sigmas.shape[0], n))
        return 1.0 / sigmas ** 2


@dataclass(frozen=True)
class PathLossParams:
    p0_dbm: float
    beta: float
    fit_kind: str = FIT_MSE
    residual_rss: float = 0.0
    degenerate: bool = False


# -----------------------------------------------------------------------------
# model
# -----------------------------------------------------------------------------
def predict_rsrp(params: PathLossParams, distance_m: float) -> float:
    if distance_m < REFERENCE_DISTANCE_M:
        raise DistanceBelowReference(distance_m)
    return params.p0_dbm - 10.0 * params.beta * math.log10(distance_m)


def regressors(distances_m) -> np.ndarray:
    """
    x_i = 10 log10(d_i), distances below the reference distance clamped to it.
    """
    d = np.asarray(distances_m, dtype=float)
    if np.any(d < REFERENCE_DISTANCE_M):
        logger.debug("{} distance(s) below {} m clamped".format(int(np.sum(d < REFERENCE_DISTANCE_M)),
                                                                REFERENCE_DISTANCE_M))
        d = np.maximum(d, REFERENCE_DISTANCE_M)
    return 10.0 * np.log10(d)


def objective(p0, beta, targets, x, weights) -> float:
    r = np.asarray(targets, dtype=float) - p0 + beta * np.asarray(x, dtype=float)
    return float(np.sum(np.asarray(weights, dtype=float) * r * r))


# -----------------------------------------------------------------------------
# solver
# -----------------------------------------------------------------------------
def _edge_beta(p0, targets, x, w, bounds):
    # f restricted to fixed P0 is minimized at beta = -sum w x (P - P0) / sum w x^2
    sxx = float(np.sum(w * x * x))
    if sxx == 0.0:
        return bounds.beta_low
    return bounds.clamp_beta(-float(np.sum(w * x * (targets - p0))) / sxx)


def _edge_p0(beta, targets, x, w, bounds):
    return bounds.clamp_p0(float(np.sum(w * (targets + beta * x))) / float(np.sum(w)))


def solve_box_ls(targets: Sequence[float], x: Sequence[float], weights, bounds: FitBounds) -> Tuple[float, float]:
    """
    Exact weighted least squares for (P0, beta) on the box.
    :param targets: received powers P_i (dBm)
    :param x: regressors 10 log10(d_i)
    :param weights: per-sample weights, or None for uniform
    :return: (p0, beta)
    """
    targets = np.asarray(targets, dtype=float)
    x = np.asarray(x, dtype=float)
    n = targets.shape[0]
    if x.shape[0] != n:
        raise WeightLengthMismatch("{} targets but {} regressors".format(n, x.shape[0]))
    if n < 2:
        raise TooFewPoints("at least 2 points are required, got {}".format(n))
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    if w.shape[0] != n:
        raise WeightLengthMismatch("{} weights for {} points".format(w.shape[0], n))
    if float(np.max(x) - np.min(x)) < SINGULAR_SPREAD:
        raise SingularNormalMatrix("all regressors are equal; beta is not identifiable")

    # 1. unconstrained minimizer of the centered normal equations
    sw = float(np.sum(w))
    x_bar = float(np.sum(w * x)) / sw
    p_bar = float(np.sum(w * targets)) / sw
    xc = x - x_bar
    beta = -float(np.sum(w * xc * (targets - p_bar))) / float(np.sum(w * xc * xc))
    p0 = p_bar + beta * x_bar
    if bounds.contains(p0, beta):
        return p0, beta

    # 2. active set: edge minimizers and corners
    candidates = []
    for p0_edge in (bounds.p0_low, bounds.p0_high):
        candidates.append((p0_edge, _edge_beta(p0_edge, targets, x, w, bounds)))
    for beta_edge in (bounds.beta_low, bounds.beta_high):
        candidates.append((_edge_p0(beta_edge, targets, x, w, bounds), beta_edge))
    for p0_corner in (bounds.p0_low, bounds.p0_high):
        for beta_corner in (bounds.beta_low, bounds.beta_high):
            candidates.append((p0_corner, beta_corner))

    best = None
    best_value = math.inf
    for cand in candidates:
        value = objective(cand[0], cand[1], targets, x, w)
        if value < best_value:
            best, best_value = cand, value
    return best


def lattice(low, high, step) -> np.ndarray:
    if not step > 0:
        raise ValueError("step must be > 0")
    n = int(math.floor((high - low) / step + 1e-9))
    return low + step * np.arange(n + 1)


def grid_oracle(group: CellGroup, bounds: FitBounds, step: float, weights=None) -> Tuple[float, float]:
    """
    Minimizer of the objective over the lattice {low + k * step} of the box.

    Every beta node is scanned. Along P0 the objective is a parabola, so for a
    given beta only the two P0 nodes around its vertex can hold the lattice
    minimum; both are evaluated. Ties go to the lowest p0, then the lowest beta.
    """
    targets = group.powers()
    x = regressors(group.distances())
    return grid_oracle_arrays(targets, x, bounds, step, weights)


def grid_oracle_arrays(targets, x, bounds: FitBounds, step: float, weights=None) -> Tuple[float, float]:
    """
    Lattice minimizer of the weighted objective. Every beta node is scanned;
    for each beta only the two P0 nodes around the parabola vertex are
    evaluated, which gives the same minimum as scanning all P0 nodes since
    the objective is convex in P0.
    """
    targets = np.asarray(targets, dtype=float)
    x = np.asarray(x, dtype=float)
    w = np.ones(targets.shape[0]) if weights is None else np.asarray(weights, dtype=float)
    p0_nodes = lattice(bounds.p0_low, bounds.p0_high, step)
    betas = lattice(bounds.beta_low, bounds.beta_high, step)

    # vertex of the parabola in P0 for every beta, as a fractional lattice index
    vertex = (np.sum(w * targets) + betas * np.sum(w * x)) / np.sum(w)
    k = np.clip(np.floor((vertex - bounds.p0_low) / step), 0, p0_nodes.shape[0] - 1).astype(int)
    k_up = np.minimum(k + 1, p0_nodes.shape[0] - 1)

    best = None
    for ks in (k, k_up):
        p0s = p0_nodes[ks]
        r = targets[None, :] - p0s[:, None] + betas[:, None] * x[None, :]
        values = np.sum(w[None, :] * r * r, axis=1)
        for j in range(betas.shape[0]):
            cand = (values[j], p0s[j], betas[j])
            if best is None or cand < best:
                best = cand
    return float(best[1]), float(best[2])


# -----------------------------------------------------------------------------
# fitting
# -----------------------------------------------------------------------------
def _fit(targets, distances, w, bounds: FitBounds, fit_kind) -> PathLossParams:
    if targets.shape[0] < 2:
        raise TooFewPoints("at least 2 points are required, got {}".format(targets.shape[0]))
    x = regressors(distances)
    try:
        p0, beta = solve_box_ls(targets, x, w, bounds)
        degenerate = False
    except SingularNormalMatrix:
        # equidistant points: beta unidentifiable, fit P0 alone at the mid exponent
        beta = bounds.beta_mid
        p0 = _edge_p0(beta, targets, x, w, bounds)
        degenerate = True
        logger.debug("degenerate geometry: beta fixed at {}".format(beta))
    return PathLossParams(p0_dbm=p0, beta=beta, fit_kind=fit_kind,
                          residual_rss=objective(p0, beta, targets, x, w), degenerate=degenerate)


def fit_mse(group: CellGroup, bounds: FitBounds) -> PathLossParams:
    """
    Uniform-noise fit: plain least squares on the box.
    """
    targets = group.powers()
    return _fit(targets, group.distances(), np.ones(targets.shape[0]), bounds, FIT_MSE)


def fit_mle(group: CellGroup, weights: NoiseWeights, bounds: FitBounds) -> PathLossParams:
    """
    Maximum-likelihood fit under independent Gaussian shadowing with per-point
    standard deviations: least squares weighted by 1 / sigma_i^2.
    """
    targets = group.powers()
    w = weights.resolve(targets.shape[0])
    return _fit(targets, group.distances(), w, bounds, FIT_MLE)


def fit_group(group: CellGroup, bounds: FitBounds, fit_kind: str = FIT_MSE,
              weights: Optional[NoiseWeights] = None) -> PathLossParams:
    if fit_kind == FIT_MSE:
        return fit_mse(group, bounds)
    elif fit_kind == FIT_MLE:
        if weights is None:
            raise ValueError("mle fit requires noise weights")
        return fit_mle(group, weights, bounds)
    else:
        raise ConfigError("Unknown fit kind: {}".format(fit_kind))
