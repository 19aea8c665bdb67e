# encoding: utf-8
"""
Blind estimation of the shadowing standard deviation.

Two consecutive measurements on the same cell, taken a few meters apart,
share P0, beta and (almost) the distance term, so their difference is the
difference of two independent shadowing draws with standard deviation
sqrt(2) * sigma. No site locations are needed.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .data import DriveTestDataset
from .exceptions import ConfigError, EmptyDiffs, InvalidAlpha, TooFewSamples
from .geo import GeoPoint, great_circle_distance, great_circle_distances

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiffSample:
    value_db: float
    pair: Tuple[int, int]
    displacement_m: float


@dataclass(frozen=True)
class ShadowingEstimate:
    sigma_db: float
    n_pairs: int
    ci_low_db: Optional[float] = None
    ci_high_db: Optional[float] = None
    confidence: Optional[float] = None

    @property
    def has_interval(self):
        return self.ci_low_db is not None


@dataclass(frozen=True)
class NoiseOptions:
    l_max_m: float = 15.0
    alpha: float = 0.05
    non_overlapping: bool = False
    min_sigma_db: float = 0.5
    min_pairs: int = 5

    def __post_init__(self):
        if not self.l_max_m > 0:
            raise ConfigError("l_max_m must be > 0, got {}".format(self.l_max_m))
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1), got {}".format(self.alpha))
        if not self.min_sigma_db > 0:
            raise ConfigError("min_sigma_db must be > 0, got {}".format(self.min_sigma_db))
        if self.min_pairs < 1:
            raise ConfigError("min_pairs must be >= 1, got {}".format(self.min_pairs))


def build_noise_options(cfg) -> NoiseOptions:
    return NoiseOptions(
        l_max_m=float(cfg.SHADOWING.L_MAX_M),
        alpha=float(cfg.SHADOWING.ALPHA),
        non_overlapping=bool(cfg.SHADOWING.NON_OVERLAPPING_PAIRS),
        min_sigma_db=float(cfg.SHADOWING.MIN_SIGMA_DB),
        min_pairs=int(cfg.SHADOWING.MIN_PAIRS),
    )


def consecutive_differences(dataset: DriveTestDataset, radius_m: Optional[float] = None, l_max_m: float = 15.0,
                            center: Optional[GeoPoint] = None, non_overlapping: bool = False) -> List[DiffSample]:
    """
    P^d = P_{i+1} - P_i for temporally adjacent measurements that both carry
    RSRP, share the serving cell and lie within l_max_m of each other.

    :param radius_m: with `center`, keep only pairs whose two endpoints lie
        strictly inside the disc
    :param non_overlapping: use disjoint pairs (1,2),(3,4),... along the chain
    """
    ms = dataset.measurements
    diffs = []
    i = 0
    while i + 1 < len(ms):
        a, b = ms[i], ms[i + 1]
        admitted = False
        if a.rsrp_dbm is not None and b.rsrp_dbm is not None and a.serving_cell == b.serving_cell:
            displacement = great_circle_distance(a.pos, b.pos)
            inside = True
            if center is not None and radius_m is not None:
                inside = great_circle_distance(a.pos, center) < radius_m and great_circle_distance(b.pos, center) < radius_m
            if displacement <= l_max_m and inside:
                diffs.append(DiffSample(b.rsrp_dbm - a.rsrp_dbm, (a.id, b.id), displacement))
                admitted = True
        i += 2 if (admitted and non_overlapping) else 1
    return diffs


def _diff_values(diffs) -> np.ndarray:
    if len(diffs) > 0 and isinstance(diffs[0], DiffSample):
        return np.array([d.value_db for d in diffs], dtype=float)
    return np.asarray(diffs, dtype=float)


def diff_std(diffs) -> float:
    """
    Known-zero-mean standard deviation of the differences, divisor N.
    """
    values = _diff_values(diffs)
    if values.shape[0] == 0:
        raise EmptyDiffs("no difference samples")
    return math.sqrt(float(np.mean(values * values)))


def estimate_sigma(diffs) -> float:
    """
    sigma = sqrt( sum (P^d)^2 / (2N) )
    :param diffs: DiffSamples or raw difference values (dB)
    """
    return diff_std(diffs) / math.sqrt(2.0)


def sigma_confidence_interval(sigma_pd: float, n: int, alpha: float = 0.05) -> Tuple[float, float]:
    """
    100(1 - alpha)% interval for sigma from the std of the differences:
    ( sqrt((n-1) s^2 / (2b)), sqrt((n-1) s^2 / (2a)) ) with a, b the lower and
    upper alpha/2 chi-square quantiles at n-1 degrees of freedom.

    For a large alpha at few degrees of freedom both quantiles can fall on
    the same side of n-1; the interval is then widened to reach the point
    estimate sigma_pd / sqrt(2), so it always contains it.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha("alpha must lie in (0, 1), got {}".format(alpha))
    if n < 2:
        raise TooFewSamples("at least 2 samples are required, got {}".format(n))
    dof = n - 1
    a = stats.chi2.ppf(alpha / 2.0, dof)
    b = stats.chi2.ppf(1.0 - alpha / 2.0, dof)
    scaled = dof * sigma_pd * sigma_pd / 2.0
    low, high = math.sqrt(scaled / b), math.sqrt(scaled / a)
    point = sigma_pd / math.sqrt(2.0)
    if not low <= point <= high:
        logger.debug("alpha {} at {} dof does not bracket the estimate; interval widened".format(alpha, dof))
    return min(low, point), max(high, point)


def estimate_shadowing(diffs, alpha: float = 0.05) -> ShadowingEstimate:
    """
    Point estimate plus, when at least two pairs exist, its confidence interval.
    """
    values = _diff_values(diffs)
    s = diff_std(values)
    n = values.shape[0]
    if n < 2:
        return ShadowingEstimate(sigma_db=s / math.sqrt(2.0), n_pairs=n)
    low, high = sigma_confidence_interval(s, n, alpha)
    return ShadowingEstimate(sigma_db=s / math.sqrt(2.0), n_pairs=n, ci_low_db=low, ci_high_db=high,
                             confidence=1.0 - alpha)


class ShadowingIndex(object):
    """
    All admitted difference pairs of a dataset with their endpoint coordinates,
    queried for the local sigma around a point.
    """

    def __init__(self, dataset: DriveTestDataset, l_max_m: float = 15.0, non_overlapping: bool = False):
        self.diffs = consecutive_differences(dataset, l_max_m=l_max_m, non_overlapping=non_overlapping)
        by_id = {m.id: m for m in dataset.measurements}
        self.values = np.array([d.value_db for d in self.diffs], dtype=float)
        self.first_ids = np.array([d.pair[0] for d in self.diffs], dtype=np.int64)
        self.second_ids = np.array([d.pair[1] for d in self.diffs], dtype=np.int64)
        self.lat = np.array([[by_id[i].pos.lat_deg for i in d.pair] for d in self.diffs], dtype=float).reshape(-1, 2)
        self.lon = np.array([[by_id[i].pos.lon_deg for i in d.pair] for d in self.diffs], dtype=float).reshape(-1, 2)

    def __len__(self):
        return len(self.diffs)

    def local_values(self, center: GeoPoint, radius_m: float, exclude_id: Optional[int] = None) -> np.ndarray:
        if len(self.diffs) == 0:
            return np.zeros(0)
        inside_first = great_circle_distances(self.lat[:, 0], self.lon[:, 0], center) < radius_m
        inside_second = great_circle_distances(self.lat[:, 1], self.lon[:, 1], center) < radius_m
        mask = inside_first & inside_second
        if exclude_id is not None:
            mask &= (self.first_ids != exclude_id) & (self.second_ids != exclude_id)
        return self.values[mask]

    def local_sigma(self, center: GeoPoint, radius_m: float, exclude_id: Optional[int] = None,
                    min_pairs: int = 1) -> Optional[float]:
        values = self.local_values(center, radius_m, exclude_id)
        if values.shape[0] < max(1, min_pairs):
            return None
        return estimate_sigma(values)

    def global_sigma(self) -> Optional[float]:
        if len(self.diffs) == 0:
            return None
        return estimate_sigma(self.values)


def local_noise_sigmas(index: ShadowingIndex, points: Sequence, radius_m: float, options: NoiseOptions,
                       exclude_id: Optional[int] = None) -> Tuple[float, ...]:
    """
    Per-measurement sigma_i for a locally weighted fit: the blind estimate in a
    disc around each point, floored at min_sigma_db, falling back to the
    dataset-wide estimate when too few pairs lie in the disc.
    """
    fallback = index.global_sigma()
    if fallback is None:
        fallback = options.min_sigma_db
    sigmas = []
    for m in points:
        s = index.local_sigma(m.pos, radius_m, exclude_id=exclude_id, min_pairs=options.min_pairs)
        sigmas.append(max(options.min_sigma_db, fallback if s is None else s))
    return tuple(sigmas)
