# encoding: utf-8
"""
Leave-one-out evaluation and parameter sweeps.

Every measured point is predicted from all other points for its own serving
cell. Points whose cell does not survive the filters are unpredictable: they
count against coverage and never enter the error statistics.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from ..constants import SCATTER_COLUMNS, SWEEP_COLUMNS
from ..data import CellId, DriveTestDataset, SiteDatabase
from ..exceptions import ConfigError, TooFewPoints
from ..pathloss import FIT_MSE, FitBounds
from ..predict import NoiseModel, predict_for_cell
from ..selection import SelectionConfig
from ..shadowing import ShadowingIndex
from .statistics import BoxStats, EvalSummary, error_vs_sigma, summarize

logger = logging.getLogger(__name__)

EXPERIMENTS = ("full", "points", "distance")


@dataclass(frozen=True)
class EvalRecord:
    point_id: int
    actual_rsrp_dbm: float
    predicted_rsrp_dbm: float
    error_db: float
    cell_id: CellId
    local_sigma_db: Optional[float] = None


@dataclass(frozen=True)
class LeaveOneOutResult:
    records: Tuple[EvalRecord, ...]
    n_measured: int

    @property
    def n_unpredictable(self):
        return self.n_measured - len(self.records)

    @property
    def coverage(self):
        return len(self.records) / self.n_measured if self.n_measured > 0 else 0.0

    def errors(self) -> np.ndarray:
        return np.array([r.error_db for r in self.records], dtype=float)

    def summary(self) -> EvalSummary:
        return summarize(self.errors(), self.n_measured)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([(r.point_id, r.cell_id, r.actual_rsrp_dbm, r.predicted_rsrp_dbm, r.error_db,
                              r.local_sigma_db) for r in self.records],
                            columns=["point_id", "cell_id", "actual_rsrp_dbm", "predicted_rsrp_dbm", "error_db",
                                     "local_sigma_db"])


def _loo_chunk(points, dataset, sites, config, bounds, fit_kind, noise, shadowing_index) -> List[EvalRecord]:
    records = []
    for m in points:
        pred = predict_for_cell(m.pos, m.serving_cell, dataset, sites, config, bounds, fit_kind, noise,
                                exclude_id=m.id)
        if pred is None:
            continue
        local_sigma = None
        if shadowing_index is not None:
            local_sigma = shadowing_index.local_sigma(m.pos, config.radius_m, exclude_id=m.id)
        records.append(EvalRecord(
            point_id=m.id,
            actual_rsrp_dbm=m.rsrp_dbm,
            predicted_rsrp_dbm=pred.predicted_rsrp_dbm,
            error_db=pred.predicted_rsrp_dbm - m.rsrp_dbm,
            cell_id=m.serving_cell,
            local_sigma_db=local_sigma,
        ))
    return records


def _chunks(items, n):
    if n <= 1:
        return [items]
    size = int(np.ceil(len(items) / n))
    return [items[i:i + size] for i in range(0, len(items), size)]


def leave_one_out(dataset: DriveTestDataset, sites: SiteDatabase, config: SelectionConfig, bounds: FitBounds,
                  fit_kind: str = FIT_MSE, noise: Optional[NoiseModel] = None,
                  shadowing_index: Optional[ShadowingIndex] = None, n_jobs: int = 1,
                  progress: bool = False) -> LeaveOneOutResult:
    """
    :param shadowing_index: when given, each record carries the local sigma
        from the difference pairs inside its disc (pairs touching the held-out
        point excluded)
    :param n_jobs: joblib workers; records are returned ordered by point id
    """
    measured = dataset.measured()
    if n_jobs > 1 and len(measured) > 1:
        parts = Parallel(n_jobs=n_jobs)(
            delayed(_loo_chunk)(chunk, dataset, sites, config, bounds, fit_kind, noise, shadowing_index)
            for chunk in _chunks(measured, n_jobs)
        )
        records = list(itertools.chain.from_iterable(parts))
    else:
        iterator = tqdm(measured, desc="leave-one-out", leave=False) if progress else measured
        records = _loo_chunk(iterator, dataset, sites, config, bounds, fit_kind, noise, shadowing_index)

    records.sort(key=lambda r: r.point_id)
    logger.debug("leave-one-out R={} N>={} dmin={}: {}/{} points predicted".format(
        config.radius_m, config.min_points_per_cell, config.min_dist_to_cell_m, len(records), len(measured)))
    return LeaveOneOutResult(records=tuple(records), n_measured=len(measured))


# -----------------------------------------------------------------------------
# sweeps
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class SweepRow:
    radius_m: float
    min_points: int
    min_dist_m: float
    summary: EvalSummary
    # (point_id, local sigma, |error|); empty unless the sweep had a ShadowingIndex
    scatter: Tuple[Tuple[int, float, float], ...] = ()
    error_sigma_corr: Optional[float] = None

    @property
    def abs_box(self) -> Optional[BoxStats]:
        return self.summary.abs_box


@dataclass(frozen=True)
class SweepResult:
    radii: Tuple[float, ...]
    min_points: Tuple[int, ...]
    min_dists: Tuple[float, ...]
    rows: Tuple[SweepRow, ...]

    def row(self, radius_m, min_points, min_dist_m) -> Optional[SweepRow]:
        for r in self.rows:
            if r.radius_m == radius_m and r.min_points == min_points and r.min_dist_m == min_dist_m:
                return r
        return None

    def to_frame(self) -> pd.DataFrame:
        """
        One row per grid cell; box columns summarize |error| and are empty when
        the configuration produced no record.
        """
        data = []
        for r in self.rows:
            s = r.summary
            box = s.abs_box.as_row() if s.abs_box is not None else [np.nan] * 5
            mean_abs = s.mean_abs_err_db if s.mean_abs_err_db is not None else np.nan
            data.append([r.radius_m, r.min_points, r.min_dist_m, s.n_records, s.coverage, mean_abs] + box)
        return pd.DataFrame(data, columns=list(SWEEP_COLUMNS))

    def signed_frame(self) -> pd.DataFrame:
        data = []
        for r in self.rows:
            s = r.summary
            box = s.signed_box.as_row() if s.signed_box is not None else [np.nan] * 5
            mean = s.signed_box.mean if s.signed_box is not None else np.nan
            rmse = s.rmse_db if s.rmse_db is not None else np.nan
            data.append([r.radius_m, r.min_points, r.min_dist_m, s.n_records, mean, rmse] + box)
        return pd.DataFrame(data, columns=["radius_m", "min_points", "min_dist_m", "n_records", "mean_err_db",
                                           "rmse_db", "min", "q1", "median", "q3", "max"])

    def scatter_frame(self) -> pd.DataFrame:
        """
        Local sigma against |error| for every grid cell, long format.
        """
        data = [[r.radius_m, r.min_points, r.min_dist_m] + list(pair) for r in self.rows for pair in r.scatter]
        return pd.DataFrame(data, columns=["radius_m", "min_points", "min_dist_m"] + list(SCATTER_COLUMNS))

    def correlation_frame(self) -> pd.DataFrame:
        data = [[r.radius_m, r.min_points, r.min_dist_m, len(r.scatter),
                 r.error_sigma_corr if r.error_sigma_corr is not None else np.nan] for r in self.rows]
        return pd.DataFrame(data, columns=["radius_m", "min_points", "min_dist_m", "n_pairs", "error_sigma_corr"])

    def mean_error_grid(self, column="min_points") -> pd.DataFrame:
        """
        Pivot of mean |error| with radius as rows and `column` (min_points or
        min_dist_m) as columns; the other axis is averaged over when it has
        several values.
        """
        frame = self.to_frame()
        grid = frame.pivot_table(index="radius_m", columns=column, values="mean_abs_err_db", aggfunc="mean")
        return grid.sort_index().sort_index(axis=1)


def _evaluate_combination(dataset, sites, radius, min_points, min_dist, bounds, fit_kind, noise,
                          shadowing_index=None) -> SweepRow:
    config = SelectionConfig(radius_m=float(radius), min_points_per_cell=int(min_points),
                             min_dist_to_cell_m=float(min_dist))
    if noise is not None:
        noise = noise.with_radius(config.radius_m)
    result = leave_one_out(dataset, sites, config, bounds, fit_kind, noise, shadowing_index=shadowing_index)
    scatter, corr = (), None
    if shadowing_index is not None:
        try:
            analysis = error_vs_sigma(result.records)
            scatter = analysis.pairs
            corr = None if analysis.undefined else analysis.correlation
        except TooFewPoints:
            scatter = tuple((r.point_id, float(r.local_sigma_db), abs(float(r.error_db)))
                            for r in result.records if r.local_sigma_db is not None)
    return SweepRow(radius_m=config.radius_m, min_points=config.min_points_per_cell,
                    min_dist_m=config.min_dist_to_cell_m, summary=result.summary(), scatter=scatter,
                    error_sigma_corr=corr)


def sweep(dataset: DriveTestDataset, sites: SiteDatabase, radius_list: Sequence[float],
          min_points_list: Sequence[int], min_dist_list: Sequence[float], bounds: FitBounds,
          fit_kind: str = FIT_MSE, noise: Optional[NoiseModel] = None, n_jobs: int = 1,
          progress: bool = False, shadowing_index: Optional[ShadowingIndex] = None) -> SweepResult:
    """
    Leave-one-out over the Cartesian product of the three axes; rows are
    radius-major, then min points, then min distance.
    :param shadowing_index: when given, every row also carries the local sigma
        against |error| scatter at its own radius
    """
    if len(radius_list) == 0 or len(min_points_list) == 0 or len(min_dist_list) == 0:
        raise ConfigError("sweep axes must be non-empty")
    grid = list(itertools.product(radius_list, min_points_list, min_dist_list))
    if n_jobs > 1:
        rows = Parallel(n_jobs=n_jobs)(
            delayed(_evaluate_combination)(dataset, sites, r, n, d, bounds, fit_kind, noise, shadowing_index)
            for r, n, d in grid
        )
    else:
        iterator = tqdm(grid, desc="sweep") if progress else grid
        rows = [_evaluate_combination(dataset, sites, r, n, d, bounds, fit_kind, noise, shadowing_index)
                for r, n, d in iterator]

    return SweepResult(radii=tuple(float(r) for r in radius_list), min_points=tuple(int(n) for n in min_points_list),
                       min_dists=tuple(float(d) for d in min_dist_list), rows=tuple(rows))


def run_experiment(kind: str, dataset: DriveTestDataset, sites: SiteDatabase, radius_list: Sequence[float],
                   min_points_list: Sequence[int], min_dist_list: Sequence[float], bounds: FitBounds,
                   fit_kind: str = FIT_MSE, fixed_min_points: int = 8, fixed_min_dist: float = 10.0,
                   noise: Optional[NoiseModel] = None, n_jobs: int = 1, progress: bool = False,
                   shadowing_index: Optional[ShadowingIndex] = None) -> SweepResult:
    """
    points   : min distance fixed, radius x min points
    distance : min points fixed, radius x min distance
    full     : all three axes
    """
    if kind == "points":
        min_dist_list = [fixed_min_dist]
    elif kind == "distance":
        min_points_list = [fixed_min_points]
    elif kind != "full":
        raise ConfigError("Unknown experiment: {}".format(kind))
    return sweep(dataset, sites, radius_list, min_points_list, min_dist_list, bounds, fit_kind, noise, n_jobs,
                 progress, shadowing_index=shadowing_index)
