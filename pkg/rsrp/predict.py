# encoding: utf-8
"""
End-to-end prediction at a target point:
neighborhood -> per-cell groups -> filters -> per-cell fit -> RSRP.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .constants import REFERENCE_DISTANCE_M
from .data import CellId, DriveTestDataset, SiteDatabase
from .exceptions import ConfigError, UnknownCell
from .geo import GeoPoint, great_circle_distance, offset
from .pathloss import FIT_MLE, FIT_MSE, FitBounds, NoiseWeights, PathLossParams, fit_group, predict_rsrp
from .selection import CellGroup, SelectionConfig, apply_filters, group_by_cell, select_neighborhood
from .shadowing import NoiseOptions, ShadowingIndex, local_noise_sigmas

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CellPrediction:
    cell_id: CellId
    params: PathLossParams
    predicted_rsrp_dbm: float
    n_points: int
    distance_m: float
    distance_clamped: bool = False


@dataclass(frozen=True)
class PredictionResult:
    target: GeoPoint
    per_cell: Tuple[CellPrediction, ...] = ()
    headline_cell: Optional[CellId] = None
    headline_rsrp_dbm: Optional[float] = None

    @property
    def is_empty(self):
        return self.headline_cell is None

    def for_cell(self, cell_id: CellId) -> Optional[CellPrediction]:
        for entry in self.per_cell:
            if entry.cell_id == cell_id:
                return entry
        return None

    def to_record(self) -> dict:
        """
        JSON-serializable record.
        """
        return {
            "target": {"lat": self.target.lat_deg, "lon": self.target.lon_deg},
            "headline_cell": self.headline_cell,
            "headline_rsrp_dbm": self.headline_rsrp_dbm,
            "cells": [{
                "cell_id": c.cell_id,
                "p0_dbm": c.params.p0_dbm,
                "beta": c.params.beta,
                "degenerate": c.params.degenerate,
                "n_points": c.n_points,
                "predicted_rsrp_dbm": c.predicted_rsrp_dbm,
            } for c in self.per_cell],
        }


class NoiseModel(object):
    """
    Supplies MLE weights for a group. `uniform` uses one configured sigma;
    `local` uses blind shadowing estimates around each measurement.
    """

    def __init__(self, mode="uniform", sigma_db=6.0, index: Optional[ShadowingIndex] = None,
                 options: Optional[NoiseOptions] = None, radius_m: float = 50.0):
        if mode not in ("uniform", "local"):
            raise ConfigError("Unknown weight mode: {}".format(mode))
        if mode == "local" and index is None:
            raise ConfigError("local weights need a shadowing index")
        self.mode = mode
        self.sigma_db = sigma_db
        self.index = index
        self.options = options if options is not None else NoiseOptions()
        self.radius_m = radius_m

    def with_radius(self, radius_m: float) -> "NoiseModel":
        return NoiseModel(self.mode, self.sigma_db, self.index, self.options, radius_m)

    def weights_for(self, group: CellGroup, exclude_id: Optional[int] = None) -> NoiseWeights:
        if self.mode == "uniform":
            return NoiseWeights(float(self.sigma_db))
        points = [m for m, _ in group.points]
        return NoiseWeights(local_noise_sigmas(self.index, points, self.radius_m, self.options, exclude_id))


def build_noise_model(cfg, dataset: DriveTestDataset, options: NoiseOptions) -> Optional[NoiseModel]:
    if cfg.FIT.KIND != FIT_MLE:
        return None
    mode = cfg.FIT.WEIGHT_MODE
    index = ShadowingIndex(dataset, options.l_max_m, options.non_overlapping) if mode == "local" else None
    return NoiseModel(mode=mode, sigma_db=float(cfg.FIT.SIGMA_DB), index=index, options=options,
                      radius_m=float(cfg.SELECTION.RADIUS_M))


def _resolve_noise(fit_kind, noise: Optional[NoiseModel]) -> Optional[NoiseModel]:
    if fit_kind == FIT_MLE and noise is None:
        return NoiseModel()
    return noise


def _predict_group(target: GeoPoint, group: CellGroup, sites: SiteDatabase, bounds: FitBounds, fit_kind,
                   noise: Optional[NoiseModel], exclude_id: Optional[int]) -> CellPrediction:
    weights = noise.weights_for(group, exclude_id) if fit_kind == FIT_MLE else None
    params = fit_group(group, bounds, fit_kind, weights)
    distance = great_circle_distance(target, sites[group.cell_id].pos)
    clamped = distance < REFERENCE_DISTANCE_M
    if clamped:
        logger.debug("target within {} m of cell {}; distance clamped".format(REFERENCE_DISTANCE_M, group.cell_id))
    return CellPrediction(
        cell_id=group.cell_id,
        params=params,
        predicted_rsrp_dbm=predict_rsrp(params, max(distance, REFERENCE_DISTANCE_M)),
        n_points=group.n_points,
        distance_m=distance,
        distance_clamped=clamped,
    )


def _surviving_groups(target, dataset, sites, config: SelectionConfig, exclude_id) -> List[CellGroup]:
    nbhd = select_neighborhood(target, dataset, config.radius_m, exclude_id=exclude_id)
    return apply_filters(group_by_cell(nbhd, sites), config)


def predict_at(target: GeoPoint, dataset: DriveTestDataset, sites: SiteDatabase, config: SelectionConfig,
               bounds: FitBounds, fit_kind: str = FIT_MSE, noise: Optional[NoiseModel] = None,
               exclude_id: Optional[int] = None) -> PredictionResult:
    """
    Per-cell predictions at the target; the headline is the strongest cell,
    ties broken by the smallest cell id.
    """
    noise = _resolve_noise(fit_kind, noise)
    groups = _surviving_groups(target, dataset, sites, config, exclude_id)
    per_cell = tuple(_predict_group(target, g, sites, bounds, fit_kind, noise, exclude_id) for g in groups)
    if len(per_cell) == 0:
        return PredictionResult(target=target)

    headline = min(per_cell, key=lambda c: (-c.predicted_rsrp_dbm, c.cell_id))
    return PredictionResult(target=target, per_cell=per_cell, headline_cell=headline.cell_id,
                            headline_rsrp_dbm=headline.predicted_rsrp_dbm)


def predict_for_cell(target: GeoPoint, cell_id: CellId, dataset: DriveTestDataset, sites: SiteDatabase,
                     config: SelectionConfig, bounds: FitBounds, fit_kind: str = FIT_MSE,
                     noise: Optional[NoiseModel] = None,
                     exclude_id: Optional[int] = None) -> Optional[CellPrediction]:
    """
    Same pipeline restricted to one cell's group; None when the group does not
    survive the filters.
    """
    if cell_id not in sites:
        raise UnknownCell(cell_id)
    noise = _resolve_noise(fit_kind, noise)
    nbhd = select_neighborhood(target, dataset, config.radius_m, exclude_id=exclude_id)
    groups = [g for g in group_by_cell(nbhd, sites) if g.cell_id == cell_id]
    groups = apply_filters(groups, config)
    if len(groups) == 0:
        return None
    return _predict_group(target, groups[0], sites, bounds, fit_kind, noise, exclude_id)


def predict_many(targets: Iterable[GeoPoint], dataset: DriveTestDataset, sites: SiteDatabase,
                 config: SelectionConfig, bounds: FitBounds, fit_kind: str = FIT_MSE,
                 noise: Optional[NoiseModel] = None) -> List[PredictionResult]:
    return [predict_at(t, dataset, sites, config, bounds, fit_kind, noise) for t in targets]


def grid_targets(south_west: GeoPoint, north_east: GeoPoint, spacing_m: float) -> List[GeoPoint]:
    """
    Nodes of a regular grid covering the bounding box, row by row from the
    south-west corner, spaced spacing_m apart along both axes.
    """
    if not spacing_m > 0:
        raise ValueError("spacing_m must be > 0")
    height = great_circle_distance(south_west, GeoPoint(north_east.lat_deg, south_west.lon_deg))
    mid_lat = 0.5 * (south_west.lat_deg + north_east.lat_deg)
    width = great_circle_distance(GeoPoint(mid_lat, south_west.lon_deg), GeoPoint(mid_lat, north_east.lon_deg))
    n_rows = int(math.floor(height / spacing_m)) + 1
    n_cols = int(math.floor(width / spacing_m)) + 1

    nodes = []
    for r in range(n_rows):
        for c in range(n_cols):
            p = offset(south_west, r * spacing_m, c * spacing_m)
            nodes.append(GeoPoint(min(p.lat_deg, north_east.lat_deg), min(p.lon_deg, north_east.lon_deg)))
    return nodes


def predict_grid(south_west: GeoPoint, north_east: GeoPoint, spacing_m: float, dataset: DriveTestDataset,
                 sites: SiteDatabase, config: SelectionConfig, bounds: FitBounds, fit_kind: str = FIT_MSE,
                 noise: Optional[NoiseModel] = None) -> List[PredictionResult]:
    return predict_many(grid_targets(south_west, north_east, spacing_m), dataset, sites, config, bounds,
                        fit_kind, noise)
