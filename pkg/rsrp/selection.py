# encoding: utf-8
"""
Point selection around a target: the radius-R disc of measured points, its
partition by serving cell, and the two admission filters.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .data import CellId, DriveTestDataset, Measurement, SiteDatabase
from .exceptions import ConfigError, UnknownCell
from .geo import GeoPoint, great_circle_distance, great_circle_distances

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelectionConfig:
    radius_m: float = 50.0
    min_points_per_cell: int = 8
    min_dist_to_cell_m: float = 10.0

    def __post_init__(self):
        if not self.radius_m > 0:
            raise ConfigError("radius_m must be > 0, got {}".format(self.radius_m))
        if self.min_points_per_cell < 2:
            raise ConfigError("min_points_per_cell must be >= 2, got {}".format(self.min_points_per_cell))
        if self.min_dist_to_cell_m < 0:
            raise ConfigError("min_dist_to_cell_m must be >= 0, got {}".format(self.min_dist_to_cell_m))

    def replace(self, **kwargs) -> "SelectionConfig":
        values = {"radius_m": self.radius_m, "min_points_per_cell": self.min_points_per_cell,
                  "min_dist_to_cell_m": self.min_dist_to_cell_m}
        values.update(kwargs)
        return SelectionConfig(**values)


def build_selection_config(cfg) -> SelectionConfig:
    return SelectionConfig(
        radius_m=float(cfg.SELECTION.RADIUS_M),
        min_points_per_cell=int(cfg.SELECTION.MIN_POINTS_PER_CELL),
        min_dist_to_cell_m=float(cfg.SELECTION.MIN_DIST_TO_CELL_M),
    )


@dataclass(frozen=True)
class Neighborhood:
    target: GeoPoint
    radius_m: float
    members: Tuple[Measurement, ...]

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class CellGroup:
    cell_id: CellId
    points: Tuple[Tuple[Measurement, float], ...]

    def __len__(self):
        return len(self.points)

    @property
    def n_points(self):
        return len(self.points)

    def distances(self) -> np.ndarray:
        return np.array([d for _, d in self.points], dtype=float)

    def powers(self) -> np.ndarray:
        return np.array([m.rsrp_dbm for m, _ in self.points], dtype=float)

    def ids(self) -> List[int]:
        return [m.id for m, _ in self.points]


def select_neighborhood(target: GeoPoint, dataset: DriveTestDataset, radius_m: float,
                        exclude_id: Optional[int] = None) -> Neighborhood:
    """
    Measured points strictly inside the disc of radius radius_m around target.
    :param exclude_id: measurement id left out (leave-one-out); co-located
        samples with other ids are kept
    """
    if not radius_m > 0:
        raise ConfigError("radius_m must be > 0, got {}".format(radius_m))
    cols = dataset.arrays
    if cols.ids.shape[0] == 0:
        return Neighborhood(target, radius_m, ())

    dist = great_circle_distances(cols.lat, cols.lon, target)
    mask = (dist < radius_m) & ~np.isnan(cols.rsrp)
    if exclude_id is not None:
        mask &= cols.ids != exclude_id

    members = tuple(dataset.measurements[i] for i in np.flatnonzero(mask))
    return Neighborhood(target, radius_m, members)


def group_by_cell(nbhd: Neighborhood, sites: SiteDatabase) -> List[CellGroup]:
    """
    Partition the neighborhood by serving cell; each point carries its distance
    to the serving site. Groups are ordered by cell id, points keep time order.
    A point sitting exactly on its site has no defined path loss and is left
    out, so every carried distance is > 0.
    """
    buckets: Dict[CellId, List[Tuple[Measurement, float]]] = {}
    for m in nbhd.members:
        site = sites.get(m.serving_cell)
        if site is None:
            raise UnknownCell(m.serving_cell)
        d = great_circle_distance(m.pos, site.pos)
        if d <= 0.0:
            logger.debug("point {} lies on the site of cell {}, skipped".format(m.id, m.serving_cell))
            continue
        buckets.setdefault(m.serving_cell, []).append((m, d))

    return [CellGroup(cell_id, tuple(buckets[cell_id])) for cell_id in sorted(buckets)]


def apply_filters(groups: Iterable[CellGroup], config: SelectionConfig) -> List[CellGroup]:
    """
    1. drop points closer than min_dist_to_cell_m to their antenna
    2. drop groups left with fewer than min_points_per_cell points
    """
    survivors = []
    for group in groups:
        points = tuple((m, d) for m, d in group.points if d >= config.min_dist_to_cell_m)
        if len(points) < config.min_points_per_cell:
            logger.debug("cell {} dropped: {} of {} points left".format(group.cell_id, len(points), len(group)))
            continue
        survivors.append(CellGroup(group.cell_id, points))
    return survivors
