# encoding: utf-8
"""
Drive-test domain records.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from ..constants import RSRP_MIN_DBM, RSRP_MAX_DBM
from ..geo import GeoPoint

CellId = str


@dataclass(frozen=True)
class Measurement:
    id: int
    timestamp_ms: int
    pos: GeoPoint
    rsrp_dbm: Optional[float]
    serving_cell: CellId

    def __post_init__(self):
        if self.timestamp_ms < 0:
            raise ValueError("timestamp_ms must be >= 0")
        if self.rsrp_dbm is not None and not (RSRP_MIN_DBM <= self.rsrp_dbm <= RSRP_MAX_DBM):
            raise ValueError("rsrp {} dBm outside [{}, {}]".format(self.rsrp_dbm, RSRP_MIN_DBM, RSRP_MAX_DBM))

    @property
    def has_rsrp(self):
        return self.rsrp_dbm is not None


@dataclass(frozen=True)
class CellSite:
    cell_id: CellId
    pos: GeoPoint


@dataclass(frozen=True)
class DriveTestDataset:
    """
    Time-ordered measurements. `rejected` lists (line_no, error) for rows
    a non-strict load refused; it is empty for strict loads.
    """
    measurements: Tuple[Measurement, ...]
    source_path: str = ""
    rejected: Tuple[Tuple[int, Exception], ...] = field(default=(), compare=False)

    def __post_init__(self):
        ids = set()
        last_ts = None
        for m in self.measurements:
            if m.id in ids:
                raise ValueError("duplicate measurement id {}".format(m.id))
            ids.add(m.id)
            if last_ts is not None and m.timestamp_ms < last_ts:
                raise ValueError("measurements must be sorted by timestamp")
            last_ts = m.timestamp_ms

    def __len__(self):
        return len(self.measurements)

    def __iter__(self):
        return iter(self.measurements)

    def measured(self) -> List[Measurement]:
        return [m for m in self.measurements if m.rsrp_dbm is not None]

    def for_cell(self, cell_id: CellId) -> "DriveTestDataset":
        return DriveTestDataset(tuple(m for m in self.measurements if m.serving_cell == cell_id),
                                self.source_path)

    @cached_property
    def arrays(self) -> "MeasurementArrays":
        return MeasurementArrays.from_measurements(self.measurements)


@dataclass(frozen=True)
class MeasurementArrays:
    """
    Column view of a dataset used by the vectorized neighborhood scan.
    rsrp is NaN where no measurement was recorded.
    """
    ids: np.ndarray
    lat: np.ndarray
    lon: np.ndarray
    rsrp: np.ndarray

    @classmethod
    def from_measurements(cls, measurements: Iterable[Measurement]):
        ms = list(measurements)
        return cls(
            ids=np.array([m.id for m in ms], dtype=np.int64),
            lat=np.array([m.pos.lat_deg for m in ms], dtype=float),
            lon=np.array([m.pos.lon_deg for m in ms], dtype=float),
            rsrp=np.array([np.nan if m.rsrp_dbm is None else m.rsrp_dbm for m in ms], dtype=float),
        )


SiteDatabase = Mapping[CellId, CellSite]


def as_site_index(sites: Union[SiteDatabase, Iterable[CellSite]]) -> Dict[CellId, CellSite]:
    if isinstance(sites, Mapping):
        return dict(sites)
    return {site.cell_id: site for site in sites}
