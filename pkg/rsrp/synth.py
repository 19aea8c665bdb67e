# encoding: utf-8
"""
Synthetic drive tests with known ground truth.

Samples are placed along a polyline route at constant speed. Each sample is
served by the cell with the strongest true mean RSRP and its RSRP is

    P0 - 10 beta log10(d) + sigma * z

with z standard normal. Normals come from numpy's `default_rng(seed)`, i.e.
the PCG64 bit generator with the ziggurat transform of
`Generator.standard_normal`; the optional missing-RSRP mask is drawn from the
independent stream `default_rng([seed, 1])`, so changing the mask never
changes the noise.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .constants import GROUND_TRUTH_COLUMNS, REFERENCE_DISTANCE_M, RSRP_MAX_DBM, RSRP_MIN_DBM
from .data import CellId, CellSite, DriveTestDataset, Measurement, write_frame
from .exceptions import ConfigError, RouteTooShort
from .geo import GeoPoint, great_circle_distance, interpolate

logger = logging.getLogger(__name__)

MAX_SPEED_KMH = 40.0


@dataclass(frozen=True)
class SynthCell:
    cell_id: CellId
    pos: GeoPoint
    p0_dbm: float
    beta: float

    def mean_rsrp(self, distance_m: float, p0_offset_db=0.0, beta_offset=0.0) -> float:
        d = max(distance_m, REFERENCE_DISTANCE_M)
        return (self.p0_dbm + p0_offset_db) - 10.0 * (self.beta + beta_offset) * math.log10(d)


@dataclass(frozen=True)
class SynthZone:
    """
    Lat/lon box with its own channel: shadowing sigma (None keeps the scene
    default) and offsets added to every cell's P0 and beta.
    """
    south_west: GeoPoint
    north_east: GeoPoint
    sigma_db: Optional[float] = None
    p0_offset_db: float = 0.0
    beta_offset: float = 0.0

    def contains(self, p: GeoPoint) -> bool:
        return (self.south_west.lat_deg <= p.lat_deg <= self.north_east.lat_deg
                and self.south_west.lon_deg <= p.lon_deg <= self.north_east.lon_deg)


@dataclass(frozen=True)
class SynthConfig:
    cells: Tuple[SynthCell, ...]
    route: Tuple[GeoPoint, ...]
    speed_kmh: float = 18.0
    sample_interval_s: float = 1.0
    sigma_db: float = 0.0
    seed: int = 0
    zones: Tuple[SynthZone, ...] = ()
    missing_fraction: float = 0.0
    start_timestamp_ms: int = 0

    def __post_init__(self):
        if len(self.cells) == 0:
            raise ConfigError("synthetic scene needs at least one cell")
        ids = [c.cell_id for c in self.cells]
        if len(set(ids)) != len(ids):
            raise ConfigError("synthetic cell ids must be unique")
        for c in self.cells:
            if not (math.isfinite(c.p0_dbm) and math.isfinite(c.beta)):
                raise ConfigError("cell {} has non-finite parameters".format(c.cell_id))
        if not 0.0 < self.speed_kmh <= MAX_SPEED_KMH:
            raise ConfigError("speed_kmh must lie in (0, {}]".format(MAX_SPEED_KMH))
        if not self.sample_interval_s > 0:
            raise ConfigError("sample_interval_s must be > 0")
        if not (math.isfinite(self.sigma_db) and self.sigma_db >= 0):
            raise ConfigError("sigma_db must be >= 0")
        for z in self.zones:
            if z.sigma_db is not None and not z.sigma_db >= 0:
                raise ConfigError("zone sigma_db must be >= 0")
        if not 0.0 <= self.missing_fraction < 1.0:
            raise ConfigError("missing_fraction must lie in [0, 1)")
        if len(self.route) < 2:
            raise RouteTooShort("route needs at least 2 vertices")

    @property
    def spacing_m(self) -> float:
        return self.speed_kmh / 3.6 * self.sample_interval_s

    def zone_at(self, p: GeoPoint) -> Optional[SynthZone]:
        for z in self.zones:
            if z.contains(p):
                return z
        return None


@dataclass(frozen=True)
class GroundTruth:
    point_ids: Tuple[int, ...]
    true_mean_dbm: Tuple[float, ...]
    noise_db: Tuple[float, ...]
    true_dist_m: Tuple[float, ...]
    serving_cell: Tuple[CellId, ...]
    sigma_db: Tuple[float, ...]

    def __len__(self):
        return len(self.point_ids)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "point_id": list(self.point_ids),
            "true_mean_dbm": list(self.true_mean_dbm),
            "noise_db": list(self.noise_db),
            "true_dist_m": list(self.true_dist_m),
            "serving_cell": list(self.serving_cell),
        }, columns=list(GROUND_TRUTH_COLUMNS))


def build_synth_config(cfg) -> SynthConfig:
    """
    SYNTH.CELLS rows are [cell_id, lat, lon, p0_dbm, beta], SYNTH.ROUTE rows
    [lat, lon] and SYNTH.ZONES rows
    [sw_lat, sw_lon, ne_lat, ne_lon, sigma_db, p0_offset_db, beta_offset].
    """
    s = cfg.SYNTH
    try:
        cells = tuple(SynthCell(str(c[0]), GeoPoint(float(c[1]), float(c[2])), float(c[3]), float(c[4]))
                      for c in s.CELLS)
        route = tuple(GeoPoint(float(p[0]), float(p[1])) for p in s.ROUTE)
        zones = tuple(SynthZone(GeoPoint(float(z[0]), float(z[1])), GeoPoint(float(z[2]), float(z[3])),
                                None if z[4] is None else float(z[4]), float(z[5]), float(z[6]))
                      for z in s.ZONES)
    except (IndexError, TypeError, ValueError) as e:
        raise ConfigError("invalid SYNTH scene: {}".format(e))
    return SynthConfig(cells=cells, route=route, speed_kmh=float(s.SPEED_KMH),
                       sample_interval_s=float(s.SAMPLE_INTERVAL_S), sigma_db=float(s.SIGMA_DB),
                       seed=int(s.SEED), zones=zones, missing_fraction=float(s.MISSING_FRACTION),
                       start_timestamp_ms=int(s.START_TIMESTAMP_MS))


def sample_route(route: Sequence[GeoPoint], spacing_m: float) -> List[GeoPoint]:
    """
    Points every spacing_m of arc length along the polyline, starting at its
    first vertex; a remainder shorter than spacing_m is dropped.
    """
    seg_lengths = [great_circle_distance(a, b) for a, b in zip(route[:-1], route[1:])]
    total = sum(seg_lengths)
    # route lengths carry rounding from the offsets; do not lose the last sample to it
    n = int(math.floor(total / spacing_m + 1e-4)) + 1

    points = []
    seg, seg_start = 0, 0.0
    for k in range(n):
        s = k * spacing_m
        while seg < len(seg_lengths) - 1 and s > seg_start + seg_lengths[seg]:
            seg_start += seg_lengths[seg]
            seg += 1
        length = seg_lengths[seg]
        fraction = (s - seg_start) / length if length > 0 else 0.0
        points.append(interpolate(route[seg], route[seg + 1], fraction))
    return points


def _serving(cells, p, zone) -> Tuple[SynthCell, float, float]:
    p0_off = zone.p0_offset_db if zone is not None else 0.0
    beta_off = zone.beta_offset if zone is not None else 0.0
    best = None
    for c in sorted(cells, key=lambda c: c.cell_id):
        d = great_circle_distance(p, c.pos)
        mean = c.mean_rsrp(d, p0_off, beta_off)
        if best is None or mean > best[2]:
            best = (c, d, mean)
    return best


def generate(config: SynthConfig) -> Tuple[DriveTestDataset, List[CellSite], GroundTruth]:
    positions = sample_route(config.route, config.spacing_m)
    if len(positions) < 2:
        raise RouteTooShort("route yields {} sample(s) at {:.3f} m spacing".format(len(positions),
                                                                                 config.spacing_m))
    n = len(positions)
    z = np.random.default_rng(config.seed).standard_normal(n)
    missing = np.zeros(n, dtype=bool)
    if config.missing_fraction > 0:
        missing = np.random.default_rng([config.seed, 1]).random(n) < config.missing_fraction

    interval_ms = config.sample_interval_s * 1000.0
    measurements, means, noises, dists, serving, sigmas = [], [], [], [], [], []
    n_floor = 0
    for i, p in enumerate(positions):
        zone = config.zone_at(p)
        sigma = zone.sigma_db if (zone is not None and zone.sigma_db is not None) else config.sigma_db
        cell, d, mean = _serving(config.cells, p, zone)
        rsrp = mean + sigma * float(z[i])
        # stored noise is the exact difference, so rsrp - noise == mean
        noise = rsrp - mean

        value = rsrp
        if not (RSRP_MIN_DBM <= rsrp <= RSRP_MAX_DBM):
            value = None
            n_floor += 1
        elif missing[i]:
            value = None

        measurements.append(Measurement(id=i, timestamp_ms=config.start_timestamp_ms + int(round(i * interval_ms)),
                                        pos=p, rsrp_dbm=value, serving_cell=cell.cell_id))
        means.append(mean)
        noises.append(noise)
        dists.append(d)
        serving.append(cell.cell_id)
        sigmas.append(sigma)

    if n_floor > 0:
        logger.warning("{} synthetic sample(s) outside [{}, {}] dBm written without RSRP".format(
            n_floor, RSRP_MIN_DBM, RSRP_MAX_DBM))
    logger.debug("generated {} samples, {:.2f} m apart, {} cell(s)".format(n, config.spacing_m,
                                                                          len(config.cells)))

    sites = [CellSite(c.cell_id, c.pos) for c in sorted(config.cells, key=lambda c: c.cell_id)]
    truth = GroundTruth(point_ids=tuple(range(n)), true_mean_dbm=tuple(means), noise_db=tuple(noises),
                        true_dist_m=tuple(dists), serving_cell=tuple(serving), sigma_db=tuple(sigmas))
    return DriveTestDataset(tuple(measurements), source_path="<synthetic seed={}>".format(config.seed)), sites, truth


def write_ground_truth(truth: GroundTruth, path, header_comment: Optional[str] = None):
    write_frame(truth.to_frame(), path, header_comment)
