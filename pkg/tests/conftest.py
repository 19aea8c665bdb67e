"""
Shared synthetic scenes.

All scenes put one cell at ORIGIN and drive due north from it, so the
distance to the cell grows along the route.
"""

import math

import pytest

from rsrp.geo import GeoPoint, offset
from rsrp.synth import SynthCell, SynthConfig, SynthZone, generate

ORIGIN = GeoPoint(35.70, 51.40)


def north_route(start_m, end_m, origin=ORIGIN):
    return (offset(origin, start_m, 0.0), offset(origin, end_m, 0.0))


def line_config(sigma_db=0.0, seed=0, start_m=600.0, end_m=1097.5, p0_dbm=-40.0, beta=3.5, speed_kmh=9.0,
                zones=(), missing_fraction=0.0):
    """
    Defaults: 200 samples 2.5 m apart, 600 m to 1097.5 m from the cell.
    """
    return SynthConfig(cells=(SynthCell("A", ORIGIN, p0_dbm, beta),), route=north_route(start_m, end_m),
                       speed_kmh=speed_kmh, sample_interval_s=1.0, sigma_db=sigma_db, seed=seed, zones=zones,
                       missing_fraction=missing_fraction)


def split_zones(start_m, end_m, south=None, north=None):
    """
    Two boxes split at the route midpoint; `south` / `north` are
    (sigma_db, p0_offset_db, beta_offset) tuples.
    """
    mid = offset(ORIGIN, 0.5 * (start_m + end_m), 0.0).lat_deg
    lo = offset(ORIGIN, start_m - 100.0, -100.0)
    hi = offset(ORIGIN, end_m + 100.0, 100.0)
    zones = []
    if south is not None:
        zones.append(SynthZone(GeoPoint(lo.lat_deg, lo.lon_deg), GeoPoint(mid, hi.lon_deg), *south))
    if north is not None:
        zones.append(SynthZone(GeoPoint(mid, lo.lon_deg), GeoPoint(hi.lat_deg, hi.lon_deg), *north))
    return tuple(zones)


@pytest.fixture
def noiseless_scene():
    return generate(line_config())


@pytest.fixture
def noisy_scene():
    # 101 samples 5 m apart, about 19 of them in every 50 m disc
    return generate(line_config(sigma_db=4.0, seed=1, start_m=100.0, end_m=600.0, speed_kmh=18.0))


def haversine(a, b, radius=6371000.0):
    """
    Independent distance oracle, well conditioned at meter scale.
    """
    lat1, lon1, lat2, lon2 = map(math.radians, (a.lat_deg, a.lon_deg, b.lat_deg, b.lon_deg))
    h = math.sin((lat2 - lat1) / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2
    return 2 * radius * math.asin(math.sqrt(h))
