# encoding: utf-8
"""
CSV ingestion for drive-test measurements and cell sites.

Files may carry `#` comment lines (provenance headers written by this
package); line numbers in errors always refer to physical lines.
"""

import io
import logging
import math
import os
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from ..constants import (CELL_SITE_COLUMNS, COMMENT_PREFIX, DRIVE_TEST_COLUMNS, RSRP_MAX_DBM,
                         RSRP_MIN_DBM, TARGET_COLUMNS)
from ..exceptions import DuplicateCellId, InputError, MalformedRow, OutOfRange, SchemaMismatch
from ..geo import GeoPoint
from .records import CellSite, DriveTestDataset, Measurement

logger = logging.getLogger(__name__)


def _read_table(path, columns: Sequence[str]) -> Tuple[pd.DataFrame, List[int], List[Tuple[int, Exception]]]:
    """
    :return: string-typed frame of well-shaped rows, the physical line number of
        each of its rows, and (line_no, error) for rows with a wrong field count
    """
    if not os.path.isfile(path):
        raise InputError("'{}' does not exist!".format(path))

    with open(path, "r", encoding="utf-8") as f:
        raw_lines = f.read().splitlines()

    # 1. drop comments and blank lines, remember where each kept line came from
    kept = [(i + 1, line) for i, line in enumerate(raw_lines)
            if line.strip() != "" and not line.lstrip().startswith(COMMENT_PREFIX)]
    if len(kept) == 0:
        raise SchemaMismatch(path, columns, ())

    header_line_no, header = kept[0]
    found = tuple(h.strip() for h in header.split(","))
    if found != tuple(columns):
        raise SchemaMismatch(path, columns, found)

    # 2. field count check before handing the body to pandas
    body, line_numbers, bad = [], [], []
    for line_no, line in kept[1:]:
        n_fields = line.count(",") + 1
        if n_fields != len(columns):
            bad.append((line_no, MalformedRow(line_no, "expected {} fields, found {}".format(len(columns), n_fields))))
            continue
        body.append(line)
        line_numbers.append(line_no)

    text = "\n".join([header] + body)
    frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False, na_filter=False)
    return frame, line_numbers, bad


def _parse_float(text, line_no, name):
    try:
        value = float(text)
    except ValueError:
        raise MalformedRow(line_no, "{} '{}' is not a number".format(name, text))
    if not math.isfinite(value):
        raise MalformedRow(line_no, "{} '{}' is not finite".format(name, text))
    return value


def _parse_position(lat_text, lon_text, line_no):
    lat = _parse_float(lat_text, line_no, "lat_deg")
    lon = _parse_float(lon_text, line_no, "lon_deg")
    if not GeoPoint.is_valid(lat, lon):
        raise OutOfRange(line_no, "position ({}, {})".format(lat, lon))
    return GeoPoint(lat, lon)


def _parse_timestamp(text, line_no):
    try:
        value = int(text)
    except ValueError:
        value = _parse_float(text, line_no, "timestamp_ms")
        if value != int(value):
            raise MalformedRow(line_no, "timestamp_ms '{}' is not an integer".format(text))
        value = int(value)
    if value < 0:
        raise OutOfRange(line_no, "timestamp_ms {} < 0".format(value))
    return value


def _parse_rsrp(text, line_no) -> Optional[float]:
    if text.strip() == "":
        return None
    value = _parse_float(text, line_no, "rsrp_dbm")
    if not (RSRP_MIN_DBM <= value <= RSRP_MAX_DBM):
        raise OutOfRange(line_no, "rsrp_dbm {} outside [{}, {}]".format(value, RSRP_MIN_DBM, RSRP_MAX_DBM))
    return value


def _parse_cell_id(text, line_no):
    cell_id = text.strip()
    if cell_id == "":
        raise MalformedRow(line_no, "empty cell_id")
    return cell_id


def load_drive_test(path, strict=True) -> DriveTestDataset:
    """
    :param path: drive-test csv with header timestamp_ms,lat_deg,lon_deg,rsrp_dbm,cell_id
    :param strict: raise at the first bad row; otherwise collect bad rows in `rejected`
    :return: dataset sorted by timestamp; ids follow the sorted order
    """
    frame, line_numbers, rejected = _read_table(path, DRIVE_TEST_COLUMNS)
    if strict and len(rejected) > 0:
        raise rejected[0][1]

    rows = []
    for (ts, lat, lon, rsrp, cell), line_no in zip(frame.itertuples(index=False, name=None), line_numbers):
        try:
            rows.append((
                _parse_timestamp(ts, line_no),
                _parse_position(lat, lon, line_no),
                _parse_rsrp(rsrp, line_no),
                _parse_cell_id(cell, line_no),
            ))
        except InputError as e:
            if strict:
                raise
            rejected.append((line_no, e))

    # stable: equal timestamps keep file order
    rows.sort(key=lambda r: r[0])
    measurements = tuple(
        Measurement(id=i, timestamp_ms=ts, pos=pos, rsrp_dbm=rsrp, serving_cell=cell)
        for i, (ts, pos, rsrp, cell) in enumerate(rows)
    )
    rejected.sort(key=lambda item: item[0])
    if len(rejected) > 0:
        logger.warning("{}: rejected {} row(s), first at line {}".format(path, len(rejected), rejected[0][0]))
    logger.debug("{}: loaded {} measurements".format(path, len(measurements)))

    return DriveTestDataset(measurements=measurements, source_path=str(path), rejected=tuple(rejected))


def load_cell_sites(path) -> List[CellSite]:
    """
    :param path: cell-site csv with header cell_id,lat_deg,lon_deg
    """
    frame, line_numbers, rejected = _read_table(path, CELL_SITE_COLUMNS)
    if len(rejected) > 0:
        raise rejected[0][1]

    sites = []
    seen = set()
    for (cell, lat, lon), line_no in zip(frame.itertuples(index=False, name=None), line_numbers):
        cell_id = _parse_cell_id(cell, line_no)
        if cell_id in seen:
            raise DuplicateCellId(cell_id)
        seen.add(cell_id)
        sites.append(CellSite(cell_id=cell_id, pos=_parse_position(lat, lon, line_no)))

    logger.debug("{}: loaded {} cell sites".format(path, len(sites)))
    return sites


def load_targets(path) -> List[GeoPoint]:
    """
    :param path: csv with header lat_deg,lon_deg
    """
    frame, line_numbers, rejected = _read_table(path, TARGET_COLUMNS)
    if len(rejected) > 0:
        raise rejected[0][1]
    return [_parse_position(lat, lon, line_no)
            for (lat, lon), line_no in zip(frame.itertuples(index=False, name=None), line_numbers)]
