# encoding: utf-8
"""
CSV emission for drive-test datasets, cell sites and ground truth.
"""

import os
from typing import Iterable, Optional

import pandas as pd

from ..constants import CELL_SITE_COLUMNS, DRIVE_TEST_COLUMNS
from .records import CellSite, DriveTestDataset


def _shortest_repr(value):
    return repr(float(value))


def write_frame(frame: pd.DataFrame, path, header_comment: Optional[str] = None):
    """
    Write a frame as csv with an optional leading `#` comment line.
    Floats are written with their shortest round-trip repr.
    """
    out_dir = os.path.dirname(os.path.abspath(path))
    if not os.path.exists(out_dir):
        os.makedirs(out_dir)
    with open(path, "w", encoding="utf-8", newline="") as f:
        if header_comment:
            f.write(header_comment.rstrip("\n") + "\n")
        frame.to_csv(f, index=False, lineterminator="\n", float_format=_shortest_repr)


def drive_test_frame(dataset: DriveTestDataset) -> pd.DataFrame:
    rows = [(m.timestamp_ms, m.pos.lat_deg, m.pos.lon_deg,
             "" if m.rsrp_dbm is None else repr(float(m.rsrp_dbm)), m.serving_cell)
            for m in dataset.measurements]
    frame = pd.DataFrame(rows, columns=list(DRIVE_TEST_COLUMNS))
    return frame.astype({"timestamp_ms": "int64", "lat_deg": float, "lon_deg": float, "rsrp_dbm": str})


def write_drive_test(dataset: DriveTestDataset, path, header_comment: Optional[str] = None):
    write_frame(drive_test_frame(dataset), path, header_comment)


def write_cell_sites(sites: Iterable[CellSite], path, header_comment: Optional[str] = None):
    rows = [(s.cell_id, s.pos.lat_deg, s.pos.lon_deg) for s in sites]
    write_frame(pd.DataFrame(rows, columns=list(CELL_SITE_COLUMNS)), path, header_comment)
