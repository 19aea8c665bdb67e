# encoding: utf-8
"""
Drive-test records and their csv ingestion / emission.
"""

from .records import (CellId, CellSite, DriveTestDataset, Measurement, MeasurementArrays, SiteDatabase,
                      as_site_index)
from .reader import load_cell_sites, load_drive_test, load_targets
from .writer import write_cell_sites, write_drive_test, write_frame


def make_inputs(cfg, strict=True):
    """
    Load the drive-test dataset and cell-site index named by the config.
    """
    dataset = load_drive_test(cfg.DATA.DRIVE_TEST_PATH, strict=strict)
    sites = as_site_index(load_cell_sites(cfg.DATA.CELLS_PATH))
    return dataset, sites
