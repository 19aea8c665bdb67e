# encoding: utf-8
"""
rsrp: drive-test based RSRP prediction with per-cell log-distance path-loss
fits and blind shadowing estimation.
"""

from .version import version as __version__  # noqa

from .data import CellSite, DriveTestDataset, Measurement, load_cell_sites, load_drive_test
from .geo import GeoPoint, great_circle_distance
from .pathloss import FitBounds, NoiseWeights, PathLossParams, fit_mle, fit_mse, predict_rsrp
from .predict import PredictionResult, predict_at
from .selection import SelectionConfig
from .shadowing import ShadowingEstimate, estimate_shadowing, estimate_sigma, sigma_confidence_interval
