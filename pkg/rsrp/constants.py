# encoding: utf-8
"""
Physical constants and file schemas shared by the whole package.
"""

import math

# Earth model used by the great-circle distance
EARTH_RADIUS_M = 6371000.0
DEG_TO_RAD = math.pi / 180.0

# log-distance model reference distance d0 (meters)
REFERENCE_DISTANCE_M = 1.0

# sanity range for RSRP samples (dBm); wider than the 3GPP reporting range
RSRP_MIN_DBM = -150.0
RSRP_MAX_DBM = 0.0

# csv schemas
DRIVE_TEST_COLUMNS = ("timestamp_ms", "lat_deg", "lon_deg", "rsrp_dbm", "cell_id")
CELL_SITE_COLUMNS = ("cell_id", "lat_deg", "lon_deg")
GROUND_TRUTH_COLUMNS = ("point_id", "true_mean_dbm", "noise_db", "true_dist_m", "serving_cell")
TARGET_COLUMNS = ("lat_deg", "lon_deg")

SWEEP_COLUMNS = ("radius_m", "min_points", "min_dist_m", "n_records", "coverage", "mean_abs_err_db",
                 "min", "q1", "median", "q3", "max")
SCATTER_COLUMNS = ("point_id", "sigma_db", "abs_error_db")
EVAL_RECORD_COLUMNS = ("point_id", "cell_id", "actual_rsrp_dbm", "predicted_rsrp_dbm", "error_db",
                       "local_sigma_db")

COMMENT_PREFIX = "#"
