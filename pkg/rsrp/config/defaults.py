from yacs.config import CfgNode as CN

# -----------------------------------------------------------------------------
# Convention
# -----------------------------------------------------------------------------
# Distances carry the suffix _M (meters), powers _DB / _DBM. Every command
# reads the same tree: defaults -> --config file -> command-line flags ->
# trailing KEY VALUE pairs.

# -----------------------------------------------------------------------------
# Config definition
# -----------------------------------------------------------------------------
_C = CN()

# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
# 1.Data
# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
_C.DATA = CN()
# drive-test csv: timestamp_ms,lat_deg,lon_deg,rsrp_dbm,cell_id
_C.DATA.DRIVE_TEST_PATH = ""
# cell-site csv: cell_id,lat_deg,lon_deg
_C.DATA.CELLS_PATH = ""
# targets csv for batch prediction: lat_deg,lon_deg
_C.DATA.TARGETS_PATH = ""
# reject the whole file at the first bad row (1) or skip bad rows (0)
_C.DATA.STRICT = 1

# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
# 2.Neighborhood selection
# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
_C.SELECTION = CN()
# disc radius around the target
_C.SELECTION.RADIUS_M = 50.0
# cells with fewer points inside the disc are dropped
_C.SELECTION.MIN_POINTS_PER_CELL = 8
# points closer than this to their serving site are dropped
_C.SELECTION.MIN_DIST_TO_CELL_M = 10.0

# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
# 3.Path-loss fit
# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
_C.FIT = CN()
_C.FIT.KIND = "mse"            # "mse", "mle"
# per-point shadowing sigma for mle: "uniform" uses SIGMA_DB, "local" the blind estimate around each point
_C.FIT.WEIGHT_MODE = "uniform"  # "uniform", "local"
_C.FIT.SIGMA_DB = 6.0
# feasible box for (P0, beta)
_C.FIT.P0_LOW = -90.0
_C.FIT.P0_HIGH = -10.0
_C.FIT.BETA_LOW = 1.5
_C.FIT.BETA_HIGH = 6.5

# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
# 4.Shadowing
# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
_C.SHADOWING = CN()
# max displacement between the two measurements of a difference pair
_C.SHADOWING.L_MAX_M = 15.0
# confidence interval level is 1 - ALPHA
_C.SHADOWING.ALPHA = 0.05
_C.SHADOWING.NON_OVERLAPPING_PAIRS = 0
# local estimates: floor and minimum number of pairs before falling back to the global estimate
_C.SHADOWING.MIN_SIGMA_DB = 0.5
_C.SHADOWING.MIN_PAIRS = 5

# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
# 5.Sweep
# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
_C.SWEEP = CN()
_C.SWEEP.EXPERIMENT = "full"    # "full", "points", "distance"
_C.SWEEP.RADII_M = [50.0, 100.0, 200.0, 400.0]
_C.SWEEP.MIN_POINTS = [8, 10, 12, 14]
_C.SWEEP.MIN_DISTS_M = [10.0, 15.0, 20.0, 25.0]

# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
# 6.Synthetic scene
# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
_C.SYNTH = CN()
_C.SYNTH.SEED = 0
_C.SYNTH.SPEED_KMH = 18.0
_C.SYNTH.SAMPLE_INTERVAL_S = 1.0
_C.SYNTH.SIGMA_DB = 4.0
_C.SYNTH.MISSING_FRACTION = 0.0
_C.SYNTH.START_TIMESTAMP_MS = 0
# [cell_id, lat_deg, lon_deg, p0_dbm, beta]
_C.SYNTH.CELLS = []
# [lat_deg, lon_deg] vertices of the route polyline
_C.SYNTH.ROUTE = []
# [sw_lat, sw_lon, ne_lat, ne_lon, sigma_db, p0_offset_db, beta_offset]
_C.SYNTH.ZONES = []

# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
# 7.Output
# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
_C.OUTPUT = CN()
_C.OUTPUT.DIR = "work_space"
# log_<command>.txt is written here when set; keep it apart from DIR for byte-identical reruns
_C.OUTPUT.LOG_DIR = ""
# batch prediction grid: [sw_lat, sw_lon, ne_lat, ne_lon], empty to disable
_C.OUTPUT.GRID_BOX = []
_C.OUTPUT.GRID_SPACING_M = 50.0

# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
# 8.Runtime
# -----------------------------------------------------------------------------
# -----------------------------------------------------------------------------
_C.RUNTIME = CN()
# joblib workers for leave-one-out and sweeps
_C.RUNTIME.N_JOBS = 1
_C.RUNTIME.PROGRESS = 1


def get_cfg_defaults():
    return _C.clone()
