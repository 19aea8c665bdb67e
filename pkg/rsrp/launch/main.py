# encoding: utf-8
"""
Command-line entry point.

    rsrp-oracle predict  --drive-test dt.csv --cells cells.csv --target 35.70 51.40 --out out/
    rsrp-oracle evaluate --config configs/default.yml --out out/
    rsrp-oracle sweep    --config configs/experiments/min_points_sweep.yml --out out/
    rsrp-oracle sigma    --drive-test dt.csv --cells cells.csv --out out/
    rsrp-oracle simulate --config configs/synthetic/single_cell.yml --out out/ --seed 3

Trailing KEY VALUE pairs override the config tree, e.g. `SWEEP.RADII_M "[50.0, 100.0]"`.
Exit codes: 0 ok, 2 input error, 3 empty or insufficient result.
"""

import argparse
import os
import sys

from ..config import get_cfg_defaults
from ..engine import do_evaluate, do_predict, do_sigma, do_simulate, do_sweep
from ..exceptions import ConfigError, InputError, InsufficientResult
from ..geo import GeoPoint
from ..utils.logger import setup_logger

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_EMPTY_RESULT = 3

COMMANDS = ("predict", "evaluate", "sweep", "sigma", "simulate")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="", help="path to a yaml config file", type=str)
    common.add_argument("--drive-test", default=None, help="drive-test csv", type=str)
    common.add_argument("--cells", default=None, help="cell-site csv", type=str)
    common.add_argument("--out", default=None, help="output directory", type=str)
    common.add_argument("--radius-m", default=None, type=float)
    common.add_argument("--min-points", default=None, type=int)
    common.add_argument("--min-dist-m", default=None, type=float)
    common.add_argument("--fit", default=None, choices=["mse", "mle"])
    common.add_argument("--alpha", default=None, type=float)
    common.add_argument("--l-max-m", default=None, type=float)
    common.add_argument("--non-overlapping-pairs", action='store_true')
    common.add_argument("--seed", default=None, type=int)
    common.add_argument("--jobs", default=None, type=int, help="joblib workers")
    common.add_argument("--log-dir", default=None, type=str)
    common.add_argument("--no-progress", action='store_true')
    common.add_argument("opts", help="Modify config options using the command-line", default=None,
                        nargs=argparse.REMAINDER)

    parser = argparse.ArgumentParser(prog="rsrp-oracle", description="RSRP prediction from drive-test data")
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    p = sub.add_parser("predict", parents=[common], help="predict RSRP at target points")
    p.add_argument("--target", default=None, nargs=2, type=float, metavar=("LAT", "LON"))
    p.add_argument("--targets", default=None, type=str, help="csv of lat_deg,lon_deg")

    sub.add_parser("evaluate", parents=[common], help="leave-one-out evaluation")

    p = sub.add_parser("sweep", parents=[common], help="leave-one-out over a parameter grid")
    p.add_argument("--experiment", default=None, choices=["full", "points", "distance"])

    p = sub.add_parser("sigma", parents=[common], help="blind shadowing estimate")
    p.add_argument("--target", default=None, nargs=2, type=float, metavar=("LAT", "LON"))

    sub.add_parser("simulate", parents=[common], help="generate a synthetic drive test")
    return parser


def setup_cfg(args):
    """
    defaults -> config file -> flags -> trailing KEY VALUE pairs, then freeze.
    """
    cfg = get_cfg_defaults()
    if args.config != "":
        if not os.path.isfile(args.config):
            raise InputError("'{}' does not exist!".format(args.config))
        try:
            cfg.merge_from_file(args.config)
        except (KeyError, ValueError, AssertionError) as e:
            raise ConfigError("{}: {}".format(args.config, e))

    if args.drive_test is not None:
        cfg.DATA.DRIVE_TEST_PATH = args.drive_test
    if args.cells is not None:
        cfg.DATA.CELLS_PATH = args.cells
    if getattr(args, "targets", None) is not None:
        cfg.DATA.TARGETS_PATH = args.targets
    if args.out is not None:
        cfg.OUTPUT.DIR = args.out
    if args.log_dir is not None:
        cfg.OUTPUT.LOG_DIR = args.log_dir
    if args.radius_m is not None:
        cfg.SELECTION.RADIUS_M = args.radius_m
    if args.min_points is not None:
        cfg.SELECTION.MIN_POINTS_PER_CELL = args.min_points
    if args.min_dist_m is not None:
        cfg.SELECTION.MIN_DIST_TO_CELL_M = args.min_dist_m
    if args.fit is not None:
        cfg.FIT.KIND = args.fit
    if args.alpha is not None:
        cfg.SHADOWING.ALPHA = args.alpha
    if args.l_max_m is not None:
        cfg.SHADOWING.L_MAX_M = args.l_max_m
    if args.non_overlapping_pairs:
        cfg.SHADOWING.NON_OVERLAPPING_PAIRS = 1
    if args.seed is not None:
        cfg.SYNTH.SEED = args.seed
    if getattr(args, "experiment", None) is not None:
        cfg.SWEEP.EXPERIMENT = args.experiment
    if args.jobs is not None:
        cfg.RUNTIME.N_JOBS = args.jobs
    if args.no_progress:
        cfg.RUNTIME.PROGRESS = 0

    try:
        cfg.merge_from_list(args.opts or [])
    except (KeyError, ValueError, AssertionError) as e:
        raise ConfigError("invalid override: {}".format(e))

    if cfg.FIT.KIND not in ("mse", "mle"):
        raise ConfigError("FIT.KIND must be mse or mle, got {}".format(cfg.FIT.KIND))
    if cfg.FIT.WEIGHT_MODE not in ("uniform", "local"):
        raise ConfigError("FIT.WEIGHT_MODE must be uniform or local, got {}".format(cfg.FIT.WEIGHT_MODE))
    check_values(cfg)
    cfg.freeze()
    return cfg


def check_values(cfg):
    """
    Range checks the yacs type check cannot express.
    """
    if not 0.0 < cfg.SHADOWING.ALPHA < 1.0:
        raise ConfigError("SHADOWING.ALPHA must lie in (0, 1), got {}".format(cfg.SHADOWING.ALPHA))
    if not cfg.SHADOWING.L_MAX_M > 0:
        raise ConfigError("SHADOWING.L_MAX_M must be > 0, got {}".format(cfg.SHADOWING.L_MAX_M))
    if not cfg.FIT.SIGMA_DB > 0:
        raise ConfigError("FIT.SIGMA_DB must be > 0, got {}".format(cfg.FIT.SIGMA_DB))
    if not cfg.OUTPUT.GRID_SPACING_M > 0:
        raise ConfigError("OUTPUT.GRID_SPACING_M must be > 0, got {}".format(cfg.OUTPUT.GRID_SPACING_M))

    box = list(cfg.OUTPUT.GRID_BOX)
    if len(box) == 0:
        return
    if len(box) != 4:
        raise ConfigError("OUTPUT.GRID_BOX needs [sw_lat, sw_lon, ne_lat, ne_lon], got {}".format(box))
    try:
        sw_lat, sw_lon, ne_lat, ne_lon = (float(v) for v in box)
    except (TypeError, ValueError):
        raise ConfigError("OUTPUT.GRID_BOX entries must be numbers, got {}".format(box))
    if not (GeoPoint.is_valid(sw_lat, sw_lon) and GeoPoint.is_valid(ne_lat, ne_lon)):
        raise ConfigError("OUTPUT.GRID_BOX corner outside the valid lat/lon range: {}".format(box))
    if sw_lat > ne_lat or sw_lon > ne_lon:
        raise ConfigError("OUTPUT.GRID_BOX south-west corner lies north or east of the north-east one: {}".format(box))


def _target(args):
    if getattr(args, "target", None) is None:
        return None
    lat, lon = args.target
    if not GeoPoint.is_valid(lat, lon):
        raise ConfigError("target ({}, {}) is not a valid position".format(lat, lon))
    return GeoPoint(lat, lon)


def run(args, cfg):
    if args.command == "predict":
        target = _target(args)
        do_predict(cfg, [target] if target is not None else None)
    elif args.command == "evaluate":
        do_evaluate(cfg)
    elif args.command == "sweep":
        do_sweep(cfg)
    elif args.command == "sigma":
        do_sigma(cfg, _target(args))
    elif args.command == "simulate":
        do_simulate(cfg)


def main(argv=None):
    args = build_parser().parse_args(argv)

    logger = setup_logger("rsrp", None, args.command)
    try:
        cfg = setup_cfg(args)
        logger = setup_logger("rsrp", cfg.OUTPUT.LOG_DIR, args.command)
        if args.config != "":
            logger.info("Loaded configuration file {}".format(args.config))
        logger.debug("Running with config:\n{}".format(cfg))
        run(args, cfg)
    except InputError as e:
        logger.error(str(e))
        return EXIT_INPUT_ERROR
    except InsufficientResult as e:
        logger.error(str(e))
        return EXIT_EMPTY_RESULT
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
