# encoding: utf-8
"""
Command bodies: load inputs named by the config, run the pipeline, write the
result files. Every file starts with the provenance line.
"""

import json
import logging
import os
from typing import List, Optional, Sequence

import pandas as pd

from ..constants import EVAL_RECORD_COLUMNS, SCATTER_COLUMNS
from ..data import (DriveTestDataset, load_drive_test, load_targets, make_inputs, write_cell_sites, write_drive_test,
                    write_frame)
from ..exceptions import ConfigError, EmptyDataset, InsufficientResult, TooFewPoints
from ..geo import GeoPoint
from ..pathloss import build_fit_bounds
from ..predict import PredictionResult, build_noise_model, predict_grid, predict_many
from ..selection import build_selection_config
from ..shadowing import (ShadowingIndex, build_noise_options, consecutive_differences, estimate_shadowing)
from ..synth import build_synth_config, generate, write_ground_truth
from ..utils.provenance import provenance_line
from .evaluator import leave_one_out, run_experiment
from .statistics import error_vs_sigma


def _out_path(cfg, name):
    return os.path.join(cfg.OUTPUT.DIR, name)


def _write_json_lines(records, path, header_comment):
    out_dir = os.path.dirname(os.path.abspath(path))
    if not os.path.exists(out_dir):
        os.makedirs(out_dir)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(header_comment + "\n")
        for r in records:
            f.write(json.dumps(r, allow_nan=False) + "\n")


def _require_measured(dataset: DriveTestDataset):
    if len(dataset.measured()) == 0:
        raise EmptyDataset("{}: no measurement carries RSRP".format(dataset.source_path))


def _grid_box(cfg):
    box = list(cfg.OUTPUT.GRID_BOX)
    if len(box) == 0:
        return None
    if len(box) != 4:
        raise ConfigError("OUTPUT.GRID_BOX needs [sw_lat, sw_lon, ne_lat, ne_lon]")
    try:
        return GeoPoint(float(box[0]), float(box[1])), GeoPoint(float(box[2]), float(box[3]))
    except (TypeError, ValueError) as e:
        raise ConfigError("OUTPUT.GRID_BOX: {}".format(e))


# -----------------------------------------------------------------------------
# predict
# -----------------------------------------------------------------------------
def do_predict(cfg, targets: Optional[Sequence[GeoPoint]] = None) -> List[PredictionResult]:
    """
    Predict at the given targets, or at DATA.TARGETS_PATH, or on the
    OUTPUT.GRID_BOX grid, in that order of precedence.
    """
    logger = logging.getLogger("rsrp.predict")
    dataset, sites = make_inputs(cfg, strict=bool(cfg.DATA.STRICT))
    _require_measured(dataset)
    config = build_selection_config(cfg)
    bounds = build_fit_bounds(cfg)
    noise = build_noise_model(cfg, dataset, build_noise_options(cfg))

    box = _grid_box(cfg)
    if targets is None and cfg.DATA.TARGETS_PATH:
        targets = load_targets(cfg.DATA.TARGETS_PATH)
    if targets is not None:
        logger.info("Predicting at {} target(s)".format(len(targets)))
        results = predict_many(targets, dataset, sites, config, bounds, cfg.FIT.KIND, noise)
    elif box is not None:
        logger.info("Predicting on a {} m grid".format(cfg.OUTPUT.GRID_SPACING_M))
        results = predict_grid(box[0], box[1], float(cfg.OUTPUT.GRID_SPACING_M), dataset, sites, config, bounds,
                               cfg.FIT.KIND, noise)
    else:
        raise ConfigError("no target: give --target, --targets or OUTPUT.GRID_BOX")

    path = _out_path(cfg, "prediction.jsonl")
    _write_json_lines([r.to_record() for r in results], path, provenance_line(cfg))
    n_empty = sum(1 for r in results if r.is_empty)
    logger.info("Wrote {} prediction(s) to {} ({} empty)".format(len(results), path, n_empty))
    if len(results) == 0 or n_empty == len(results):
        raise InsufficientResult("no cell survived the filters at any target")
    return results


# -----------------------------------------------------------------------------
# evaluate
# -----------------------------------------------------------------------------
def do_evaluate(cfg):
    logger = logging.getLogger("rsrp.evaluate")
    dataset, sites = make_inputs(cfg, strict=bool(cfg.DATA.STRICT))
    _require_measured(dataset)
    config = build_selection_config(cfg)
    bounds = build_fit_bounds(cfg)
    options = build_noise_options(cfg)
    noise = build_noise_model(cfg, dataset, options)
    index = noise.index if (noise is not None and noise.index is not None) else \
        ShadowingIndex(dataset, options.l_max_m, options.non_overlapping)

    logger.info("Leave-one-out over {} measured point(s), R={} m, fit={}".format(
        len(dataset.measured()), config.radius_m, cfg.FIT.KIND))
    result = leave_one_out(dataset, sites, config, bounds, cfg.FIT.KIND, noise, shadowing_index=index,
                           n_jobs=int(cfg.RUNTIME.N_JOBS), progress=bool(cfg.RUNTIME.PROGRESS))
    summary = result.summary()
    header = provenance_line(cfg)

    write_frame(result.to_frame()[list(EVAL_RECORD_COLUMNS)], _out_path(cfg, "eval_records.csv"), header)

    correlation = float("nan")
    try:
        analysis = error_vs_sigma(result.records)
        if not analysis.undefined:
            correlation = analysis.correlation
        scatter = pd.DataFrame(list(analysis.pairs), columns=list(SCATTER_COLUMNS))
    except TooFewPoints:
        scatter = pd.DataFrame([], columns=list(SCATTER_COLUMNS))
    write_frame(scatter, _out_path(cfg, "scatter.csv"), header)

    row = {"n_measured": summary.n_measured, "n_records": summary.n_records, "coverage": summary.coverage,
           "mean_abs_err_db": summary.mean_abs_err_db, "rmse_db": summary.rmse_db,
           "error_sigma_corr": correlation}
    for prefix, box in (("abs", summary.abs_box), ("signed", summary.signed_box)):
        for name in ("min", "q1", "median", "q3", "max", "mean"):
            row["{}_{}".format(prefix, name)] = getattr(box, name) if box is not None else None
    write_frame(pd.DataFrame([row]), _out_path(cfg, "eval_summary.csv"), header)

    logger.info("Predicted {}/{} points (coverage {:.3f})".format(summary.n_records, summary.n_measured,
                                                                  summary.coverage))
    if summary.n_records == 0:
        raise InsufficientResult("no measured point could be predicted")
    logger.info("Mean |error| {:.3f} dB, RMSE {:.3f} dB".format(summary.mean_abs_err_db, summary.rmse_db))
    return result


# -----------------------------------------------------------------------------
# sweep
# -----------------------------------------------------------------------------
def do_sweep(cfg):
    logger = logging.getLogger("rsrp.sweep")
    dataset, sites = make_inputs(cfg, strict=bool(cfg.DATA.STRICT))
    _require_measured(dataset)
    bounds = build_fit_bounds(cfg)
    options = build_noise_options(cfg)
    noise = build_noise_model(cfg, dataset, options)
    index = noise.index if (noise is not None and noise.index is not None) else \
        ShadowingIndex(dataset, options.l_max_m, options.non_overlapping)
    kind = cfg.SWEEP.EXPERIMENT

    logger.info("Sweep '{}': radii {} x min points {} x min dists {}".format(
        kind, list(cfg.SWEEP.RADII_M), list(cfg.SWEEP.MIN_POINTS), list(cfg.SWEEP.MIN_DISTS_M)))
    result = run_experiment(kind, dataset, sites, list(cfg.SWEEP.RADII_M), list(cfg.SWEEP.MIN_POINTS),
                            list(cfg.SWEEP.MIN_DISTS_M), bounds, cfg.FIT.KIND,
                            fixed_min_points=int(cfg.SELECTION.MIN_POINTS_PER_CELL),
                            fixed_min_dist=float(cfg.SELECTION.MIN_DIST_TO_CELL_M), noise=noise,
                            n_jobs=int(cfg.RUNTIME.N_JOBS), progress=bool(cfg.RUNTIME.PROGRESS),
                            shadowing_index=index)

    header = provenance_line(cfg)
    write_frame(result.to_frame(), _out_path(cfg, "sweep.csv"), header)
    write_frame(result.signed_frame(), _out_path(cfg, "sweep_signed.csv"), header)
    write_frame(result.scatter_frame(), _out_path(cfg, "sweep_scatter.csv"), header)
    write_frame(result.correlation_frame(), _out_path(cfg, "sweep_sigma_corr.csv"), header)
    column = "min_dist_m" if kind == "distance" else "min_points"
    write_frame(result.mean_error_grid(column).reset_index(), _out_path(cfg, "mean_error_grid.csv"), header)

    logger.info("Wrote {} sweep row(s) to {}".format(len(result.rows), cfg.OUTPUT.DIR))
    if all(r.summary.n_records == 0 for r in result.rows):
        raise InsufficientResult("no configuration predicted any point")
    return result


# -----------------------------------------------------------------------------
# sigma
# -----------------------------------------------------------------------------
def _estimate_record(diffs, alpha):
    if len(diffs) == 0:
        return {"sigma_db": None, "n_pairs": 0, "ci_low_db": None, "ci_high_db": None, "confidence": None}
    est = estimate_shadowing(diffs, alpha)
    return {"sigma_db": est.sigma_db, "n_pairs": est.n_pairs, "ci_low_db": est.ci_low_db,
            "ci_high_db": est.ci_high_db, "confidence": est.confidence}


def do_sigma(cfg, target: Optional[GeoPoint] = None):
    """
    Blind shadowing estimate over the whole drive test (or the disc of radius
    SELECTION.RADIUS_M around `target`), plus one estimate per serving cell.
    """
    logger = logging.getLogger("rsrp.sigma")
    # differences need no site positions; DATA.CELLS_PATH is not read
    dataset = load_drive_test(cfg.DATA.DRIVE_TEST_PATH, strict=bool(cfg.DATA.STRICT))
    options = build_noise_options(cfg)
    radius = float(cfg.SELECTION.RADIUS_M) if target is not None else None

    def diffs_of(ds):
        return consecutive_differences(ds, radius_m=radius, l_max_m=options.l_max_m, center=target,
                                       non_overlapping=options.non_overlapping)

    diffs = diffs_of(dataset)
    record = _estimate_record(diffs, options.alpha)
    cells = sorted(set(m.serving_cell for m in dataset.measurements))
    record["per_cell"] = {c: _estimate_record(diffs_of(dataset.for_cell(c)), options.alpha) for c in cells}

    path = _out_path(cfg, "sigma.json")
    _write_json_lines([record], path, provenance_line(cfg))
    logger.info("{} difference pair(s); sigma = {}".format(len(diffs), record["sigma_db"]))
    if len(diffs) < 2:
        raise InsufficientResult("{} difference pair(s); at least 2 are needed".format(len(diffs)))
    return record


# -----------------------------------------------------------------------------
# simulate
# -----------------------------------------------------------------------------
def do_simulate(cfg):
    logger = logging.getLogger("rsrp.simulate")
    config = build_synth_config(cfg)
    dataset, sites, truth = generate(config)

    header = provenance_line(cfg)
    write_drive_test(dataset, _out_path(cfg, "drive_test.csv"), header)
    write_cell_sites(sites, _out_path(cfg, "cells.csv"), header)
    write_ground_truth(truth, _out_path(cfg, "ground_truth.csv"), header)
    logger.info("Wrote {} samples over {} cell(s) to {}".format(len(dataset), len(sites), cfg.OUTPUT.DIR))
    return dataset, sites, truth
