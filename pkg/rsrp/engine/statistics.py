# encoding: utf-8
"""
Error statistics behind the box plots, the mean-error grid and the
error-vs-shadowing scatter.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats
from sklearn.metrics import mean_absolute_error, mean_squared_error

from ..exceptions import EmptyInput, TooFewPoints

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoxStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    n: int

    def as_row(self):
        return [self.min, self.q1, self.median, self.q3, self.max]


def box_stats(errors: Sequence[float]) -> BoxStats:
    """
    Five-number summary with quartiles by linear interpolation between order
    statistics (type 7).
    """
    values = np.sort(np.asarray(errors, dtype=float))
    if values.shape[0] == 0:
        raise EmptyInput("box_stats needs at least one value")
    q1, median, q3 = np.percentile(values, [25.0, 50.0, 75.0])
    return BoxStats(min=float(values[0]), q1=float(q1), median=float(median), q3=float(q3),
                    max=float(values[-1]), mean=float(np.mean(values)), n=int(values.shape[0]))


@dataclass(frozen=True)
class ErrorSigmaAnalysis:
    pairs: Tuple[Tuple[int, float, float], ...]
    correlation: float
    undefined: bool = False


def error_vs_sigma(records) -> ErrorSigmaAnalysis:
    """
    Scatter of (local sigma, |error|) with the Pearson correlation; a zero
    variance on either axis reports correlation 0 with the `undefined` flag.
    :param records: EvalRecords; those without local sigma are skipped
    """
    pairs = tuple((r.point_id, float(r.local_sigma_db), abs(float(r.error_db)))
                  for r in records if r.local_sigma_db is not None)
    if len(pairs) < 3:
        raise TooFewPoints("error_vs_sigma needs at least 3 pairs, got {}".format(len(pairs)))
    sigma = np.array([p[1] for p in pairs])
    err = np.array([p[2] for p in pairs])
    if np.ptp(sigma) == 0.0 or np.ptp(err) == 0.0:
        return ErrorSigmaAnalysis(pairs=pairs, correlation=0.0, undefined=True)
    r, _ = stats.pearsonr(sigma, err)
    return ErrorSigmaAnalysis(pairs=pairs, correlation=float(min(1.0, max(-1.0, r))))


@dataclass(frozen=True)
class EvalSummary:
    n_measured: int
    n_records: int
    coverage: float
    mean_abs_err_db: Optional[float]
    rmse_db: Optional[float]
    abs_box: Optional[BoxStats]
    signed_box: Optional[BoxStats]


def summarize(errors: Sequence[float], n_measured: int) -> EvalSummary:
    errors = np.asarray(errors, dtype=float)
    n = int(errors.shape[0])
    coverage = n / n_measured if n_measured > 0 else 0.0
    if n == 0:
        return EvalSummary(n_measured, 0, coverage, None, None, None, None)
    zeros = np.zeros(n)
    return EvalSummary(
        n_measured=n_measured,
        n_records=n,
        coverage=coverage,
        mean_abs_err_db=float(mean_absolute_error(zeros, errors)),
        rmse_db=math.sqrt(float(mean_squared_error(zeros, errors))),
        abs_box=box_stats(np.abs(errors)),
        signed_box=box_stats(errors),
    )
