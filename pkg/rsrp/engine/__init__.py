# encoding: utf-8

from .evaluator import (EXPERIMENTS, EvalRecord, LeaveOneOutResult, SweepResult, SweepRow, leave_one_out,
                        run_experiment, sweep)
from .runner import do_evaluate, do_predict, do_sigma, do_simulate, do_sweep
from .statistics import BoxStats, ErrorSigmaAnalysis, EvalSummary, box_stats, error_vs_sigma, summarize
