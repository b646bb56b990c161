"""Monte Carlo evaluation, frontiers and result files."""

from changeaccel.evaluation.frontier import (
    DEFAULT_ALPHA_SWEEP,
    DEFAULT_COST_SWEEP,
    TABLE2_ALPHAS,
    TABLE2_PROCEDURES,
    FrontierPoint,
    frontier,
    policy_filename,
    reproduce_table2,
)
from changeaccel.evaluation.report import EvalReport, aggregate
from changeaccel.evaluation.runner import evaluate, run_procedure
from changeaccel.evaluation.storage import ResultStorage

__all__ = [
    "DEFAULT_ALPHA_SWEEP",
    "DEFAULT_COST_SWEEP",
    "TABLE2_ALPHAS",
    "TABLE2_PROCEDURES",
    "EvalReport",
    "FrontierPoint",
    "ResultStorage",
    "aggregate",
    "evaluate",
    "frontier",
    "policy_filename",
    "reproduce_table2",
    "run_procedure",
]
