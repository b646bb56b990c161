"""Error/sample-size frontiers and the Table 2 reproduction."""

from __future__ import annotations

import math
import warnings
from pathlib import Path
from typing import Optional, Sequence, Union

from pydantic import BaseModel

from changeaccel.dp.policy import load_policy
from changeaccel.dp.solver import value_iterate
from changeaccel.evaluation.report import EvalReport
from changeaccel.evaluation.runner import evaluate
from changeaccel.exceptions import ConfigError, MissingPolicyWarning
from changeaccel.model.changepoint import ChangePointModel
from changeaccel.model.responses import ResponseModel
from changeaccel.procedures.quality import TreatmentQuality, quality_metrics
from changeaccel.procedures.specs import DPSpec, ProcedureSpec, ProposedSpec, StaticSpec, parse_procedure
from changeaccel.procedures.thresholds import lower_bound_value
from changeaccel.utils.logger import get_logger

logger = get_logger(__name__)

TABLE2_ALPHAS = (0.05, 1e-2, 1e-3, 1e-5)
TABLE2_PROCEDURES = ("optimal", "proposed:1,3", "proposed:2,3", "static:1", "static:2")
DEFAULT_ALPHA_SWEEP = (0.05, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7)
DEFAULT_COST_SWEEP = (1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6)


class FrontierPoint(BaseModel):
    """One point of an error/sample-size frontier."""

    procedure: str
    threshold_params: str
    err: float
    err_se: float
    neg_log10_err: float
    ess: float
    ess_se: float
    lower_bound: float
    ess_normalized: float
    reps: int
    seed: int


def policy_filename(alpha: float) -> str:
    """File name under which the DP policy calibrated for ``alpha`` is stored."""
    return f"policy-alpha-{alpha!r}.json"


def _threshold_params(spec: ProcedureSpec) -> str:
    if isinstance(spec, ProposedSpec):
        return f"b1={spec.b1!r};bK={spec.bK!r};d={spec.d!r}"
    if isinstance(spec, StaticSpec):
        return f"b={spec.b!r}"
    return f"c={spec.policy.c!r};b_c={spec.policy.b_c!r}"


def frontier(
    family: str,
    sweep: Sequence[float],
    responses: ResponseModel,
    change_point: ChangePointModel,
    reps: Optional[int] = None,
    seed: int = 0,
    workers: Optional[int] = None,
    quality: Optional[TreatmentQuality] = None,
) -> list[FrontierPoint]:
    """Trace Err against ESS for one procedure family.

    ``family`` is ``proposed:i,j`` or ``static:x`` (``sweep`` lists levels
    alpha) or ``dp`` (``sweep`` lists costs c). Each point carries ESS
    divided by the lower bound lambda_* + |log Err| / D_K. Points whose
    estimated Err is zero are skipped.

    Raises:
        ConfigError: On an empty sweep or unknown family
    """
    if not sweep:
        raise ConfigError("frontier sweep is empty", key="sweep")
    quality = quality or quality_metrics(responses, change_point)

    points: list[FrontierPoint] = []
    for value in sweep:
        if family == "dp":
            _, policy = value_iterate(value, responses, change_point)
            spec: ProcedureSpec = DPSpec(policy=policy)
        else:
            spec = parse_procedure(family, alpha=value, quality=quality)
        report = evaluate(spec, responses, change_point, reps=reps, seed=seed, workers=workers)
        if report.err <= 0.0:
            logger.warning("frontier_point_skipped", procedure=spec.label, sweep_value=value)
            continue
        bound = lower_bound_value(min(report.err, 1.0), quality)
        points.append(
            FrontierPoint(
                procedure=spec.label,
                threshold_params=_threshold_params(spec),
                err=report.err,
                err_se=report.err_se,
                neg_log10_err=-math.log10(report.err),
                ess=report.ess,
                ess_se=report.ess_se,
                lower_bound=bound,
                ess_normalized=report.ess / bound,
                reps=report.reps,
                seed=seed,
            )
        )
    return points


def reproduce_table2(
    responses: ResponseModel,
    change_point: ChangePointModel,
    reps: Optional[int] = None,
    seed: int = 0,
    policy_dir: Optional[Union[str, Path]] = None,
    workers: Optional[int] = None,
    alphas: Sequence[float] = TABLE2_ALPHAS,
    procedures: Sequence[str] = TABLE2_PROCEDURES,
) -> list[EvalReport]:
    """Evaluate every (procedure, alpha) cell of the simulation study.

    Optimal rows need a policy file ``policy_filename(alpha)`` in
    ``policy_dir``; cells without one are skipped with a
    MissingPolicyWarning.
    """
    quality = quality_metrics(responses, change_point)
    reports: list[EvalReport] = []
    for name in procedures:
        for alpha in alphas:
            if name == "optimal":
                path = Path(policy_dir) / policy_filename(alpha) if policy_dir else None
                if path is None or not path.exists():
                    logger.warning("policy_missing", alpha=alpha, path=str(path) if path else None)
                    warnings.warn(
                        f"no DP policy for alpha={alpha!r} (expected {path}); optimal row skipped",
                        MissingPolicyWarning,
                        stacklevel=2,
                    )
                    continue
                spec: ProcedureSpec = DPSpec(policy=load_policy(path), source=str(path), alpha=alpha)
            else:
                spec = parse_procedure(name, alpha=alpha, quality=quality)
            reports.append(evaluate(spec, responses, change_point, reps=reps, seed=seed, workers=workers))
    return reports
