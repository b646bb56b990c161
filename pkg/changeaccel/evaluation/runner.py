"""Replication-parallel evaluation of a procedure."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from changeaccel.config import settings
from changeaccel.dp.simulate import run_dp
from changeaccel.evaluation.report import EvalReport, aggregate
from changeaccel.exceptions import ChangeAccelError, EvaluationAbortedError, InvalidArgumentError
from changeaccel.model.changepoint import ChangePointModel
from changeaccel.model.engine import TrialEngine
from changeaccel.model.outcome import TrialOutcome
from changeaccel.model.responses import ResponseModel
from changeaccel.procedures.runners import run_proposed, run_static
from changeaccel.procedures.specs import DPSpec, ProcedureSpec, ProposedSpec, StaticSpec
from changeaccel.utils.logger import get_logger

logger = get_logger(__name__)

# Replications per task handed to a worker process.
CHUNK_SIZE = 2_000


def run_procedure(engine: TrialEngine, spec: ProcedureSpec) -> TrialOutcome:
    """Run any procedure specification on one replication."""
    if isinstance(spec, ProposedSpec):
        return run_proposed(engine, spec)
    if isinstance(spec, StaticSpec):
        return run_static(engine, spec)
    if isinstance(spec, DPSpec):
        return run_dp(engine, spec.policy)
    raise InvalidArgumentError(f"unknown procedure specification {spec!r}")


@dataclass
class _Chunk:
    stopping_times: list[int] = field(default_factory=list)
    change_times: list[Optional[int]] = field(default_factory=list)
    log_odds: list[float] = field(default_factory=list)
    false_alarms: list[bool] = field(default_factory=list)
    cycles: list[int] = field(default_factory=list)


def _run_chunk(
    spec: ProcedureSpec,
    responses: ResponseModel,
    change_point: ChangePointModel,
    seed: int,
    start: int,
    stop: int,
    max_horizon: Optional[int],
) -> _Chunk:
    chunk = _Chunk()
    for replication in range(start, stop):
        try:
            engine = TrialEngine(responses, change_point, seed, replication, max_horizon)
            outcome = run_procedure(engine, spec)
        except ChangeAccelError as e:
            raise EvaluationAbortedError(replication, e) from e
        chunk.stopping_times.append(outcome.stopping_time)
        chunk.change_times.append(outcome.change_time)
        chunk.log_odds.append(outcome.log_odds)
        chunk.false_alarms.append(outcome.false_alarm)
        if outcome.cycles is not None:
            chunk.cycles.append(outcome.cycles)
    return chunk


def evaluate(
    spec: ProcedureSpec,
    responses: ResponseModel,
    change_point: ChangePointModel,
    reps: Optional[int] = None,
    seed: int = 0,
    workers: Optional[int] = None,
    max_horizon: Optional[int] = None,
    keep_odds: bool = False,
) -> EvalReport:
    """Estimate Err, ESS and the cycle statistics of ``spec`` by simulation.

    Replication r always uses the streams keyed by (seed, r), so the
    report does not depend on ``workers``.

    Args:
        spec: Procedure to evaluate
        responses: Response model
        change_point: Change-point model
        reps: Number of replications (default settings.DEFAULT_REPS)
        seed: Base seed
        workers: Worker processes (default settings.WORKERS; 1 runs inline)
        max_horizon: Step cap per replication
        keep_odds: Keep every log Gamma_T in the report

    Returns:
        EvalReport

    Raises:
        EvaluationAbortedError: If any replication fails
    """
    reps = reps if reps is not None else settings.DEFAULT_REPS
    workers = workers or settings.WORKERS
    if reps < 1:
        raise InvalidArgumentError(f"reps must be at least 1, got {reps}")
    if seed < 0:
        raise InvalidArgumentError(f"seed must be non-negative, got {seed}")

    bounds = [(start, min(start + CHUNK_SIZE, reps)) for start in range(0, reps, CHUNK_SIZE)]
    logger.info("evaluation_started", procedure=spec.label, reps=reps, seed=seed, workers=workers)
    started = time.perf_counter()

    args = (spec, responses, change_point, seed)
    if workers == 1 or len(bounds) == 1:
        chunks = [_run_chunk(*args, start, stop, max_horizon) for start, stop in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, *args, start, stop, max_horizon) for start, stop in bounds]
            chunks = [future.result() for future in futures]

    merged = _Chunk()
    for chunk in chunks:
        merged.stopping_times += chunk.stopping_times
        merged.change_times += chunk.change_times
        merged.log_odds += chunk.log_odds
        merged.false_alarms += chunk.false_alarms
        merged.cycles += chunk.cycles

    report = aggregate(
        procedure=spec.label,
        seed=seed,
        stopping_times=merged.stopping_times,
        change_times=merged.change_times,
        log_odds=merged.log_odds,
        false_alarms=merged.false_alarms,
        cycles=merged.cycles if isinstance(spec, ProposedSpec) else None,
        alpha=spec.alpha,
        keep_odds=keep_odds,
    )
    report = report.model_copy(update={"wall_time": time.perf_counter() - started})
    logger.info(
        "evaluation_finished",
        procedure=spec.label,
        reps=reps,
        err=report.err,
        err_se=report.err_se,
        ess=report.ess,
        ess_se=report.ess_se,
        elapsed=round(report.wall_time, 3),
    )
    return report
