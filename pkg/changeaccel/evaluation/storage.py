"""CSV storage for evaluation results."""

import csv
import subprocess
import threading
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from scipy.special import expit

from changeaccel import __version__
from changeaccel.exceptions import ResultStorageError
from changeaccel.utils.logger import get_logger

logger = get_logger(__name__)

TABLE2_HEADERS = [
    "procedure",
    "alpha",
    "err",
    "err_se",
    "err_indicator",
    "ess",
    "ess_se",
    "mean_theta",
    "mean_delay",
    "e_n",
    "reps",
    "seed",
]

FRONTIER_HEADERS = [
    "procedure",
    "threshold_params",
    "err",
    "neg_log10_err",
    "ess",
    "ess_normalized",
    "reps",
    "seed",
]

CALIBRATION_HEADERS = ["c", "b_c", "err_estimate", "err_se", "ess", "ess_se", "reps", "seed"]

METRICS_HEADERS = ["treatment", "I", "J", "D", "lambda", "zeta", "p"]

TERMINAL_ODDS_HEADERS = ["replication", "log_odds", "false_alarm_weight"]


@lru_cache(maxsize=1)
def build_id() -> str:
    """Package version, plus ``git describe`` output when run from a checkout."""
    try:
        described = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
            check=True,
        ).stdout.strip()
    except (OSError, subprocess.SubprocessError):
        described = ""
    return f"{__version__}+{described}" if described else __version__


def _cell(value) -> Union[str, int, float]:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


class ResultStorage:
    """Thread-safe CSV writer for result tables.

    Every file starts with a comment row naming the build, the seed and the
    replication count, followed by the header row. Files are rewritten on
    every save, so equal inputs give byte-identical files.
    """

    def __init__(self, output_dir: Union[str, Path] = "results"):
        """Initialize storage.

        Args:
            output_dir: Directory for CSV files
        """
        self.output_dir = Path(output_dir)
        self._lock = threading.Lock()

    def _write(
        self,
        filename: str,
        headers: Sequence[str],
        rows: Iterable[Sequence],
        seed: Optional[int],
        reps: Optional[int],
    ) -> Path:
        path = self.output_dir / filename
        try:
            with self._lock:
                self.output_dir.mkdir(parents=True, exist_ok=True)
                with open(path, "w", newline="", encoding="utf-8") as f:
                    f.write(f"# changeaccel {build_id()} seed={_cell(seed)} reps={_cell(reps)}\n")
                    writer = csv.writer(f, lineterminator="\n")
                    writer.writerow(headers)
                    for row in rows:
                        writer.writerow([_cell(v) for v in row])
        except OSError as e:
            logger.error("result_write_failed", path=str(path), error=str(e), exc_info=True)
            raise ResultStorageError(f"cannot write {path}: {e}") from e

        logger.info("results_saved", path=str(path))
        return path

    def save_table2(self, reports, seed: int, reps: int, filename: str = "table2.csv") -> Path:
        """Save EvalReports in the table2 layout (also used by ``eval``)."""
        rows = [
            [
                r.procedure,
                r.alpha,
                r.err,
                r.err_se,
                r.err_indicator,
                r.ess,
                r.ess_se,
                r.mean_theta,
                r.mean_delay,
                r.e_n,
                r.reps,
                r.seed,
            ]
            for r in reports
        ]
        return self._write(filename, TABLE2_HEADERS, rows, seed, reps)

    def save_frontier(self, points, seed: int, reps: int, filename: str = "frontier.csv") -> Path:
        """Save FrontierPoints."""
        rows = [
            [p.procedure, p.threshold_params, p.err, p.neg_log10_err, p.ess, p.ess_normalized, p.reps, p.seed]
            for p in points
        ]
        return self._write(filename, FRONTIER_HEADERS, rows, seed, reps)

    def save_calibration(self, table, seed: int, reps: int, filename: str = "calibration.csv") -> Path:
        """Save the c-calibration table."""
        rows = [[r.c, r.b_c, r.err_estimate, r.err_se, r.ess, r.ess_se, r.reps, r.seed] for r in table]
        return self._write(filename, CALIBRATION_HEADERS, rows, seed, reps)

    def save_metrics(self, quality, filename: str = "metrics.csv") -> Path:
        """Save per-treatment quality numbers; lambda_* goes in a final row labelled '*'."""
        rows = [[m.treatment, m.I, m.J, m.D, m.lam, m.zeta, m.p] for m in quality.treatments]
        rows.append(["*", None, None, quality.D_max, quality.lambda_star, None, None])
        return self._write(filename, METRICS_HEADERS, rows, None, None)

    def save_terminal_odds(
        self,
        log_odds: Sequence[float],
        seed: int,
        procedure: str = "",
        filename: str = "terminal_odds.csv",
    ) -> Path:
        """Save log Gamma_T and 1/(1+Gamma_T) for every replication."""
        rows = ([k, g, float(expit(-g))] for k, g in enumerate(log_odds))
        if procedure:
            logger.debug("terminal_odds_export", procedure=procedure, reps=len(log_odds))
        return self._write(filename, TERMINAL_ODDS_HEADERS, rows, seed, len(log_odds))
