"""Test script for replication-parallel evaluation, frontiers and result files."""

import logging
import math
import tempfile
import warnings
from pathlib import Path

from scipy.special import expit

from changeaccel.dp import save_policy, value_iterate
from changeaccel.evaluation import (
    ResultStorage,
    evaluate,
    frontier,
    policy_filename,
    reproduce_table2,
    run_procedure,
)
from changeaccel.evaluation.report import aggregate
from changeaccel.evaluation.storage import TABLE2_HEADERS
from changeaccel.exceptions import (
    ConfigError,
    EvaluationAbortedError,
    HorizonExceededError,
    MissingPolicyWarning,
    ResultStorageError,
)
from changeaccel.model import MarkovianChangePoint, ResponseModel, TrialEngine
from changeaccel.posterior import write_terminal_odds_csv
from changeaccel.procedures import parse_procedure, quality_metrics

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def table1():
    responses = ResponseModel.bernoulli([0.45, 0.35, 0.25])
    change_point = MarkovianChangePoint(prior=0.0, p=(0.1, 0.05, 0.0))
    return responses, change_point


def spec(name, alpha):
    return parse_procedure(name, alpha=alpha, quality=quality_metrics(*table1()))


def test_single_replication():
    """Test that one replication reproduces the single-run outcome."""
    print("\n" + "=" * 60)
    print("Testing Single Replication")
    print("=" * 60)

    responses, change_point = table1()
    proposed = spec("proposed:1,3", 1e-3)
    report = evaluate(proposed, responses, change_point, reps=1, seed=12)
    outcome = run_procedure(TrialEngine(responses, change_point, 12, 0), proposed)

    assert report.reps == 1
    assert report.ess == outcome.stopping_time and report.ess_se == 0.0
    assert report.err == float(expit(-outcome.log_odds)) and report.err_se == 0.0
    assert report.e_n == outcome.cycles
    assert report.mean_theta == outcome.change_time
    print(f"✓ T = {outcome.stopping_time}, Theta = {outcome.change_time}")
    print("\n" + "=" * 60)


def test_worker_independence():
    """Test that the report does not depend on the worker count."""
    print("\n" + "=" * 60)
    print("Testing Worker Independence")
    print("=" * 60)

    responses, change_point = table1()
    proposed = spec("proposed:2,3", 0.01)
    serial = evaluate(proposed, responses, change_point, reps=4_500, seed=3, workers=1, keep_odds=True)
    parallel = evaluate(proposed, responses, change_point, reps=4_500, seed=3, workers=3, keep_odds=True)
    assert serial.model_dump(exclude={"wall_time"}) == parallel.model_dump(exclude={"wall_time"})
    print("✓ identical reports with 1 and 3 workers")
    print("\n" + "=" * 60)


def test_ess_decomposition():
    """Test ESS = E Theta + E(T - Theta)+ - E(T - Theta)-."""
    print("\n" + "=" * 60)
    print("Testing ESS Decomposition")
    print("=" * 60)

    responses, change_point = table1()
    for name in ("proposed:1,3", "static:1", "static:2"):
        report = evaluate(spec(name, 0.01), responses, change_point, reps=3_000, seed=4)
        print(f"{name}: ESS {report.ess:.3f}, gap {report.decomposition_gap():.2e}")
        assert report.never_changed == 0
        assert report.decomposition_gap() < 1e-9

    partial = aggregate("static:2", 0, [0, 3], [None, 1], [0.0, 1.0], [True, False])
    assert partial.never_changed == 1 and partial.mean_theta == math.inf
    assert math.isnan(partial.decomposition_gap())
    print("✓ gap undefined when a change time is infinite")

    print("\n" + "=" * 60)


def test_false_alarm_control():
    """Test Err <= alpha + 3 SE for every threshold procedure."""
    print("\n" + "=" * 60)
    print("Testing False-Alarm Control")
    print("=" * 60)

    responses, change_point = table1()
    for alpha in (0.05, 1e-3):
        for name in ("proposed:1,3", "proposed:2,3", "static:1", "static:2"):
            report = evaluate(spec(name, alpha), responses, change_point, reps=3_000, seed=5)
            print(f"{name} @ {alpha:g}: Err {report.err:.2e} ± {report.err_se:.1e}, ESS {report.ess:.2f}")
            assert report.err <= alpha + 3 * report.err_se

    print("\n" + "=" * 60)


def test_training_treatment_gap():
    """Test that training with treatment 2 costs about lambda_2 - lambda_1 = 10 extra steps."""
    print("\n" + "=" * 60)
    print("Testing Training-Treatment Gap")
    print("=" * 60)

    responses, change_point = table1()
    fast = evaluate(spec("proposed:1,3", 1e-3), responses, change_point, reps=10_000, seed=8)
    slow = evaluate(spec("proposed:2,3", 1e-3), responses, change_point, reps=10_000, seed=8)
    gap = slow.ess - fast.ess
    print(f"ESS (1,3) {fast.ess:.2f}, (2,3) {slow.ess:.2f}, gap {gap:.2f}")
    assert abs(gap - 10.0) < 2.5
    print("\n" + "=" * 60)


def test_result_storage():
    """Test byte-identical result files and their headers."""
    print("\n" + "=" * 60)
    print("Testing Result Storage")
    print("=" * 60)

    responses, change_point = table1()
    report = evaluate(spec("static:1", 0.05), responses, change_point, reps=200, seed=9, keep_odds=True)

    with tempfile.TemporaryDirectory() as tmp:
        storage = ResultStorage(tmp)
        first = storage.save_table2([report], seed=9, reps=200, filename="a.csv").read_bytes()
        second = storage.save_table2([report], seed=9, reps=200, filename="b.csv").read_bytes()
        assert first == second

        lines = first.decode("utf-8").splitlines()
        assert lines[0].startswith("# changeaccel ") and lines[0].endswith("seed=9 reps=200")
        assert lines[1] == ",".join(TABLE2_HEADERS)
        assert lines[2].startswith("static:1,0.05,")
        assert len(lines) == 3

        metrics = storage.save_metrics(quality_metrics(responses, change_point)).read_text(encoding="utf-8")
        assert metrics.splitlines()[-1].startswith("*,")

        odds = write_terminal_odds_csv(Path(tmp) / "odds.csv", report.terminal_log_odds, seed=9)
        assert len(odds.read_text(encoding="utf-8").splitlines()) == 2 + 200

        blocker = Path(tmp) / "blocker"
        blocker.write_text("", encoding="utf-8")
        try:
            ResultStorage(blocker / "sub").save_table2([report], seed=9, reps=200)
        except ResultStorageError as e:
            print(f"✓ {e}")
        else:
            raise AssertionError("write into a file path succeeded")

    print("✓ byte-identical files")
    print("\n" + "=" * 60)


def test_table2():
    """Test the Table 2 reproduction with and without DP policies."""
    print("\n" + "=" * 60)
    print("Testing Table 2 Reproduction")
    print("=" * 60)

    responses, change_point = table1()
    with tempfile.TemporaryDirectory() as tmp:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            reports = reproduce_table2(responses, change_point, reps=300, seed=1, policy_dir=tmp, alphas=(0.05,))
        assert [r.procedure for r in reports] == ["proposed:1,3", "proposed:2,3", "static:1", "static:2"]
        assert any(issubclass(w.category, MissingPolicyWarning) for w in caught)

        _, policy = value_iterate(0.01, responses, change_point, grid_size=200)
        save_policy(policy, Path(tmp) / policy_filename(0.05))
        reports = reproduce_table2(responses, change_point, reps=300, seed=1, policy_dir=tmp, alphas=(0.05,))
        assert len(reports) == 5
        assert reports[0].procedure == "optimal" and reports[0].alpha == 0.05

    print("✓ four rows without a policy, five with one")
    print("\n" + "=" * 60)


def test_frontier():
    """Test frontier points against the lower bound."""
    print("\n" + "=" * 60)
    print("Testing Frontiers")
    print("=" * 60)

    responses, change_point = table1()
    points = frontier("proposed:1,3", [0.05, 0.01], responses, change_point, reps=1_000, seed=2)
    assert len(points) == 2
    for point in points:
        print(f"Err {point.err:.2e}, ESS {point.ess:.2f}, LB {point.lower_bound:.2f}")
        assert point.lower_bound <= point.ess
        assert point.ess_normalized >= 1.0
        assert point.threshold_params.startswith("b1=")

    dp = frontier("dp", [0.01], responses, change_point, reps=500, seed=2)
    assert len(dp) == 1 and dp[0].procedure == "optimal"

    try:
        frontier("static:1", [], responses, change_point)
    except ConfigError as e:
        print(f"✓ {e}")
    else:
        raise AssertionError("empty sweep accepted")

    print("\n" + "=" * 60)


def test_frontier_ordering():
    """Test that the (1,3) normalized ESS stays below both static curves at small Err."""
    print("\n" + "=" * 60)
    print("Testing Frontier Ordering")
    print("=" * 60)

    responses, change_point = table1()
    alphas = [1e-3, 1e-5]
    curves = {
        name: frontier(name, alphas, responses, change_point, reps=2_000, seed=13, workers=1)
        for name in ("proposed:1,3", "static:1", "static:2")
    }
    for name, points in curves.items():
        assert len(points) == len(alphas)
        print(name, ", ".join(f"{p.ess_normalized:.3f} (Err {p.err:.1e})" for p in points))

    def se(point):
        return point.ess_se / point.lower_bound

    proposed = curves["proposed:1,3"]
    for name in ("static:1", "static:2"):
        gaps = []
        for ours, theirs in zip(proposed, curves[name]):
            spread = 3 * math.hypot(se(ours), se(theirs))
            assert ours.err <= 1e-3 + 3 * ours.err_se
            assert ours.ess_normalized + spread < theirs.ess_normalized
            gaps.append((theirs.ess_normalized - ours.ess_normalized, spread))
        (near, near_spread), (far, far_spread) = gaps
        # No convergence toward the (1,3) curve as Err shrinks
        assert far > near - math.hypot(near_spread, far_spread)

    print("\n" + "=" * 60)


def test_horizon_abort():
    """Test that a replication hitting the step cap aborts the evaluation."""
    print("\n" + "=" * 60)
    print("Testing Horizon Abort")
    print("=" * 60)

    responses, change_point = table1()
    try:
        evaluate(spec("static:3", 0.05), responses, change_point, reps=10, seed=0, max_horizon=100)
    except EvaluationAbortedError as e:
        assert e.replication == 0
        assert isinstance(e.cause, HorizonExceededError)
        assert e.exit_code == 3
        print(f"✓ {e}")
    else:
        raise AssertionError("runaway replication not aborted")

    print("\n" + "=" * 60)


def main():
    """Run all evaluation tests."""
    print("\n" + "=" * 60)
    print("EVALUATION TESTS")
    print("=" * 60)

    try:
        test_single_replication()
        test_worker_independence()
        test_ess_decomposition()
        test_false_alarm_control()
        test_training_treatment_gap()
        test_result_storage()
        test_table2()
        test_frontier()
        test_frontier_ordering()
        test_horizon_abort()

        print("\n" + "=" * 60)
        print("All evaluation tests completed!")
        print("=" * 60 + "\n")

    except Exception as e:
        logger.error(f"Test failed: {str(e)}", exc_info=True)
        raise


if __name__ == "__main__":
    main()
