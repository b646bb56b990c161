"""Test script for the posterior odds filter and false-alarm estimators."""

import logging
import math

import numpy as np

from changeaccel.exceptions import InvalidArgumentError
from changeaccel.model import (
    BernoulliResponse,
    HistoryDependentChangePoint,
    MarkovianChangePoint,
    ResponseModel,
    StreakRule,
    TrialEngine,
)
from changeaccel.posterior import (
    PosteriorState,
    brute_force_posterior,
    false_alarm_estimate,
    false_alarm_probability,
    indicator_false_alarm_estimate,
    posterior_probability,
    shiryaev_first_crossing,
    update_odds,
)

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def table1():
    responses = ResponseModel.bernoulli([0.45, 0.35, 0.25])
    change_point = MarkovianChangePoint(prior=0.0, p=(0.1, 0.05, 0.0))
    return responses, change_point


def test_update_odds():
    """Test single recursion steps."""
    print("\n" + "=" * 60)
    print("Testing Odds Update")
    print("=" * 60)

    state = update_odds(PosteriorState(0.0), 0.0, math.log(2.0))
    assert abs(state.odds - 2.0) < 1e-15 and state.t == 1

    state = update_odds(PosteriorState.initial(0.0), 0.1, 0.0)
    assert abs(state.odds - 1.0 / 9.0) < 1e-15

    zero = update_odds(PosteriorState.initial(0.0), 0.0, 0.7)
    assert zero.log_odds == -math.inf

    for pi, log_lr in ((1.0, 0.0), (0.1, math.inf)):
        try:
            update_odds(PosteriorState(0.0), pi, log_lr)
        except InvalidArgumentError:
            print(f"✓ pi={pi}, log_lr={log_lr} rejected")
        else:
            raise AssertionError("invalid update accepted")

    state = PosteriorState(math.log(3.0))
    assert abs(posterior_probability(state) - 0.75) < 1e-15
    assert abs(false_alarm_probability(state) - 0.25) < 1e-15

    print("✓ recursion steps")
    print("\n" + "=" * 60)


def test_brute_force_examples():
    """Test the direct-summation oracle on hand-checked values."""
    print("\n" + "=" * 60)
    print("Testing Brute-Force Posterior")
    print("=" * 60)

    responses = ResponseModel((BernoulliResponse(0.2, 0.6),))
    assert abs(brute_force_posterior(MarkovianChangePoint(prior=0.2, p=(0.1,)), responses, [], []) - 0.25) < 1e-15
    single = brute_force_posterior(MarkovianChangePoint(p=(0.1,)), responses, [1], [1])
    assert abs(single - 1.0 / 3.0) < 1e-15

    print("✓ prior odds and single step")
    print("\n" + "=" * 60)


def _random_case(rng):
    k = int(rng.integers(1, 4))
    pairs = []
    for _ in range(k):
        f = float(rng.uniform(0.05, 0.5))
        pairs.append(BernoulliResponse(f, min(0.95, f + 0.05 + 0.4 * float(rng.random()))))
    p = tuple(float(v) for v in rng.uniform(0.0, 0.5, size=k))
    prior = float(rng.uniform(0.0, 0.5)) if rng.random() < 0.7 else 0.0
    if rng.random() < 0.3:
        change_point = HistoryDependentChangePoint(prior=prior, rule=StreakRule(p, int(rng.integers(1, 4))))
    else:
        change_point = MarkovianChangePoint(prior=prior, p=p)
    t = int(rng.integers(1, 7))
    treatments = [int(x) for x in rng.integers(1, k + 1, size=t)]
    observations = [int(y) for y in rng.integers(0, 2, size=t)]
    return ResponseModel(tuple(pairs)), change_point, treatments, observations


def test_oracle_equivalence():
    """Test recursion against direct summation on random short histories."""
    print("\n" + "=" * 60)
    print("Testing Recursion vs Oracle")
    print("=" * 60)

    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        responses, change_point, treatments, observations = _random_case(rng)
        state = PosteriorState.initial(change_point.prior)
        for j, (x, y) in enumerate(zip(treatments, observations), start=1):
            pi = change_point.transition(treatments[:j])
            state = update_odds(state, pi, responses.log_density_ratio(x, y))
        oracle = brute_force_posterior(change_point, responses, treatments, observations)
        if oracle == 0.0:
            assert state.log_odds == -math.inf
            continue
        rel = abs(math.exp(state.log_odds) - oracle) / oracle
        worst = max(worst, rel)
        assert rel < 1e-10, (treatments, observations, rel)

    print(f"✓ 1000 histories, worst relative error {worst:.2e}")
    print("\n" + "=" * 60)


def test_false_alarm_estimators():
    """Test the estimators on constant samples and bad input."""
    print("\n" + "=" * 60)
    print("Testing False-Alarm Estimators")
    print("=" * 60)

    est = false_alarm_estimate([999.0] * 10)
    assert abs(est.estimate - 1e-3) < 1e-15 and est.se < 1e-15

    b = (1 - 0.05) / 0.05
    assert abs(false_alarm_estimate([b] * 5).estimate - 0.05) < 1e-15

    assert indicator_false_alarm_estimate([True, False, False, False]).estimate == 0.25

    for values in ([], [-1.0]):
        try:
            false_alarm_estimate(values)
        except InvalidArgumentError:
            print(f"✓ {values} rejected")
        else:
            raise AssertionError("invalid sample accepted")

    print("\n" + "=" * 60)


def test_shiryaev_immediate_stop():
    """Test T = 0 when the prior odds already reach the threshold."""
    print("\n" + "=" * 60)
    print("Testing Immediate Stop")
    print("=" * 60)

    responses = ResponseModel.bernoulli([0.45])
    engine = TrialEngine(responses, MarkovianChangePoint(prior=0.5, p=(0.1,)), seed=1)
    outcome = shiryaev_first_crossing(engine, 1, 0.5)
    assert outcome.stopping_time == 0
    assert outcome.log_odds == 0.0
    print("✓ T = 0")
    print("\n" + "=" * 60)


def test_shiryaev_monotone_in_threshold():
    """Test that raising b never stops a replication earlier."""
    print("\n" + "=" * 60)
    print("Testing Threshold Monotonicity")
    print("=" * 60)

    responses, change_point = table1()
    for replication in range(200):
        times = [
            shiryaev_first_crossing(TrialEngine(responses, change_point, 21, replication), 1, b).stopping_time
            for b in (19.0, 99.0, 999.0)
        ]
        assert times[0] <= times[1] <= times[2], times

    print("✓ 200 replications")
    print("\n" + "=" * 60)


def test_estimator_consistency():
    """Test Err control and agreement of the two estimators."""
    print("\n" + "=" * 60)
    print("Testing Estimator Consistency")
    print("=" * 60)

    responses, change_point = table1()
    alpha = 0.05
    b = (1 - alpha) / alpha
    outcomes = [
        shiryaev_first_crossing(TrialEngine(responses, change_point, 8, r), 1, b) for r in range(10_000)
    ]
    for outcome in outcomes:
        assert outcome.log_odds >= math.log(b)
    weighted = false_alarm_estimate([o.terminal_odds for o in outcomes])
    counted = indicator_false_alarm_estimate([o.false_alarm for o in outcomes])
    print(f"Err = {weighted.estimate:.4f} ± {weighted.se:.4f}, indicator {counted.estimate:.4f} ± {counted.se:.4f}")

    assert weighted.estimate <= 1.0 / (1.0 + b) + 3 * weighted.se
    assert abs(weighted.estimate - counted.estimate) < 4 * math.hypot(weighted.se, counted.se)
    print("\n" + "=" * 60)


def main():
    """Run all posterior tests."""
    print("\n" + "=" * 60)
    print("POSTERIOR TESTS")
    print("=" * 60)

    try:
        test_update_odds()
        test_brute_force_examples()
        test_oracle_equivalence()
        test_false_alarm_estimators()
        test_shiryaev_immediate_stop()
        test_shiryaev_monotone_in_threshold()
        test_estimator_consistency()

        print("\n" + "=" * 60)
        print("All posterior tests completed!")
        print("=" * 60 + "\n")

    except Exception as e:
        logger.error(f"Test failed: {str(e)}", exc_info=True)
        raise


if __name__ == "__main__":
    main()
