"""Test script for response models, change-point models and the trial engine."""

import logging
import math
from pathlib import Path

from changeaccel.exceptions import ConfigError, HorizonExceededError, InvalidArgumentError
from changeaccel.model import (
    BernoulliResponse,
    ConstantRule,
    GaussianResponse,
    HistoryDependentChangePoint,
    MarkovianChangePoint,
    ResponseModel,
    ResponsePair,
    StreakRule,
    TrialEngine,
    WarmupRule,
    kl_divergences,
    load_model_file,
    parse_model_text,
    transition_prob,
)
from changeaccel.posterior import shiryaev_first_crossing

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

MODELS_DIR = Path(__file__).parent / "models"


def table1():
    responses = ResponseModel.bernoulli([0.45, 0.35, 0.25])
    change_point = MarkovianChangePoint(prior=0.0, p=(0.1, 0.05, 0.0))
    return responses, change_point


def test_transition_prob():
    """Test transition probabilities of Markovian and rule-based models."""
    print("\n" + "=" * 60)
    print("Testing Transition Probabilities")
    print("=" * 60)

    _, change_point = table1()
    assert transition_prob(change_point, [1, 1, 1], 3) == 0.1
    assert transition_prob(change_point, [3], 1) == 0.0

    constant = HistoryDependentChangePoint(rule=ConstantRule(0.05, 3))
    assert transition_prob(constant, [1, 2, 3, 2], 4) == 0.05

    for history, t in (([], 1), ([1, 2], 3)):
        try:
            transition_prob(change_point, history, t)
        except InvalidArgumentError:
            print(f"✓ history={history}, t={t} rejected")
        else:
            raise AssertionError("invalid history accepted")

    print("✓ Markovian and constant transitions")
    print("\n" + "=" * 60)


def test_transition_rules():
    """Test the warmup and streak rules."""
    print("\n" + "=" * 60)
    print("Testing Transition Rules")
    print("=" * 60)

    warmup = WarmupRule(p=(0.1, 0.05), zeta_floor=(0.02, 0.01), rate=0.5)
    assert warmup([1]) == 0.02
    assert abs(warmup([2] * 60) - 0.05) < 1e-15
    assert warmup.zeta(1) == 0.02 and warmup.limit(2) == 0.05
    assert warmup.max_transition(1) == 0.02

    streak = StreakRule(p=(0.1, 0.2), ramp=2)
    assert streak([1, 1, 2, 2, 2]) == 0.2
    assert streak([1, 2]) == 0.1
    assert streak.zeta(2) == 0.1

    try:
        WarmupRule(p=(0.1,), zeta_floor=(0.2,), rate=0.5)
    except InvalidArgumentError:
        print("✓ zeta above p rejected")
    else:
        raise AssertionError("zeta above p accepted")

    print("✓ warmup and streak rules")
    print("\n" + "=" * 60)


def test_model_validation():
    """Test construction-time checks."""
    print("\n" + "=" * 60)
    print("Testing Model Validation")
    print("=" * 60)

    bad = [
        lambda: MarkovianChangePoint(prior=1.0, p=(0.1,)),
        lambda: MarkovianChangePoint(delta=0.5, p=(0.6,)),
        lambda: BernoulliResponse(0.5),
        lambda: GaussianResponse(1.0, 1.0),
        lambda: ResponseModel(()),
    ]
    for build in bad:
        try:
            build()
        except InvalidArgumentError as e:
            print(f"✓ rejected: {e}")
        else:
            raise AssertionError("invalid model accepted")

    print("\n" + "=" * 60)


def test_kl_divergences():
    """Test closed-form KL numbers."""
    print("\n" + "=" * 60)
    print("Testing KL Divergences")
    print("=" * 60)

    responses, _ = table1()
    kl = kl_divergences(responses, 3)
    assert abs(kl.I - 0.5 * math.log(3)) < 1e-12
    assert abs(kl.J - 0.5 * math.log(3)) < 1e-12
    print(f"I_3 = {kl.I:.6f}, J_3 = {kl.J:.6f}")

    gaussian = ResponseModel((GaussianResponse(0.0, 1.0),))
    kl = kl_divergences(gaussian, 1)
    assert kl.I == 0.5 and kl.J == 0.5

    # Generic Monte Carlo path against the closed form
    mc = ResponsePair.kl_divergences(GaussianResponse(0.0, 1.0), 200_000, 3)
    assert abs(mc.I - 0.5) < 5 * mc.I_se
    print(f"✓ Monte Carlo KL {mc.I:.4f} ± {mc.I_se:.4f}")

    print("\n" + "=" * 60)


def test_engine_dynamics():
    """Test forced, impossible and irreversible changes."""
    print("\n" + "=" * 60)
    print("Testing Engine Dynamics")
    print("=" * 60)

    forced = TrialEngine(ResponseModel.bernoulli([0.3]), MarkovianChangePoint(p=(1.0,)), seed=1)
    _, latent = forced.step(1)
    assert latent == 1 and forced.change_time == 1

    responses, change_point = table1()
    frozen = TrialEngine(responses, change_point, seed=2, max_horizon=200)
    for _ in range(200):
        _, latent = frozen.step(3)
        assert latent == 0
    assert frozen.change_time is None
    assert frozen.resolve_change_time(3) is None
    try:
        frozen.step(3)
    except HorizonExceededError as e:
        assert e.horizon == 200
        print("✓ horizon guard")
    else:
        raise AssertionError("horizon not enforced")

    for replication in range(50):
        engine = TrialEngine(responses, change_point, seed=3, replication=replication)
        previous = engine.latent
        for _ in range(40):
            _, latent = engine.step(1 + replication % 2)
            assert latent >= previous
            previous = latent

    print("✓ forced change, no change, irreversibility")
    print("\n" + "=" * 60)


def test_unreachable_change_time():
    """Test that a continuation treatment which can never trigger the change gives Theta = None."""
    print("\n" + "=" * 60)
    print("Testing Unreachable Change Time")
    print("=" * 60)

    responses = ResponseModel.bernoulli([0.45, 0.25])
    models = [
        HistoryDependentChangePoint(prior=0.5, rule=WarmupRule(p=(0.1, 0.0), zeta_floor=(0.05, 0.0), rate=0.8)),
        HistoryDependentChangePoint(prior=0.5, rule=StreakRule(p=(0.1, 0.0), ramp=3)),
        HistoryDependentChangePoint(prior=0.5, rule=ConstantRule(value=0.0, treatments=2)),
        MarkovianChangePoint(prior=0.5, p=(0.1, 0.0)),
    ]
    for change_point in models:
        assert change_point.never_changes(2)
        unchanged = 0
        for replication in range(20):
            engine = TrialEngine(responses, change_point, seed=4, replication=replication, max_horizon=1_000)
            outcome = shiryaev_first_crossing(engine, 2, 0.5)
            assert outcome.stopping_time == 0
            if outcome.change_time is None:
                unchanged += 1
                assert outcome.false_alarm
            else:
                assert outcome.change_time == 0
        assert unchanged > 0
        print(f"✓ {type(change_point).__name__}: {unchanged}/20 replications never change")

    print("\n" + "=" * 60)


def test_engine_determinism():
    """Test that (seed, replication) fixes the trajectory."""
    print("\n" + "=" * 60)
    print("Testing Engine Determinism")
    print("=" * 60)

    responses, change_point = table1()

    def trajectory(seed, replication):
        engine = TrialEngine(responses, change_point, seed=seed, replication=replication)
        ys = [engine.step(1 + t % 3)[0] for t in range(60)]
        return ys, engine.change_time

    assert trajectory(11, 4) == trajectory(11, 4)
    assert trajectory(11, 4) != trajectory(11, 5)
    print("✓ identical replay, distinct replications")
    print("\n" + "=" * 60)


def test_change_time_law():
    """Test mean change time 1/p under static assignment."""
    print("\n" + "=" * 60)
    print("Testing Change-Time Law")
    print("=" * 60)

    responses, change_point = table1()
    reps = 20_000
    thetas = []
    for replication in range(reps):
        engine = TrialEngine(responses, change_point, seed=5, replication=replication)
        while engine.change_time is None:
            engine.step(1)
        thetas.append(engine.change_time)

    mean = math.fsum(thetas) / reps
    se = math.sqrt((1 - 0.1) / 0.1 ** 2 / reps)
    print(f"mean Theta = {mean:.3f} (target 10, SE {se:.3f})")
    assert abs(mean - 10.0) < 3 * se
    print("\n" + "=" * 60)


def test_response_marginals():
    """Test pre-change response frequencies."""
    print("\n" + "=" * 60)
    print("Testing Response Marginals")
    print("=" * 60)

    responses, change_point = table1()
    engine = TrialEngine(responses, change_point, seed=9, max_horizon=5_000)
    ys = [engine.step(3)[0] for _ in range(5_000)]
    freq = sum(ys) / len(ys)
    bound = 3 * math.sqrt(0.25 * 0.75 / len(ys))
    print(f"empirical {freq:.4f} vs f_3 = 0.25")
    assert abs(freq - 0.25) < bound
    print("\n" + "=" * 60)


def test_model_file():
    """Test model-file parsing and diagnostics."""
    print("\n" + "=" * 60)
    print("Testing Model Files")
    print("=" * 60)

    bundle = load_model_file(MODELS_DIR / "table1.yaml")
    assert bundle.name == "table1"
    assert bundle.n_treatments == 3
    assert bundle.change_point.is_markovian
    assert bundle.procedure is not None and bundle.procedure.variant == "proposed"

    warmup = load_model_file(MODELS_DIR / "warmup.yaml")
    assert not warmup.change_point.is_markovian
    assert warmup.change_point.zeta(1) == 0.05

    typo = (
        "treatments:\n"
        "  - {family: bernoulli, f: 0.45}\n"
        "change_point:\n"
        "  prior: 0.0\n"
        "  markovian: {p: [0.1]}\n"
        "  typo: 3\n"
    )
    try:
        parse_model_text(typo)
    except ConfigError as e:
        print(f"✓ {e}")
        assert e.key == "change_point.typo"
        assert e.line == 6
    else:
        raise AssertionError("unknown key accepted")

    broken = [
        "treatments: [unclosed\n",
        "treatments:\n  - {family: bernoulli, f: 0.5}\nchange_point: {markovian: {p: [0.1]}}\n",
        "treatments:\n  - {family: bernoulli, f: 0.4}\nchange_point: {markovian: {p: [0.1, 0.2]}}\n",
        "- just a list\n",
    ]
    for text in broken:
        try:
            parse_model_text(text)
        except ConfigError as e:
            print(f"✓ {e}")
        else:
            raise AssertionError(f"malformed file accepted: {text!r}")

    print("\n" + "=" * 60)


def main():
    """Run all model tests."""
    print("\n" + "=" * 60)
    print("MODEL TESTS")
    print("=" * 60)

    try:
        test_transition_prob()
        test_transition_rules()
        test_model_validation()
        test_kl_divergences()
        test_engine_dynamics()
        test_unreachable_change_time()
        test_engine_determinism()
        test_change_time_law()
        test_response_marginals()
        test_model_file()

        print("\n" + "=" * 60)
        print("All model tests completed!")
        print("=" * 60 + "\n")

    except Exception as e:
        logger.error(f"Test failed: {str(e)}", exc_info=True)
        raise


if __name__ == "__main__":
    main()
