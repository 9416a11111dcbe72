"""Two-time correlation curves and trap localisation."""

import csv
import math

import numpy as np
import pytest

from clockproc.aging import (
    correlation_indicator,
    estimate_aging_curve,
    trap_localization_diagnostic,
)
from clockproc.chain import simulate_segment
from clockproc.environment import Environment, SpinConfig
from clockproc.errors import (
    BudgetError,
    DimensionMismatchError,
    HorizonError,
    ParameterValidationError,
)
from clockproc.seeding import ReplicaStreams
from clockproc.subordinator import arcsine_cdf

pytestmark = pytest.mark.filterwarnings("ignore:block length")


def test_correlation_indicator_trivial_cases():
    env = Environment.degenerate(6, 3, 0.0, 0.5)
    seg = simulate_segment(env, SpinConfig(6, 0), 2000, ReplicaStreams.from_seed(1))
    # epsilon = 2 accepts every overlap in [-1, 1]
    assert correlation_indicator(env, seg, 0.5, 0.5, 2.0, time_unit=1.0) == 1
    # s so small that the process cannot have moved
    tiny = float(seg.increments[0]) / 4.0
    assert correlation_indicator(env, seg, 0.0, tiny / env.time_scale, 0.25) == 1
    with pytest.raises(ParameterValidationError):
        correlation_indicator(env, seg, -0.1, 0.5, 0.25)
    with pytest.raises(ParameterValidationError):
        correlation_indicator(env, seg, 0.1, 0.5, 0.0)
    with pytest.raises(HorizonError):
        correlation_indicator(env, seg, 1.0, 10.0, 0.25, time_unit=seg.horizon)


def test_correlation_indicator_deterministic():
    env = Environment.create(6, 3, 2.0, 1.5, seed=4)
    seg = simulate_segment(env, SpinConfig(6, 3), 5000, ReplicaStreams.from_seed(2))
    vals = [correlation_indicator(env, seg, 0.3, 0.7, 0.25, time_unit=1.0) for _ in range(3)]
    assert len(set(vals)) == 1


def test_aging_curve_prediction_column_is_arcsine():
    """The predicted column must be the arcsine CDF at t/(t+s), one source."""
    env = Environment.degenerate(6, 3, 0.0, 0.5)
    pairs = [(1.0, 3.0), (1.0, 1.0), (3.0, 1.0)]
    curve = estimate_aging_curve(
        env, pairs, 0.25, replicas=12, master_seed=5, time_unit=10.0, prediction_alpha=0.3
    )
    for (t, s), ratio, pred in zip(curve.pairs, curve.ratios, curve.predicted):
        assert ratio == pytest.approx(t / (t + s))
        assert pred == arcsine_cdf(0.3, ratio)
    assert curve.prediction_alpha == 0.3
    assert curve.replicas == 12


def test_aging_curve_determinism_and_thread_invariance():
    env = Environment.degenerate(6, 3, 0.0, 0.5)
    pairs = [(1.0, 1.0), (2.0, 1.0)]
    kwargs = dict(epsilon=0.25, replicas=16, master_seed=7, time_unit=8.0, prediction_alpha=0.5)
    a = estimate_aging_curve(env, pairs, **kwargs)
    b = estimate_aging_curve(env, pairs, **kwargs)
    c = estimate_aging_curve(env, pairs, threads=3, **kwargs)
    assert a == b == c


def test_aging_curve_budget_and_censoring():
    env = Environment.degenerate(6, 3, 0.0, 0.5)
    # upfront refusal when the horizon obviously exceeds the step budget
    with pytest.raises(BudgetError):
        estimate_aging_curve(
            env, [(1.0, 1.0)], 0.25, replicas=4, master_seed=1, time_unit=1e9, step_cap=1000
        )
    # a cap just above the expected step count censors some replicas
    curve = estimate_aging_curve(
        env,
        [(1.0, 1.0), (10.0, 6.0)],
        0.25,
        replicas=24,
        master_seed=3,
        time_unit=40.0,
        step_cap=650,  # expected ~640 unit holds for the late pair
        initial_steps=64,
        prediction_alpha=0.5,
    )
    for comp, cens in zip(curve.completed, curve.censored):
        assert comp + cens == 24
    assert curve.censored[0] == 0  # the early pair always fits
    assert curve.censored[1] > 0  # the late one cannot always be reached
    assert not math.isnan(curve.estimates[0])


def test_aging_curve_input_validation():
    env = Environment.degenerate(6, 3, 0.0, 0.5)
    with pytest.raises(ParameterValidationError):
        estimate_aging_curve(env, [], 0.25, replicas=4, master_seed=1)
    with pytest.raises(ParameterValidationError):
        estimate_aging_curve(env, [(1.0, 0.0)], 0.25, replicas=4, master_seed=1, time_unit=1.0)
    with pytest.raises(ParameterValidationError):
        estimate_aging_curve(env, [(1.0, 1.0)], 0.25, replicas=0, master_seed=1, time_unit=1.0)
    with pytest.raises(DimensionMismatchError):
        estimate_aging_curve(
            env, [(1.0, 1.0)], 0.25, replicas=4, master_seed=1, time_unit=1.0,
            start=SpinConfig(5, 0),
        )
    # beta = 0 has no tail exponent: the unit must be explicit and finite
    with pytest.raises(ParameterValidationError):
        estimate_aging_curve(env, [(1.0, 1.0)], 0.25, replicas=4, master_seed=1, time_unit=0.0)


def test_aging_curve_fixed_start_changes_result():
    env = Environment.create(6, 3, 2.0, 1.5, seed=9)
    pairs = [(0.5, 0.5)]
    kwargs = dict(epsilon=0.25, replicas=20, master_seed=11, time_unit=2.0)
    uniform = estimate_aging_curve(env, pairs, **kwargs)
    fixed = estimate_aging_curve(env, pairs, start=SpinConfig(6, 0), **kwargs)
    assert uniform.pairs == fixed.pairs
    # same seeds, different starts: the indicator draws genuinely differ
    assert uniform.estimates != fixed.estimates or uniform != fixed


def test_aging_curve_max_gap_and_csv(tmp_path):
    env = Environment.degenerate(6, 3, 0.0, 0.5)
    curve = estimate_aging_curve(
        env, [(1.0, 1.0), (2.0, 2.0)], 0.25, replicas=16, master_seed=13,
        time_unit=8.0, prediction_alpha=0.5,
    )
    gap = curve.max_absolute_gap
    assert 0.0 <= gap <= 1.0
    out = tmp_path / "aging.csv"
    curve.write_csv(out)
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "s", "ratio", "empirical", "stderr", "predicted",
                       "replicas", "censored"]
    assert len(rows) == 3
    assert float(rows[1][3]) == curve.estimates[0]
    assert "np.float64" not in out.read_text()


# --- trap localisation ----------------------------------------------------


def test_trap_diagnostic_beta_zero_is_untrapped():
    """Unit-mean holds spread a block's time over ~theta states: no trap."""
    env = Environment.degenerate(8, 3, 0.0, 0.5)
    theta = env.block_length
    seg = simulate_segment(env, SpinConfig(8, 0), 4 * theta + 1, ReplicaStreams.from_seed(17))
    for b in range(4):
        rep = trap_localization_diagnostic(env, seg, b)
        assert rep.untrapped
        assert rep.dominant_fraction < 0.35
        assert rep.ball_time_fraction >= rep.dominant_fraction
        assert 0 <= rep.dominant_state < (1 << 8)


def test_trap_diagnostic_finds_deep_trap_at_low_temperature():
    env = Environment.create(8, 3, 3.0, 2.7, seed=23)
    theta = env.block_length
    seg = simulate_segment(env, SpinConfig(8, 0), 6 * theta + 1, ReplicaStreams.from_seed(19))
    fractions = [
        trap_localization_diagnostic(env, seg, b).dominant_fraction for b in range(6)
    ]
    # at beta=3 the deepest visited state dominates most blocks outright
    assert max(fractions) > 0.5


def test_trap_diagnostic_validation_and_reentry_flag():
    env = Environment.degenerate(6, 3, 0.0, 0.5)
    theta = env.block_length
    seg = simulate_segment(env, SpinConfig(6, 0), theta + 1, ReplicaStreams.from_seed(21))
    rep = trap_localization_diagnostic(env, seg, 0, epsilon=2.0)
    # the ball with epsilon=2 is the whole cube: entered once, never exited
    assert rep.ball_time_fraction == pytest.approx(1.0)
    assert not rep.reentered
    with pytest.raises(ParameterValidationError):
        trap_localization_diagnostic(env, seg, -1)
    with pytest.raises(ParameterValidationError):
        trap_localization_diagnostic(env, seg, 2)
