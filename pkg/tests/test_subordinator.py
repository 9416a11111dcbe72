"""Truncated stable subordinator: sampling, crossing events, arcsine law."""

import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from clockproc.errors import (
    BudgetError,
    HorizonError,
    ParameterValidationError,
)
from clockproc.seeding import keyed_generator
from clockproc.subordinator import (
    KSResult,
    PowerLawLevyMeasure,
    SubordinatorPath,
    arcsine_cdf,
    crossing_probability,
    crossing_probability_batch,
    extend_path,
    ks_statistic,
    sample_path,
    sample_totals,
    truncated_laplace_exponent,
    write_path_csv,
)


def measure(amplitude=1.0, alpha=0.5):
    return PowerLawLevyMeasure(amplitude=amplitude, alpha=alpha)


# --- the jump measure -----------------------------------------------------


def test_measure_validation_and_tail():
    with pytest.raises(ParameterValidationError):
        PowerLawLevyMeasure(amplitude=0.0, alpha=0.5)
    with pytest.raises(ParameterValidationError):
        PowerLawLevyMeasure(amplitude=1.0, alpha=1.0)
    m = measure(2.0, 0.3)
    assert m.tail(1.0) == pytest.approx(2.0)
    assert m.tail(8.0) == pytest.approx(2.0 * 8.0**-0.3)


def test_truncated_mean_rate_matches_quadrature():
    """The omitted sub-cutoff mass rate integrates u * density over (0, c]."""
    m = measure(1.7, 0.3)
    for c in (0.01, 0.1, 1.0):
        integral, _ = integrate.quad(
            lambda u: u * m.amplitude * m.alpha * u ** (-m.alpha - 1.0), 0.0, c
        )
        assert m.truncated_mean_rate(c) == pytest.approx(integral, rel=1e-9)
    assert m.small_jump_mean() == pytest.approx(m.truncated_mean_rate(1.0))
    with pytest.raises(ParameterValidationError):
        m.truncated_mean_rate(0.0)


# --- path sampling --------------------------------------------------------


def test_sample_path_deterministic_and_structured():
    m = measure(1.0, 0.5)
    a = sample_path(m, 10.0, 0.01, keyed_generator(5))
    b = sample_path(m, 10.0, 0.01, keyed_generator(5))
    assert np.array_equal(a.times, b.times) and np.array_equal(a.sizes, b.sizes)
    assert np.all(np.diff(a.times) >= 0)
    assert np.all((a.times >= 0) & (a.times <= 10.0))
    assert np.all(a.sizes > 0.01)
    assert a.cutoff == 0.01 and a.horizon == 10.0


def test_sample_path_poisson_count_and_uniform_times():
    m = measure(1.0, 0.5)
    horizon, cutoff = 5.0, 0.04
    lam = horizon * float(m.tail(cutoff))  # 25 expected jumps per path
    rng = keyed_generator(6)
    counts, all_times = [], []
    for _ in range(200):
        p = sample_path(m, horizon, cutoff, rng)
        counts.append(len(p.times))
        all_times.append(p.times)
    total = sum(counts)
    assert abs(total - 200 * lam) < 4.0 * math.sqrt(200 * lam)
    # count variance equals the mean for a Poisson law (loose 4 sigma check)
    var = np.var(counts, ddof=1)
    assert abs(var - lam) < 4.0 * lam * math.sqrt(2.0 / 199)
    ks = ks_statistic(np.concatenate(all_times) / horizon, lambda x: x)
    assert ks.p_value > 1e-4


def test_sample_path_pareto_sizes():
    m = measure(1.0, 0.3)
    p = sample_path(m, 400.0, 0.5, keyed_generator(7))
    n = len(p.sizes)
    assert n > 300  # ~492 expected
    # P(size > 2*cutoff) = 2^(-alpha) conditionally on exceeding the cutoff
    target = 2.0**-0.3
    frac = float(np.mean(p.sizes > 1.0))
    assert abs(frac - target) < 4.0 * math.sqrt(target * (1 - target) / n)


def test_sample_path_budget_guard():
    with pytest.raises(BudgetError):
        sample_path(measure(1.0, 0.5), 1.0, 1e-20, keyed_generator(1))
    with pytest.raises(ParameterValidationError):
        sample_path(measure(), 0.0, 0.1, keyed_generator(1))
    with pytest.raises(ParameterValidationError):
        sample_path(measure(), 1.0, -0.1, keyed_generator(1))


def test_extend_path_keeps_prefix():
    m = measure(1.0, 0.5)
    rng = keyed_generator(8)
    p = sample_path(m, 4.0, 0.05, rng)
    q = extend_path(p, 9.0, rng)
    k = len(p.times)
    assert q.horizon == 9.0
    assert np.array_equal(q.times[:k], p.times)
    assert np.array_equal(q.sizes[:k], p.sizes)
    assert np.all(q.times[k:] > 4.0) and np.all(q.times[k:] <= 9.0)
    with pytest.raises(ParameterValidationError):
        extend_path(p, 4.0, rng)


def test_path_values_and_supremum():
    m = measure(1.0, 0.5)
    path = SubordinatorPath(
        measure=m, horizon=10.0, cutoff=0.25,
        times=np.array([1.0, 3.0]), sizes=np.array([2.0, 0.5]),
    )
    rate = m.truncated_mean_rate(0.25)
    assert np.allclose(path.values(compensated=False), [2.0, 2.5])
    assert np.allclose(path.values(True), [2.0 + rate * 1.0, 2.5 + rate * 3.0])
    assert path.supremum(False) == pytest.approx(2.5)
    assert path.supremum(True) == pytest.approx(2.5 + rate * 10.0)
    assert path.truncation_bias_bound == pytest.approx(rate * 10.0)
    assert path.jumps == [(1.0, 2.0), (3.0, 0.5)]
    empty = SubordinatorPath(
        measure=m, horizon=2.0, cutoff=0.25, times=np.array([]), sizes=np.array([])
    )
    assert empty.supremum(True) == pytest.approx(rate * 2.0)
    assert empty.values(True).size == 0


def test_write_path_csv(tmp_path):
    p = sample_path(measure(), 2.0, 0.1, keyed_generator(9))
    out = tmp_path / "path.csv"
    write_path_csv(p, out)
    lines = out.read_text().splitlines()
    assert lines[0] == "t_k,xi_k"
    assert len(lines) == 1 + len(p.times)


def test_sample_totals_laplace_transform():
    """E exp(-v S(T)) = exp(-T * truncated exponent), 4 sigma at 4000 paths."""
    m = measure(1.0, 0.5)
    horizon, cutoff, v = 1.0, 0.01, 1.0
    totals = sample_totals(m, horizon, cutoff, 4000, keyed_generator(10))
    w = np.exp(-v * totals)
    target = math.exp(-horizon * truncated_laplace_exponent(m, cutoff, v))
    se = float(w.std(ddof=1)) / math.sqrt(len(w))
    assert abs(float(w.mean()) - target) < 4.0 * se


def test_sample_totals_compensation_is_a_constant_shift():
    m = measure(1.0, 0.5)
    raw = sample_totals(m, 2.0, 0.05, 50, keyed_generator(11))
    comp = sample_totals(m, 2.0, 0.05, 50, keyed_generator(11), compensated=True)
    shift = m.truncated_mean_rate(0.05) * 2.0
    assert np.allclose(comp, raw + shift, rtol=1e-12)
    with pytest.raises(BudgetError):
        sample_totals(m, 1.0, 1e-18, 10, keyed_generator(1))


# --- arcsine law ----------------------------------------------------------


def test_arcsine_cdf_half_is_classical():
    xs = np.linspace(0.0, 1.0, 21)
    classical = (2.0 / math.pi) * np.arcsin(np.sqrt(xs))
    assert np.allclose(arcsine_cdf(0.5, xs), classical, atol=1e-12)


def test_arcsine_cdf_direct_quadrature():
    """Independent route: the density sin(pi a)/pi * u^(a-1) (1-u)^(-a)."""
    for alpha in (0.3, 0.7):
        for x in (0.2, 0.5, 0.8):
            integral, _ = integrate.quad(
                lambda u: u ** (alpha - 1.0) * (1.0 - u) ** (-alpha), 0.0, x
            )
            direct = math.sin(math.pi * alpha) / math.pi * integral
            assert arcsine_cdf(alpha, x) == pytest.approx(direct, abs=1e-9)


def test_arcsine_cdf_endpoints_and_validation():
    assert arcsine_cdf(0.3, 0.0) == 0.0
    assert arcsine_cdf(0.3, 1.0) == 1.0
    assert isinstance(arcsine_cdf(0.3, 0.5), float)
    with pytest.raises(ParameterValidationError):
        arcsine_cdf(1.0, 0.5)
    with pytest.raises(ParameterValidationError):
        arcsine_cdf(0.3, 1.5)


def test_arcsine_self_sample_ks():
    """Inverse-transform draws from the law must pass their own KS test."""
    rng = keyed_generator(12)
    for alpha in (0.3, 0.5):
        u = rng.uniform(size=2000)
        draws = special.betaincinv(alpha, 1.0 - alpha, u)
        ks = ks_statistic(draws, lambda x: arcsine_cdf(alpha, x))
        bound = special.kolmogi(2.0 * stats.norm.sf(4.0))
        assert math.sqrt(ks.sample_size) * ks.statistic < bound


# --- crossing events ------------------------------------------------------


def hand_path(times, sizes, horizon=10.0, cutoff=0.25, alpha=0.5):
    return SubordinatorPath(
        measure=measure(1.0, alpha), horizon=horizon, cutoff=cutoff,
        times=np.asarray(times, dtype=np.float64), sizes=np.asarray(sizes, dtype=np.float64),
    )


def test_crossing_probability_hand_cases():
    # uncompensated: post values [5, 5.3]
    p = hand_path([1.0, 2.0], [5.0, 0.3])
    assert crossing_probability(p, 2.0, 2.0, compensated=False) == 1  # jump over (2,4)
    assert crossing_probability(p, 4.9, 0.3, compensated=False) == 0  # lands inside (4.9,5.2)
    assert crossing_probability(p, 5.0, 0.1, compensated=False) == 1  # second jump straddles
    assert crossing_probability(p, 3.0, 0.0, compensated=False) == 1  # empty interval
    with pytest.raises(HorizonError):
        crossing_probability(p, 5.0, 1.0, compensated=False)  # supremum 5.3 <= 6
    with pytest.raises(ParameterValidationError):
        crossing_probability(p, -1.0, 1.0)


def test_crossing_probability_drift_crosses_after_last_jump():
    # compensated path keeps climbing linearly after its only jump
    p = hand_path([1.0], [1.0], horizon=50.0, cutoff=0.25)
    rate = p.compensation_rate
    level = 1.0 + rate * 25.0  # reached by drift at time ~25, after the jump
    assert crossing_probability(p, level, rate, compensated=True) == 0


def test_crossing_batch_agrees_with_scalar():
    m = measure(1.0, 0.5)
    rng = keyed_generator(13)
    paths = [sample_path(m, 4.0, 0.05, rng) for _ in range(300)]
    max_jumps = max(len(p.times) for p in paths)
    times = np.full((300, max_jumps), np.inf)
    sizes = np.zeros((300, max_jumps))
    counts = np.zeros(300, dtype=np.int64)
    for i, p in enumerate(paths):
        k = len(p.times)
        counts[i] = k
        times[i, :k] = p.times
        sizes[i, :k] = p.sizes
    drift = m.truncated_mean_rate(0.05)
    for t, s in ((1.0, 1.0), (2.0, 0.5), (0.3, 3.0)):
        batch = crossing_probability_batch(times, sizes, counts, drift, t, s)
        for i, p in enumerate(paths):
            try:
                scalar = crossing_probability(p, t, s, compensated=True)
            except HorizonError:
                # the batch form, which ignores drift past the last jump, must
                # also be undecided here
                assert batch[i] == -1
                continue
            # batch may be conservatively undecided, but never wrong
            assert batch[i] in (-1, scalar)
        assert np.any(batch >= 0)


# --- Laplace exponent and KS helper ---------------------------------------


def test_truncated_laplace_exponent_limits():
    m = measure(1.3, 0.3)
    assert truncated_laplace_exponent(m, 0.1, 0.0) == 0.0
    values = [truncated_laplace_exponent(m, 0.1, v) for v in (0.5, 1.0, 2.0, 4.0)]
    assert all(b > a for a, b in zip(values, values[1:]))
    # cutoff -> 0 recovers the full stable exponent amplitude*Gamma(1-a)*v^a
    for v in (0.7, 2.0):
        full = 1.3 * math.gamma(0.7) * v**0.3
        got = truncated_laplace_exponent(m, 1e-9, v)
        assert got == pytest.approx(full, rel=1e-5)
    with pytest.raises(ParameterValidationError):
        truncated_laplace_exponent(m, 0.1, -1.0)


def test_ks_statistic_hand_values():
    r = ks_statistic([0.5], lambda x: np.asarray(x))
    assert r == KSResult(statistic=0.5, p_value=r.p_value, sample_size=1)
    r2 = ks_statistic([0.1, 0.9], lambda x: np.asarray(x))
    assert r2.statistic == pytest.approx(0.4)
    assert r2.p_value == pytest.approx(float(special.kolmogorov(math.sqrt(2) * 0.4)))
    with pytest.raises(ParameterValidationError):
        ks_statistic([], lambda x: np.asarray(x))
    with pytest.raises(ParameterValidationError):
        ks_statistic([0.1, 0.2], lambda x: 0.5)
