"""Two-time correlation (aging) measurements of the time-changed walk.

The observable is the probability that the process sits in (nearly) the same
state at two rescaled times:

    C(t, s) = P( overlap(X(t * unit), X((t+s) * unit)) >= 1 - epsilon ),

with the observation time scale as the default unit.  In the trapping regime
this converges to the generalised arcsine law evaluated at t/(t+s); the
module estimates the curve over a grid of (t, s) pairs, attaches the
prediction, and provides a per-block localisation diagnostic that checks the
"one deep trap per block" picture directly on a trajectory.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .chain import TrajectorySegment, extend_segment, process_at_time, simulate_segment
from .environment import Environment, SpinConfig, overlap, overlap_to_reference
from .errors import BudgetError, DimensionMismatchError, ParameterValidationError
from .parallel import ordered_map
from .seeding import StreamFamily
from .subordinator import arcsine_cdf

__all__ = [
    "correlation_indicator",
    "AgingCurve",
    "estimate_aging_curve",
    "TrapReport",
    "trap_localization_diagnostic",
]


def correlation_indicator(
    env: Environment,
    segment: TrajectorySegment,
    t: float,
    s: float,
    epsilon: float,
    time_unit: float | None = None,
) -> int:
    """1 when the segment's process keeps overlap >= 1-epsilon between the two times.

    Times are in units of ``time_unit`` (default: the observation time
    scale).  Raises HorizonError when the segment is too short to place the
    later time.
    """
    if t < 0 or s < 0:
        raise ParameterValidationError("t and s must be nonnegative")
    if not 0 < epsilon <= 2:
        raise ParameterValidationError(f"epsilon must lie in (0, 2]; got {epsilon}")
    unit = env.time_scale if time_unit is None else float(time_unit)
    x = process_at_time(segment, env, t * unit)
    y = process_at_time(segment, env, (t + s) * unit)
    return int(overlap(x, y) >= 1.0 - epsilon)


@dataclass(frozen=True)
class AgingCurve:
    """Estimated two-time correlation over a grid of (t, s) pairs.

    Carries the spin count, replica budget, and master seed, which together
    with the environment's coupling seed re-run the measurement exactly.
    """

    pairs: tuple[tuple[float, float], ...]
    ratios: tuple[float, ...]
    estimates: tuple[float, ...]
    stderrs: tuple[float, ...]
    predicted: tuple[float, ...]
    completed: tuple[int, ...]
    censored: tuple[int, ...]
    n: int
    replicas: int
    epsilon: float
    time_unit: float
    prediction_alpha: float | None
    master_seed: int

    @property
    def max_absolute_gap(self) -> float:
        """Sup-norm distance between the measured curve and the prediction."""
        gaps = [
            abs(est - pred)
            for est, pred in zip(self.estimates, self.predicted)
            if not math.isnan(est)
        ]
        if not gaps:
            return math.nan
        return max(gaps)

    def write_csv(self, path) -> None:
        """Columns: t, s, ratio, empirical, stderr, predicted, replicas, censored.

        ``replicas`` is the count that actually contributed to the row (the
        budget minus that row's censored replicas).
        """
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(
                ["t", "s", "ratio", "empirical", "stderr", "predicted", "replicas", "censored"]
            )
            for (t, s), r, est, se, pred, comp, cens in zip(
                self.pairs,
                self.ratios,
                self.estimates,
                self.stderrs,
                self.predicted,
                self.completed,
                self.censored,
            ):
                writer.writerow(
                    [repr(t), repr(s), repr(r), repr(est), repr(se), repr(pred), comp, cens]
                )


def estimate_aging_curve(
    env: Environment,
    pairs,
    epsilon: float,
    replicas: int,
    master_seed: int,
    *,
    time_unit: float | None = None,
    prediction_alpha: float | None = None,
    step_cap: int = 100_000_000,
    initial_steps: int = 4096,
    threads: int = 1,
    start: SpinConfig | None = None,
) -> AgingCurve:
    """Monte Carlo aging curve over independent trajectory replicas.

    Each replica starts uniformly (or at ``start``, a non-stationary choice
    for exploratory runs), simulates until its clock passes the
    latest requested time (doubling the segment, which extends the existing
    path rather than resampling it), and contributes one indicator per (t, s)
    pair.  If already the expected number of steps to reach the horizon
    exceeds ``step_cap``, the run refuses upfront with a budget error;
    individual replicas that still hit the cap (required step counts are
    heavy-tailed) are censored for the unreached pairs and excluded from
    those averages, with censoring counts reported — never silently dropped.
    The predicted values evaluate the arcsine law at t/(t+s) with the
    environment's tail exponent unless ``prediction_alpha`` overrides it.
    """
    pair_list = [(float(t), float(s)) for t, s in pairs]
    if not pair_list:
        raise ParameterValidationError("need at least one (t, s) pair")
    for t, s in pair_list:
        if t < 0 or s <= 0:
            raise ParameterValidationError(f"need t >= 0 and s > 0; got (t, s)=({t}, {s})")
    if replicas < 1:
        raise ParameterValidationError("need at least one replica")
    unit = env.time_scale if time_unit is None else float(time_unit)
    if not (unit > 0 and math.isfinite(unit)):
        raise ParameterValidationError(f"time unit must be positive and finite; got {unit}")
    alpha = env.alpha if prediction_alpha is None else float(prediction_alpha)
    latest = max((t + s) for t, s in pair_list)
    needed = latest * unit
    # a-priori budget: covering clock time t*time_scale takes ~t*step_scale
    # steps; with unit holding rates (beta=0) it takes ~needed steps
    if env.step_scale is not None and math.isfinite(env.step_scale):
        expected_steps = latest * env.step_scale * unit / env.time_scale
    else:
        expected_steps = needed
    if expected_steps > step_cap:
        raise BudgetError(
            f"expected ~{expected_steps:.3g} steps to cover the horizon, above the "
            f"step cap {step_cap:.3g}; raise the cap or shorten the grid"
        )
    family = StreamFamily(master_seed, "aging")

    if start is not None and start.n != env.n:
        raise DimensionMismatchError(f"start has n={start.n}; environment has n={env.n}")

    def worker(i: int):
        streams = family.replica(i)
        origin = SpinConfig.random(env.n, streams.walk) if start is None else start
        segment = simulate_segment(env, origin, initial_steps, streams)
        while segment.horizon <= needed and segment.steps < step_cap:
            extra = min(segment.steps, step_cap - segment.steps)
            segment = extend_segment(env, segment, extra, streams)
        hits = np.zeros(len(pair_list), dtype=np.int64)
        valid = np.zeros(len(pair_list), dtype=np.int64)
        for j, (t, s) in enumerate(pair_list):
            if (t + s) * unit >= segment.horizon:
                continue  # censored at the step cap
            valid[j] = 1
            hits[j] = correlation_indicator(env, segment, t, s, epsilon, time_unit=unit)
        return hits, valid

    results = ordered_map(worker, replicas, threads)
    hits = np.sum([r[0] for r in results], axis=0)
    valid = np.sum([r[1] for r in results], axis=0)
    estimates, stderrs, predicted, ratios = [], [], [], []
    for j, (t, s) in enumerate(pair_list):
        ratio = t / (t + s)
        ratios.append(ratio)
        if valid[j] > 0:
            p = hits[j] / valid[j]
            estimates.append(float(p))
            stderrs.append(float(math.sqrt(p * (1.0 - p) / valid[j])))
        else:
            estimates.append(math.nan)
            stderrs.append(math.nan)
        predicted.append(float(arcsine_cdf(alpha, ratio)) if alpha is not None else math.nan)
    return AgingCurve(
        pairs=tuple(pair_list),
        ratios=tuple(ratios),
        estimates=tuple(estimates),
        stderrs=tuple(stderrs),
        predicted=tuple(predicted),
        completed=tuple(int(v) for v in valid),
        censored=tuple(int(replicas - v) for v in valid),
        n=env.n,
        replicas=replicas,
        epsilon=float(epsilon),
        time_unit=float(unit),
        prediction_alpha=None if alpha is None else float(alpha),
        master_seed=int(master_seed),
    )


@dataclass(frozen=True)
class TrapReport:
    """Localisation picture of one aggregation block of a trajectory."""

    block_index: int
    dominant_state: int
    dominant_fraction: float
    ball_time_fraction: float
    reentered: bool
    untrapped: bool
    epsilon: float
    threshold: float


def trap_localization_diagnostic(
    env: Environment,
    segment: TrajectorySegment,
    block_index: int,
    epsilon: float = 0.25,
    threshold: float = 0.5,
) -> TrapReport:
    """Check whether one block's time is dominated by a single trap.

    The candidate trap is the state of the block's single largest time
    increment; the report gives that increment's share of the block's
    physical time, the share of the whole overlap-(1-epsilon) ball around the
    trap, a flag for re-entry (the walk exited the ball and came back within
    the block), and an ``untrapped`` flag when the dominant share falls below
    ``threshold``.
    """
    if block_index < 0:
        raise ParameterValidationError(f"block index must be >= 0; got {block_index}")
    theta = env.block_length
    lo = 1 + block_index * theta
    hi = lo + theta
    if hi > len(segment.increments):
        raise ParameterValidationError(
            f"segment has {segment.steps} steps; block {block_index} needs {hi - 1}"
        )
    states = segment.states[lo:hi]
    increments = segment.increments[lo:hi]
    total = float(increments.sum())
    if not total > 0:
        raise ParameterValidationError("block carries no physical time")
    winner = int(np.argmax(increments))
    dominant_state = int(states[winner])
    dominant_fraction = float(increments[winner] / total)
    ball = overlap_to_reference(states, dominant_state, env.n) >= 1.0 - epsilon
    ball_time_fraction = float(increments[ball].sum() / total)
    entries = int(np.count_nonzero(np.diff(ball.astype(np.int8)) == 1)) + int(ball[0])
    return TrapReport(
        block_index=block_index,
        dominant_state=dominant_state,
        dominant_fraction=dominant_fraction,
        ball_time_fraction=ball_time_fraction,
        reentered=entries > 1,
        untrapped=dominant_fraction < threshold,
        epsilon=float(epsilon),
        threshold=float(threshold),
    )
