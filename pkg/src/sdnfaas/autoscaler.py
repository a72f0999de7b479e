"""Threshold autoscaling of function replica pools.

Each evaluation estimates the pool wait W_m and adds one cold-starting replica
when ``W_m >= threshold``.  The estimate is either the M/G/n formula fed with a
sliding-window arrival rate, or the mean of recently measured queueing waits.
Scale-down is an opt-in extension evaluated once per slot.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass

from .errors import NoReplica, Unstable
from .queueing import MgnMode, mgn_wait
from .workload import ServiceDistribution


class Evaluation(str, enum.Enum):
    PER_EVENT = "per_event"
    PER_SLOT = "per_slot"


class Estimator(str, enum.Enum):
    ANALYTIC = "analytic_from_measured_rate"
    MEASURED = "measured_wait"


class Action(str, enum.Enum):
    NONE = "none"
    UP = "up"
    DOWN = "down"
    SATURATED = "saturated"


@dataclass(frozen=True)
class AutoscalerPolicy:
    enabled: bool = False
    threshold: float = 0.05
    evaluation: Evaluation = Evaluation.PER_EVENT
    estimator: Estimator = Estimator.ANALYTIC
    window: float | None = None  # seconds; None means one slot length
    scale_down_enabled: bool = False
    hysteresis: float = 0.1
    cooldown: int = 0
    min_replicas: int = 0
    on_demand_launch: bool = True
    idle_timeout: float | None = None
    mode: MgnMode = MgnMode.GENERAL

    def __post_init__(self):
        object.__setattr__(self, "evaluation", Evaluation(self.evaluation))
        object.__setattr__(self, "estimator", Estimator(self.estimator))
        object.__setattr__(self, "mode", MgnMode(self.mode))
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")
        if self.cooldown < 0:
            raise ValueError("cooldown must be >= 0")
        if not 0 <= self.hysteresis < 1:
            raise ValueError("hysteresis must lie in [0, 1)")
        if self.window is not None and not self.window > 0:
            raise ValueError("window must be positive")
        if self.idle_timeout is not None and not self.idle_timeout > 0:
            raise ValueError("idle_timeout must be positive")


@dataclass(frozen=True)
class ScalingDecision:
    action: Action
    wait_estimate: float
    replicas_after: int


class SlidingWindow:
    """Timestamps (and optional values) seen in the last ``width`` seconds."""

    __slots__ = ("width", "_times", "_values", "_sum")

    def __init__(self, width: float):
        self.width = width
        self._times: deque[float] = deque()
        self._values: deque[float] = deque()
        self._sum = 0.0

    def add(self, t: float, value: float = 0.0) -> None:
        self._times.append(t)
        self._values.append(value)
        self._sum += value

    def _trim(self, now: float) -> None:
        edge = now - self.width
        times, values = self._times, self._values
        while times and times[0] <= edge:
            times.popleft()
            self._sum -= values.popleft()

    def rate(self, now: float) -> float | None:
        """Events per second over the window; None until a full window has elapsed."""
        if now < self.width:
            return None
        self._trim(now)
        return len(self._times) / self.width

    def mean(self, now: float) -> float | None:
        self._trim(now)
        if not self._values:
            return None
        return self._sum / len(self._values)


def pool_wait(
    rate: float, service: ServiceDistribution, n: int, mode: MgnMode = MgnMode.GENERAL
) -> float:
    """Steady-state wait used for scaling; saturated or empty pools read as infinite."""
    try:
        return mgn_wait(rate, service, n, mode)
    except (Unstable, NoReplica):
        return math.inf


def autoscale_step(
    n: int,
    n_max: int,
    policy: AutoscalerPolicy,
    tau: int,
    service: ServiceDistribution,
    *,
    rate: float | None = None,
    measured_wait: float | None = None,
    last_scale_slot: int | None = None,
    can_grow: bool = True,
    phase: Evaluation = Evaluation.PER_EVENT,
) -> ScalingDecision:
    """Decide one scaling step for a pool currently holding ``n`` replicas.

    Scale-down is only considered on slot-boundary evaluations, and only when the
    pool would still meet ``threshold * (1 - hysteresis)`` with one replica fewer.
    """
    if policy.estimator is Estimator.MEASURED and measured_wait is not None:
        wait = measured_wait
    elif rate is not None:
        wait = pool_wait(rate, service, n, policy.mode)
    else:
        return ScalingDecision(Action.NONE, math.nan, n)

    cooled = last_scale_slot is None or tau - last_scale_slot >= policy.cooldown
    if wait >= policy.threshold:
        if n >= n_max or not can_grow:
            return ScalingDecision(Action.SATURATED, wait, n)
        if cooled:
            return ScalingDecision(Action.UP, wait, n + 1)
        return ScalingDecision(Action.NONE, wait, n)

    if (
        phase is Evaluation.PER_SLOT
        and policy.scale_down_enabled
        and rate is not None
        and n > policy.min_replicas
        and cooled
    ):
        smaller = pool_wait(rate, service, n - 1, policy.mode) if n > 1 else (
            0.0 if rate == 0 else math.inf
        )
        if smaller < policy.threshold * (1.0 - policy.hysteresis):
            return ScalingDecision(Action.DOWN, wait, n - 1)
    return ScalingDecision(Action.NONE, wait, n)
