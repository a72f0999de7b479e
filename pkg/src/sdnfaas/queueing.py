"""Steady-state delay formulas for the controller -> gateway -> function-pool pipeline.

Controller: M/D/1 with service time phi/R.  Gateway: M/G/1 (Pollaczek-Khinchine).
Function pools: M/G/n two-moment approximation, whose exponential case is the
Erlang-C wait.  Every formula raises :class:`Unstable` instead of returning a
negative, infinite or NaN delay.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import Infeasible, NoReplica, Unstable
from .workload import ServiceDistribution

# loads with rho/n above this raise Unstable; (n - rho)^2 cancels badly past it
STABILITY_MARGIN = 1e-9


class MgnMode(str, enum.Enum):
    GENERAL = "general_eq7"
    PAPER_LITERAL = "paper_literal_eq8"


@dataclass(frozen=True)
class ChannelParams:
    bandwidth: float
    channel_gain: float
    tx_power: float
    noise_power: float
    packet_size: float

    def __post_init__(self):
        for name in ("bandwidth", "tx_power", "noise_power", "packet_size"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite")
        if not (self.channel_gain >= 0 and math.isfinite(self.channel_gain)):
            raise ValueError("channel_gain must be non-negative")


def wireless_rate(ch: ChannelParams) -> float:
    """Shannon rate B log2(1 + G w / sigma^2) in bit/s."""
    if not ch.bandwidth > 0 or not ch.noise_power > 0:
        raise ValueError("bandwidth and noise power must be positive")
    return ch.bandwidth * math.log2(1.0 + ch.channel_gain * ch.tx_power / ch.noise_power)


@dataclass(frozen=True)
class ControllerModel:
    channel: ChannelParams
    service_rate_override: float | None = None

    @property
    def service_rate(self) -> float:
        if self.service_rate_override is not None:
            return self.service_rate_override
        return wireless_rate(self.channel) / self.channel.packet_size

    @property
    def service_time(self) -> float:
        mu = self.service_rate
        return math.inf if mu == 0 else 1.0 / mu

    def load(self, total_rate: float) -> float:
        mu = self.service_rate
        return math.inf if mu == 0 else total_rate / mu


def _check_load(stage: str, rho: float, n: int = 1) -> None:
    if not math.isfinite(rho) or rho / n > 1.0 - STABILITY_MARGIN:
        raise Unstable(stage, rho, n)


def controller_latency(total_rate: float, mu: float) -> tuple[float, float]:
    """M/D/1 controller: (queueing wait, wait + transmission time)."""
    if total_rate < 0:
        raise ValueError("arrival rate must be non-negative")
    if not mu > 0:
        raise Unstable("controller", math.inf)
    rho = total_rate / mu
    _check_load("controller", rho)
    wait = rho / (2.0 * mu * (1.0 - rho))
    return wait, wait + 1.0 / mu


def mg1_wait(lam: float, sd: ServiceDistribution, stage: str = "gateway") -> float:
    """Pollaczek-Khinchine mean wait in queue."""
    if lam < 0:
        raise ValueError("arrival rate must be non-negative")
    rho = lam * sd.mean
    _check_load(stage, rho)
    return lam * sd.second_moment / (2.0 * (1.0 - rho))


def gateway_response(lam: float, sd: ServiceDistribution) -> float:
    return mg1_wait(lam, sd) + sd.mean


def event_processing_time(ts: float, tg: float) -> float:
    if ts < 0 or tg < 0:
        raise ValueError("stage delays must be non-negative")
    return ts + tg


def _log_erlang_ratio(rho: float, n: int) -> float:
    """log of  [rho^n / ((n-1)! (n-rho))] / D  with  D = sum_{i<n} rho^i/i! + rho^n/((n-1)!(n-rho)).

    Evaluated in log space with lgamma so the factorials cannot overflow.
    """
    log_rho = math.log(rho)
    log_tail = n * log_rho - math.lgamma(n) - math.log(n - rho)
    logs = [i * log_rho - math.lgamma(i + 1) for i in range(n)]
    logs.append(log_tail)
    top = max(logs)
    log_d = top + math.log(math.fsum(math.exp(v - top) for v in logs))
    return log_tail - log_d


def mgn_wait(
    lam: float,
    sd: ServiceDistribution,
    n: int,
    mode: MgnMode | str = MgnMode.GENERAL,
) -> float:
    """Mean wait in an n-replica pool.

    ``general_eq7`` uses both service moments:
        lam^n b2 b^(n-1) / (2 (n-1)! (n - rho)^2 D)
    ``paper_literal_eq8`` is the exponential-service form with an extra factor 2
    in the denominator,
        rho^n / (2 (n-1)! mu (n - rho)^2 D),
    so it returns half the Erlang-C wait.  Kept for comparison only.
    """
    mode = MgnMode(mode)
    if n != int(n) or n < 0:
        raise ValueError("replica count must be a non-negative integer")
    n = int(n)
    if n == 0:
        raise NoReplica("no running instance of the function")
    if lam < 0:
        raise ValueError("arrival rate must be non-negative")
    b = sd.mean
    rho = lam * b
    _check_load("function pool", rho, n)
    if lam == 0:
        return 0.0
    # lam^n b^(n-1) b2 == rho^n * b2 / b, so only rho is raised to the n-th power
    ratio = math.exp(_log_erlang_ratio(rho, n))
    if mode is MgnMode.GENERAL:
        return ratio * sd.second_moment / (2.0 * b * (n - rho))
    return ratio * b / (2.0 * (n - rho))


def function_response(
    lam: float, sd: ServiceDistribution, n: int, mode: MgnMode | str = MgnMode.GENERAL
) -> float:
    """Pool wait plus the mean service time of this function."""
    return mgn_wait(lam, sd, n, mode) + sd.mean


def total_latency(ts: float, tg: float, tf: float) -> float:
    if ts < 0 or tg < 0 or tf < 0:
        raise ValueError("stage delays must be non-negative")
    return ts + tg + tf


def function_utilization(lam: float, mu: float, n: int) -> float:
    if n < 1:
        raise NoReplica("utilization undefined without replicas")
    if not mu > 0:
        raise ValueError("service rate must be positive")
    u = lam / (n * mu)
    _check_load("function pool", u * n, n)
    return u


def min_replicas_for_threshold(
    lam: float,
    sd: ServiceDistribution,
    threshold: float,
    n_max: int,
    mode: MgnMode | str = MgnMode.GENERAL,
) -> int:
    """Smallest pool size whose steady-state wait is strictly below ``threshold``."""
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    rho = lam * sd.mean
    n = max(1, int(math.floor(rho)) + 1)
    while n <= n_max:
        try:
            if mgn_wait(lam, sd, n, mode) < threshold:
                return n
        except Unstable:
            pass
        n += 1
    raise Infeasible(n_max)


@dataclass
class StageDelays:
    controller_wait: float
    controller_ts: float
    gateway_wg: float
    gateway_tg: float
    tp: float
    wf: dict[int, float] = field(default_factory=dict)
    tf: dict[int, float] = field(default_factory=dict)
    total: dict[int, float] = field(default_factory=dict)
