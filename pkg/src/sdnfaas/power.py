"""Per-slot server power: idle + quadratic dynamic term + cold container starts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import OverCapacity

# effective switched-capacitance order common in edge offloading models; not a fitted value
DEFAULT_ETA = 1e-26


@dataclass(frozen=True)
class ServerPowerParams:
    idle_power: float
    gamma1: float
    gamma2: float
    cpu_freq: float
    cold_start_delay: float
    max_containers: int
    eta: float = DEFAULT_ETA
    core_count: int = 1
    id: int = 1

    def __post_init__(self):
        for name in ("idle_power", "cpu_freq", "cold_start_delay"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive")
        for name in ("gamma1", "gamma2", "eta"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be non-negative")
        if self.max_containers < 1 or self.core_count < 1:
            raise ValueError("max_containers and core_count must be >= 1")

    @property
    def cold_unit(self) -> float:
        """eta F^3 D for a single container: the per-indicator cold term."""
        return self.eta * self.cpu_freq**3 * self.cold_start_delay


@dataclass(frozen=True)
class ColdStartPower:
    """Cold-start term reported both as printed (W) and as energy spread over a slot.

    ``power`` is eta F^3 C D taken literally.  Read dimensionally it is an energy
    in joules, so ``energy`` repeats the number and ``slot_average_power``
    divides it by the slot length.
    """

    count: int
    power: float
    energy: float
    slot_average_power: float | None


def _check_utilization(u: float) -> None:
    if not (0.0 <= u <= 1.0):
        raise ValueError(f"utilization {u!r} outside [0, 1]")


def dynamic_power(u: float, params: ServerPowerParams) -> float:
    _check_utilization(u)
    return params.gamma1 * u + params.gamma2 * u * u


def warm_power(u: float, params: ServerPowerParams) -> float:
    # left-to-right Pidle + g1 U + g2 U^2, so the sum rounds the same way as the formula
    _check_utilization(u)
    return params.idle_power + params.gamma1 * u + params.gamma2 * u * u


def cold_start_power(
    count: int, params: ServerPowerParams, slot_length: float | None = None
) -> ColdStartPower:
    if count < 0:
        raise ValueError("cold start count must be non-negative")
    if count > params.max_containers:
        raise OverCapacity(f"{count} cold starts exceed {params.max_containers} containers")
    value = params.cold_unit * count
    avg = value / slot_length if slot_length else None
    return ColdStartPower(count, value, value, avg)


@dataclass
class SlotPowerBreakdown:
    tau: int
    server_id: int
    utilization: float
    idle: float
    dynamic: float
    warm: float
    cold_flags: list[bool] = field(default_factory=list)
    cold_total: float = 0.0
    total: float = 0.0
    energy: float = 0.0
    duration: float = 0.0
    cold_energy_view: ColdStartPower | None = None

    @property
    def cold_count(self) -> int:
        return sum(self.cold_flags)


def total_server_power(
    u: float,
    cold_flags: list[bool],
    params: ServerPowerParams,
    *,
    tau: int = 1,
    slot_length: float | None = None,
) -> SlotPowerBreakdown:
    """Warm power plus one eta F^3 D term per container flagged as cold-starting."""
    if len(cold_flags) != params.max_containers:
        raise ValueError(
            f"expected {params.max_containers} cold flags, got {len(cold_flags)}"
        )
    dyn = dynamic_power(u, params)
    warm = warm_power(u, params)
    flags = [bool(x) for x in cold_flags]
    cold = params.cold_unit * sum(flags)
    total = warm + cold
    return SlotPowerBreakdown(
        tau=tau,
        server_id=params.id,
        utilization=u,
        idle=params.idle_power,
        dynamic=dyn,
        warm=warm,
        cold_flags=flags,
        cold_total=cold,
        total=total,
        energy=total * slot_length if slot_length else 0.0,
        duration=slot_length or 0.0,
        cold_energy_view=cold_start_power(sum(flags), params, slot_length),
    )


def cold_flags_for(count: int, params: ServerPowerParams) -> list[bool]:
    if count > params.max_containers:
        raise OverCapacity(f"{count} cold starts exceed {params.max_containers} containers")
    return [i < count for i in range(params.max_containers)]
