"""Seeded event arrivals and service-time laws under a quasi-static slot model.

Randomness comes from numpy's PCG64 bit generator.  Every (seed, function id,
slot, purpose) tuple maps to its own ``SeedSequence`` spawn key, so the draws
of one slot never depend on the rates or draws of another slot, and a run is a
pure function of its configuration and seed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

MASK64 = (1 << 64) - 1


class StreamTag(enum.IntEnum):
    ARRIVALS = 0
    GATEWAY_SERVICE = 1
    FUNCTION_SERVICE = 2


def substream(seed: int, function_id: int, slot: int, tag: StreamTag) -> np.random.Generator:
    """Independent generator for one (function, slot, purpose) cell of a run."""
    ss = np.random.SeedSequence(entropy=seed & MASK64, spawn_key=(function_id, slot, int(tag)))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class TimeSlotGrid:
    slot_length: float
    slot_count: int

    def __post_init__(self):
        if not self.slot_length > 0:
            raise ValueError("slot_length must be positive")
        if int(self.slot_count) != self.slot_count or self.slot_count < 1:
            raise ValueError("slot_count must be a positive integer")

    @property
    def horizon(self) -> float:
        return self.slot_length * self.slot_count

    def check(self, tau: int) -> None:
        if not 1 <= tau <= self.slot_count:
            raise IndexError(f"slot {tau} outside 1..{self.slot_count}")

    def bounds(self, tau: int) -> tuple[float, float]:
        self.check(tau)
        return (tau - 1) * self.slot_length, tau * self.slot_length

    def slot_of(self, t: float) -> int:
        """Slot index containing time ``t`` (the final instant belongs to the last slot)."""
        return min(int(t // self.slot_length) + 1, self.slot_count)


class ServiceKind(str, enum.Enum):
    DETERMINISTIC = "deterministic"
    EXPONENTIAL = "exponential"
    GENERAL = "general"


@dataclass(frozen=True)
class ServiceDistribution:
    """Service-time law described by its first two moments.

    ``general`` laws are sampled from a two-moment match: a deterministic shift
    plus an exponential when the squared coefficient of variation is at most 1,
    and a balanced-means two-phase hyperexponential above 1.
    """

    kind: ServiceKind
    mean: float
    second_moment: float

    def __post_init__(self):
        object.__setattr__(self, "kind", ServiceKind(self.kind))
        b, b2 = self.mean, self.second_moment
        if not (b > 0 and math.isfinite(b)):
            raise ValueError("service mean must be positive and finite")
        if self.kind is ServiceKind.DETERMINISTIC and not math.isclose(b2, b * b, rel_tol=1e-12):
            raise ValueError("deterministic service requires second moment b^2")
        if self.kind is ServiceKind.EXPONENTIAL and not math.isclose(b2, 2 * b * b, rel_tol=1e-12):
            raise ValueError("exponential service requires second moment 2 b^2")
        if b2 < b * b * (1 - 1e-12):
            raise ValueError("second moment must be at least mean^2")

    @classmethod
    def deterministic(cls, mean: float) -> "ServiceDistribution":
        return cls(ServiceKind.DETERMINISTIC, mean, mean * mean)

    @classmethod
    def exponential(cls, mean: float) -> "ServiceDistribution":
        return cls(ServiceKind.EXPONENTIAL, mean, 2.0 * mean * mean)

    @classmethod
    def general(cls, mean: float, second_moment: float) -> "ServiceDistribution":
        return cls(ServiceKind.GENERAL, mean, second_moment)

    @property
    def rate(self) -> float:
        return 1.0 / self.mean

    @property
    def scv(self) -> float:
        return max(self.second_moment / (self.mean * self.mean) - 1.0, 0.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        b = self.mean
        if self.kind is ServiceKind.DETERMINISTIC:
            return np.full(size, b)
        if self.kind is ServiceKind.EXPONENTIAL:
            return rng.exponential(b, size)
        c2 = self.scv
        if c2 <= 1.0:
            spread = math.sqrt(c2) * b
            return (b - spread) + (rng.exponential(spread, size) if spread > 0 else np.zeros(size))
        # balanced means: p1/mu1 == p2/mu2 == b/2
        p1 = 0.5 * (1.0 + math.sqrt((c2 - 1.0) / (c2 + 1.0)))
        pick = rng.random(size) < p1
        draws = rng.exponential(1.0, size)
        return np.where(pick, draws * (b / (2 * p1)), draws * (b / (2 * (1 - p1))))


def sample_service(sd: ServiceDistribution, rng: np.random.Generator) -> float:
    return float(sd.sample(rng, 1)[0])


@dataclass(frozen=True)
class FunctionClass:
    id: int
    lambda_per_slot: tuple[float, ...]
    service: ServiceDistribution
    topics: tuple[str, ...] = ()
    replicas: int = 1
    n_max: int = 10
    packet_size: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "lambda_per_slot", tuple(float(x) for x in self.lambda_per_slot))
        if not self.topics:
            object.__setattr__(self, "topics", (f"f{self.id}",))
        else:
            object.__setattr__(self, "topics", tuple(self.topics))
        if self.id < 1:
            raise ValueError("function id must be >= 1")
        if any(not (x >= 0 and math.isfinite(x)) for x in self.lambda_per_slot):
            raise ValueError("arrival rates must be finite and non-negative")
        if self.replicas < 0 or self.n_max < 1:
            raise ValueError("replicas must be >= 0 and n_max >= 1")

    @property
    def topic(self) -> str:
        return self.topics[0]

    def rate(self, tau: int) -> float:
        if not 1 <= tau <= len(self.lambda_per_slot):
            raise IndexError(f"slot {tau} outside 1..{len(self.lambda_per_slot)}")
        return self.lambda_per_slot[tau - 1]


@dataclass(frozen=True)
class EventPacket:
    arrival_time: float
    function_id: int
    topic: str
    size: float = field(default=0.0)


def arrival_times(fc: FunctionClass, grid: TimeSlotGrid, seed: int) -> np.ndarray:
    """Poisson arrival instants of one function over the whole grid, sorted."""
    if len(fc.lambda_per_slot) != grid.slot_count:
        raise ValueError("lambda_per_slot length must equal slot_count")
    chunks = []
    for tau in range(1, grid.slot_count + 1):
        lam = fc.rate(tau)
        if lam == 0:
            continue
        start, end = grid.bounds(tau)
        rng = substream(seed, fc.id, tau, StreamTag.ARRIVALS)
        span = end - start
        expected = lam * span
        times = np.empty(0)
        last = start
        while last < end:
            k = int(expected + 6.0 * math.sqrt(expected) + 16)
            with np.errstate(over="ignore"):  # subnormal rates: gaps of inf land past the slot
                gaps = rng.exponential(1.0 / lam, k)
                t = last + np.cumsum(gaps)
            times = np.concatenate([times, t])
            last = t[-1]
        chunks.append(times[times < end])
    return np.concatenate(chunks) if chunks else np.empty(0)


def sample_arrivals(
    fc: FunctionClass, grid: TimeSlotGrid, seed: int, packet_size: float | None = None
) -> list[EventPacket]:
    size = fc.packet_size if fc.packet_size is not None else (packet_size or 0.0)
    return [EventPacket(float(t), fc.id, fc.topic, size) for t in arrival_times(fc, grid, seed)]


def aggregate_rate(classes: list[FunctionClass], tau: int) -> float:
    """Total Poisson rate of all subscribed functions in slot ``tau``."""
    return math.fsum(fc.rate(tau) for fc in classes)
