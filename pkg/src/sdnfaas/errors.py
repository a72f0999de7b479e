"""Exception types shared across the package."""

from __future__ import annotations


class Unstable(ValueError):
    """Offered load at or beyond the stability boundary of a queue."""

    def __init__(self, stage: str, load: float, servers: int = 1):
        self.stage = stage
        self.load = load
        self.servers = servers
        super().__init__(
            f"{stage}: offered load {load:.6g} is not below {servers} server(s)"
        )


class NoReplica(ValueError):
    """A function pool with zero running instances has no steady-state wait."""


class Infeasible(ValueError):
    def __init__(self, n_max: int):
        self.n_max = n_max
        super().__init__(f"no replica count <= {n_max} meets the delay threshold")


class ConfigInvalid(ValueError):
    """Scenario validation failed. ``violations`` lists every problem found."""

    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = list(violations)
        lines = [f"{path}: {reason}" for path, reason in self.violations]
        super().__init__("invalid scenario:\n  " + "\n  ".join(lines))


class UnmappedTopic(LookupError):
    pass


class OverCapacity(RuntimeError):
    pass
