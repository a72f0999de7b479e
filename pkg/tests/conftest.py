import sys
from fractions import Fraction
from math import factorial
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sdnfaas.autoscaler import AutoscalerPolicy
from sdnfaas.config import ScenarioConfig
from sdnfaas.power import ServerPowerParams
from sdnfaas.queueing import ChannelParams
from sdnfaas.workload import FunctionClass, ServiceDistribution, TimeSlotGrid


# ---- independent closed forms, written without the package's formula code


def erlang_c_wait(lam, mu, n):
    """M/M/n mean wait via exact rational Erlang-C."""
    lam, mu = Fraction(lam), Fraction(mu)
    rho = lam / mu
    tail = rho**n / (factorial(n - 1) * (n - rho))
    denom = sum(rho**k / factorial(k) for k in range(n)) + tail
    c = tail / denom
    return float(c / (mu * (n - rho)))


def mm1_wait(lam, mu):
    return (lam / mu) / (mu - lam)


def md1_wait(lam, mu):
    rho = lam / mu
    return rho / (2 * mu * (1 - rho))


def server(**kw):
    base = dict(
        idle_power=100.0,
        gamma1=50.0,
        gamma2=120.0,
        cpu_freq=1.5e9,
        cold_start_delay=0.5,
        max_containers=10,
        eta=1e-26,
        core_count=1,
    )
    base.update(kw)
    return ServerPowerParams(**base)


def pipeline(
    lam=2.5,
    service=None,
    replicas=1,
    *,
    gateway=None,
    controller_rate=1e6,
    slot_length=100.0,
    slots=10,
    n_max=10,
    autoscaler=None,
    stages=("controller", "gateway", "pool"),
    srv=None,
    **kw,
):
    """Single-function scenario with a negligible controller and gateway by default."""
    rates = lam if isinstance(lam, (list, tuple)) else (lam,) * slots
    fc = FunctionClass(
        1,
        tuple(rates),
        service or ServiceDistribution.exponential(0.2),
        ("events",),
        replicas,
        n_max,
    )
    return ScenarioConfig(
        grid=TimeSlotGrid(slot_length, len(rates)),
        functions=(fc,),
        channel=ChannelParams(1e6, 1.0, 1.0, 1.0, 1000.0),
        gateway_service=gateway or ServiceDistribution.deterministic(1e-6),
        servers=(srv or server(),),
        autoscaler=autoscaler or AutoscalerPolicy(),
        controller_rate=controller_rate,
        stages=tuple(stages),
        **kw,
    )


# ---- conservation registry: every simulation in the suite is checked

CONSERVATION: list[tuple[int, int, int, int]] = []


@pytest.fixture(autouse=True)
def _check_conservation(monkeypatch):
    import sdnfaas.cli
    import sdnfaas.compare
    import sdnfaas.engine
    import sdnfaas.sweep

    original = sdnfaas.engine.run_simulation
    violations = []

    def recorded(*args, **kwargs):
        rep = original(*args, **kwargs)
        row = (rep.event_count, rep.completed, rep.in_flight, rep.dropped)
        CONSERVATION.append(row)
        if row[0] != row[1] + row[2] + row[3]:
            violations.append(row)
        return rep

    for mod in (sdnfaas.engine, sdnfaas.compare, sdnfaas.sweep, sdnfaas.cli):
        monkeypatch.setattr(mod, "run_simulation", recorded)
    yield
    assert not violations, f"event conservation violated: {violations}"


@pytest.fixture
def exp02():
    return ServiceDistribution.exponential(0.2)
