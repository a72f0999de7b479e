"""Scenario files: TOML in, validated :class:`ScenarioConfig` out, and back again.

Units everywhere: seconds, events/second, bits, Watts, Joules, cycles/second.
Validation collects every violation with its field path before raising.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
import tomli_w

from .autoscaler import AutoscalerPolicy, Estimator, Evaluation
from .errors import ConfigInvalid
from .power import DEFAULT_ETA, ServerPowerParams
from .queueing import ChannelParams, ControllerModel, MgnMode
from .workload import FunctionClass, ServiceDistribution, ServiceKind, TimeSlotGrid

STAGES = ("controller", "gateway", "pool")
PLACEMENTS = ("single", "round_robin")
AXES = ("lambda", "replicas", "cold_delay", "containers", "utilization")


@dataclass(frozen=True)
class SweepSettings:
    function_id: int | None = None
    utilization: float = 0.5
    containers: int = 0
    workers: int | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    grid: TimeSlotGrid
    functions: tuple[FunctionClass, ...]
    channel: ChannelParams
    gateway_service: ServiceDistribution
    servers: tuple[ServerPowerParams, ...]
    autoscaler: AutoscalerPolicy = AutoscalerPolicy()
    controller_rate: float | None = None
    placement: str = "single"
    seeds: tuple[int, ...] = (1,)
    horizon: float | None = None
    stages: tuple[str, ...] = STAGES
    backlog_cap: int = 100_000
    subscriptions: dict[str, tuple[int, ...]] | None = None
    mgn_mode: MgnMode = MgnMode.GENERAL
    warmup_fraction: float = 0.1
    batches: int = 20
    sweep: SweepSettings = SweepSettings()
    output_dir: str = "out"
    name: str = "scenario"
    description: str = ""

    @property
    def controller(self) -> ControllerModel:
        return ControllerModel(self.channel, self.controller_rate)

    @property
    def sim_horizon(self) -> float:
        return self.grid.horizon if self.horizon is None else min(self.horizon, self.grid.horizon)

    def function(self, fid: int) -> FunctionClass:
        for fc in self.functions:
            if fc.id == fid:
                return fc
        raise KeyError(fid)

    def server(self, sid: int) -> ServerPowerParams:
        for s in self.servers:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def host_of(self, fid: int) -> int:
        """Server id hosting all replicas of function ``fid``."""
        if self.placement == "single":
            return self.servers[0].id
        idx = [fc.id for fc in self.functions].index(fid)
        return self.servers[idx % len(self.servers)].id

    def route_table(self) -> dict[str, int]:
        """Topic -> handling function id; the lowest subscribing id wins."""
        table: dict[str, int] = {}
        if self.subscriptions is None:
            for fc in sorted(self.functions, key=lambda f: f.id):
                for topic in fc.topics:
                    table.setdefault(topic, fc.id)
        else:
            for topic, ids in self.subscriptions.items():
                if ids:
                    table[topic] = min(ids)
        return table

    @property
    def phi_heterogeneous(self) -> bool:
        return any(
            fc.packet_size is not None and fc.packet_size != self.channel.packet_size
            for fc in self.functions
        )

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return config_to_dict(self)

    def digest(self) -> str:
        blob = json.dumps(config_to_dict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


# ---------------------------------------------------------------- serialization


def _service_to_dict(sd: ServiceDistribution) -> dict[str, Any]:
    d: dict[str, Any] = {"kind": sd.kind.value, "mean": sd.mean}
    if sd.kind is ServiceKind.GENERAL:
        d["second_moment"] = sd.second_moment
    return d


def config_to_dict(cfg: ScenarioConfig) -> dict[str, Any]:
    ch = cfg.channel
    channel: dict[str, Any] = {
        "bandwidth": ch.bandwidth,
        "channel_gain": ch.channel_gain,
        "tx_power": ch.tx_power,
        "noise_power": ch.noise_power,
        "packet_size": ch.packet_size,
    }
    if cfg.controller_rate is not None:
        channel["service_rate"] = cfg.controller_rate
    functions = []
    for fc in cfg.functions:
        f: dict[str, Any] = {
            "id": fc.id,
            "lambda": list(fc.lambda_per_slot),
            "service": _service_to_dict(fc.service),
            "topics": list(fc.topics),
            "replicas": fc.replicas,
            "n_max": fc.n_max,
        }
        if fc.packet_size is not None:
            f["packet_size"] = fc.packet_size
        functions.append(f)
    servers = [
        {
            "id": s.id,
            "idle_power": s.idle_power,
            "gamma1": s.gamma1,
            "gamma2": s.gamma2,
            "eta": s.eta,
            "cpu_freq": s.cpu_freq,
            "core_count": s.core_count,
            "cold_start_delay": s.cold_start_delay,
            "max_containers": s.max_containers,
        }
        for s in cfg.servers
    ]
    a = cfg.autoscaler
    autoscaler: dict[str, Any] = {
        "enabled": a.enabled,
        "threshold": a.threshold,
        "evaluation": a.evaluation.value,
        "estimator": a.estimator.value,
        "scale_down": a.scale_down_enabled,
        "hysteresis": a.hysteresis,
        "cooldown": a.cooldown,
        "min_replicas": a.min_replicas,
        "on_demand_launch": a.on_demand_launch,
    }
    if a.window is not None:
        autoscaler["window"] = a.window
    if a.idle_timeout is not None:
        autoscaler["idle_timeout"] = a.idle_timeout
    simulation: dict[str, Any] = {
        "seeds": list(cfg.seeds),
        "stages": list(cfg.stages),
        "backlog_cap": cfg.backlog_cap,
        "warmup_fraction": cfg.warmup_fraction,
        "batches": cfg.batches,
    }
    if cfg.horizon is not None:
        simulation["horizon"] = cfg.horizon
    sweep: dict[str, Any] = {
        "utilization": cfg.sweep.utilization,
        "containers": cfg.sweep.containers,
    }
    if cfg.sweep.function_id is not None:
        sweep["function_id"] = cfg.sweep.function_id
    if cfg.sweep.workers is not None:
        sweep["workers"] = cfg.sweep.workers
    out: dict[str, Any] = {
        "name": cfg.name,
        "description": cfg.description,
        "grid": {"slot_length": cfg.grid.slot_length, "slot_count": cfg.grid.slot_count},
        "channel": channel,
        "gateway": {"service": _service_to_dict(cfg.gateway_service)},
        "functions": functions,
        "servers": servers,
        "placement": {"policy": cfg.placement},
        "autoscaler": autoscaler,
        "simulation": simulation,
        "analytic": {"mgn_mode": cfg.mgn_mode.value},
        "sweep": sweep,
        "output": {"dir": cfg.output_dir},
    }
    if cfg.subscriptions is not None:
        out["gateway"]["subscriptions"] = {k: list(v) for k, v in cfg.subscriptions.items()}
    return out


def dumps(cfg: ScenarioConfig) -> str:
    return tomli_w.dumps(config_to_dict(cfg))


def save_scenario(cfg: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(dumps(cfg))


# ---------------------------------------------------------------- parsing


class _Checker:
    """Pulls typed values out of nested dicts while recording violations."""

    def __init__(self):
        self.violations: list[tuple[str, str]] = []

    def bad(self, path: str, reason: str) -> None:
        self.violations.append((path, reason))

    def table(self, d: dict, key: str, path: str, required: bool = True) -> dict:
        v = d.get(key)
        if v is None:
            if required:
                self.bad(f"{path}{key}", "missing table")
            return {}
        if not isinstance(v, dict):
            self.bad(f"{path}{key}", "expected a table")
            return {}
        return v

    def number(
        self,
        d: dict,
        key: str,
        path: str,
        *,
        default: Any = ...,
        positive: bool = False,
        nonneg: bool = False,
        integer: bool = False,
        minimum: float | None = None,
    ) -> Any:
        full = f"{path}{key}"
        if key not in d:
            if default is ...:
                self.bad(full, "missing value")
                return None
            return default
        v = d[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.bad(full, f"expected a number, got {v!r}")
            return None
        if integer and (not isinstance(v, int) and not float(v).is_integer()):
            self.bad(full, "expected an integer")
            return None
        if not math.isfinite(v):
            self.bad(full, "must be finite")
            return None
        if positive and not v > 0:
            self.bad(full, "must be > 0")
            return None
        if nonneg and v < 0:
            self.bad(full, "must be >= 0")
            return None
        if minimum is not None and v < minimum:
            self.bad(full, f"must be >= {minimum}")
            return None
        return int(v) if integer else float(v)

    def choice(self, d: dict, key: str, path: str, options, default: Any) -> Any:
        v = d.get(key, default)
        if v not in options:
            self.bad(f"{path}{key}", f"must be one of {list(options)}")
            return default
        return v

    def boolean(self, d: dict, key: str, path: str, default: bool) -> bool:
        v = d.get(key, default)
        if not isinstance(v, bool):
            self.bad(f"{path}{key}", "expected true/false")
            return default
        return v

    def service(self, d: dict, path: str) -> ServiceDistribution | None:
        if not isinstance(d, dict):
            self.bad(path, "expected a table")
            return None
        kind = self.choice(d, "kind", path + ".", [k.value for k in ServiceKind], None)
        mean = self.number(d, "mean", path + ".", positive=True)
        if kind is None or mean is None:
            return None
        b2 = d.get("second_moment")
        if b2 is not None and (isinstance(b2, bool) or not isinstance(b2, (int, float))):
            self.bad(f"{path}.second_moment", "expected a number")
            return None
        if kind == "general":
            if b2 is None:
                self.bad(f"{path}.second_moment", "general service needs a second moment")
                return None
            if b2 < mean * mean * (1 - 1e-12):
                self.bad(f"{path}.second_moment", "must be >= mean^2")
                return None
            return ServiceDistribution.general(mean, float(b2))
        expected = mean * mean if kind == "deterministic" else 2 * mean * mean
        if b2 is not None and not math.isclose(b2, expected, rel_tol=1e-9):
            law = "b^2" if kind == "deterministic" else "2 b^2"
            self.bad(f"{path}.second_moment", f"{kind} service requires second moment {law}")
            return None
        return ServiceDistribution(ServiceKind(kind), mean, expected)


def parse_dict(raw: dict[str, Any]) -> ScenarioConfig:
    """Validate a raw scenario mapping; raises ConfigInvalid listing all violations."""
    c = _Checker()

    g = c.table(raw, "grid", "")
    slot_length = c.number(g, "slot_length", "grid.", positive=True)
    slot_count = c.number(g, "slot_count", "grid.", integer=True, minimum=1)
    grid = None
    if slot_length is not None and slot_count is not None:
        grid = TimeSlotGrid(slot_length, slot_count)

    ch = c.table(raw, "channel", "")
    bw = c.number(ch, "bandwidth", "channel.", positive=True)
    gain = c.number(ch, "channel_gain", "channel.", nonneg=True)
    txp = c.number(ch, "tx_power", "channel.", positive=True)
    noise = c.number(ch, "noise_power", "channel.", positive=True)
    phi = c.number(ch, "packet_size", "channel.", positive=True)
    ctrl_rate = c.number(ch, "service_rate", "channel.", default=None, positive=True)
    channel = None
    if None not in (bw, gain, txp, noise, phi):
        channel = ChannelParams(bw, gain, txp, noise, phi)

    gw = c.table(raw, "gateway", "")
    gateway_service = c.service(gw.get("service", {}), "gateway.service") if gw else None
    subscriptions = None
    if "subscriptions" in gw:
        subs = gw["subscriptions"]
        if not isinstance(subs, dict):
            c.bad("gateway.subscriptions", "expected a table of topic = [ids]")
        else:
            subscriptions = {}
            for topic, ids in subs.items():
                if not isinstance(ids, list) or not all(
                    isinstance(i, int) and not isinstance(i, bool) for i in ids
                ):
                    c.bad(f"gateway.subscriptions.{topic}", "expected a list of function ids")
                    continue
                subscriptions[topic] = tuple(ids)

    functions: list[FunctionClass] = []
    raw_functions = raw.get("functions")
    if not isinstance(raw_functions, list) or not raw_functions:
        c.bad("functions", "at least one [[functions]] entry is required")
        raw_functions = []
    seen_ids: set[int] = set()
    for i, f in enumerate(raw_functions):
        p = f"functions[{i}]."
        if not isinstance(f, dict):
            c.bad(p[:-1], "expected a table")
            continue
        fid = c.number(f, "id", p, integer=True, minimum=1, default=i + 1)
        if fid is not None:
            if fid in seen_ids:
                c.bad(p + "id", f"duplicate function id {fid}")
            seen_ids.add(fid)
        lam = f.get("lambda")
        rates: list[float] | None = None
        if isinstance(lam, (int, float)) and not isinstance(lam, bool):
            if not (math.isfinite(lam) and lam >= 0):
                c.bad(p + "lambda", "arrival rate must be finite and >= 0")
            elif grid is not None:
                rates = [float(lam)] * grid.slot_count
        elif isinstance(lam, list):
            rates = []
            for j, x in enumerate(lam):
                if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x) or x < 0:
                    c.bad(f"{p}lambda[{j}]", "arrival rate must be finite and >= 0")
                    rates = None
                    break
                rates.append(float(x))
            if rates is not None and grid is not None and len(rates) != grid.slot_count:
                c.bad(p + "lambda", f"needs {grid.slot_count} per-slot rates, got {len(rates)}")
                rates = None
        else:
            c.bad(p + "lambda", "expected a rate or a list of per-slot rates")
        sd = c.service(f.get("service", {}), p + "service")
        topics = f.get("topics", [f"f{fid}"])
        if not isinstance(topics, list) or not topics or not all(isinstance(t, str) for t in topics):
            c.bad(p + "topics", "expected a non-empty list of strings")
            topics = [f"f{fid}"]
        replicas = c.number(f, "replicas", p, integer=True, minimum=0, default=1)
        n_max = c.number(f, "n_max", p, integer=True, minimum=1, default=10)
        fphi = c.number(f, "packet_size", p, default=None, positive=True)
        if None not in (fid, rates, sd, replicas, n_max):
            if replicas > n_max:
                c.bad(p + "replicas", "initial replicas exceed n_max")
            functions.append(
                FunctionClass(fid, tuple(rates), sd, tuple(topics), replicas, n_max, fphi)
            )

    servers: list[ServerPowerParams] = []
    raw_servers = raw.get("servers")
    if not isinstance(raw_servers, list) or not raw_servers:
        c.bad("servers", "at least one [[servers]] entry is required")
        raw_servers = []
    seen_servers: set[int] = set()
    for i, s in enumerate(raw_servers):
        p = f"servers[{i}]."
        if not isinstance(s, dict):
            c.bad(p[:-1], "expected a table")
            continue
        vals = dict(
            id=c.number(s, "id", p, integer=True, minimum=1, default=i + 1),
            idle_power=c.number(s, "idle_power", p, positive=True),
            gamma1=c.number(s, "gamma1", p, nonneg=True),
            gamma2=c.number(s, "gamma2", p, nonneg=True),
            eta=c.number(s, "eta", p, nonneg=True, default=DEFAULT_ETA),
            cpu_freq=c.number(s, "cpu_freq", p, positive=True),
            core_count=c.number(s, "core_count", p, integer=True, minimum=1, default=1),
            cold_start_delay=c.number(s, "cold_start_delay", p, positive=True),
            max_containers=c.number(s, "max_containers", p, integer=True, minimum=1),
        )
        if vals["id"] in seen_servers:
            c.bad(p + "id", f"duplicate server id {vals['id']}")
        seen_servers.add(vals["id"])
        if None not in vals.values():
            servers.append(ServerPowerParams(**vals))

    placement = c.choice(c.table(raw, "placement", "", required=False), "policy", "placement.", PLACEMENTS, "single")

    a = c.table(raw, "autoscaler", "", required=False)
    autoscaler = AutoscalerPolicy()
    a_vals = dict(
        enabled=c.boolean(a, "enabled", "autoscaler.", False),
        threshold=c.number(a, "threshold", "autoscaler.", positive=True, default=0.05),
        evaluation=c.choice(a, "evaluation", "autoscaler.", [e.value for e in Evaluation], "per_event"),
        estimator=c.choice(a, "estimator", "autoscaler.", [e.value for e in Estimator], Estimator.ANALYTIC.value),
        window=c.number(a, "window", "autoscaler.", positive=True, default=None),
        scale_down_enabled=c.boolean(a, "scale_down", "autoscaler.", False),
        hysteresis=c.number(a, "hysteresis", "autoscaler.", nonneg=True, default=0.1),
        cooldown=c.number(a, "cooldown", "autoscaler.", integer=True, minimum=0, default=0),
        min_replicas=c.number(a, "min_replicas", "autoscaler.", integer=True, minimum=0, default=0),
        on_demand_launch=c.boolean(a, "on_demand_launch", "autoscaler.", True),
        idle_timeout=c.number(a, "idle_timeout", "autoscaler.", positive=True, default=None),
    )
    if a_vals["hysteresis"] is not None and a_vals["hysteresis"] >= 1:
        c.bad("autoscaler.hysteresis", "must be < 1")
        a_vals["hysteresis"] = None
    an = c.table(raw, "analytic", "", required=False)
    mode = c.choice(an, "mgn_mode", "analytic.", [m.value for m in MgnMode], MgnMode.GENERAL.value)
    if all(v is not None or k in ("window", "idle_timeout") for k, v in a_vals.items()):
        autoscaler = AutoscalerPolicy(**a_vals, mode=MgnMode(mode))

    sim = c.table(raw, "simulation", "", required=False)
    seeds = sim.get("seeds", [1])
    if not isinstance(seeds, list) or not seeds or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in seeds
    ):
        c.bad("simulation.seeds", "expected a non-empty list of integers")
        seeds = [1]
    horizon = c.number(sim, "horizon", "simulation.", positive=True, default=None)
    stages = sim.get("stages", list(STAGES))
    if not isinstance(stages, list) or not stages or any(s not in STAGES for s in stages):
        c.bad("simulation.stages", f"expected a non-empty subset of {list(STAGES)}")
        stages = list(STAGES)
    stages = [s for s in STAGES if s in stages]
    backlog_cap = c.number(sim, "backlog_cap", "simulation.", integer=True, minimum=1, default=100_000)
    warmup = c.number(sim, "warmup_fraction", "simulation.", nonneg=True, default=0.1)
    if warmup is not None and warmup >= 1:
        c.bad("simulation.warmup_fraction", "must be < 1")
    batches = c.number(sim, "batches", "simulation.", integer=True, minimum=2, default=20)

    sw = c.table(raw, "sweep", "", required=False)
    sweep = SweepSettings(
        function_id=c.number(sw, "function_id", "sweep.", integer=True, default=None),
        utilization=c.number(sw, "utilization", "sweep.", nonneg=True, default=0.5),
        containers=c.number(sw, "containers", "sweep.", integer=True, minimum=0, default=0),
        workers=c.number(sw, "workers", "sweep.", integer=True, minimum=1, default=None),
    )
    if sweep.utilization is not None and sweep.utilization > 1:
        c.bad("sweep.utilization", "must lie in [0, 1]")

    out = c.table(raw, "output", "", required=False)
    output_dir = out.get("dir", "out")
    name = raw.get("name", "scenario")
    description = raw.get("description", "")

    # cross-references
    ids = {fc.id for fc in functions}
    if sweep.function_id is not None and functions and sweep.function_id not in ids:
        c.bad("sweep.function_id", f"unknown function id {sweep.function_id}")
    if subscriptions:
        for topic, sub_ids in subscriptions.items():
            for x in sub_ids:
                if x not in ids:
                    c.bad(f"gateway.subscriptions.{topic}", f"unknown function id {x}")
    if functions and servers and placement is not None:
        hosted: dict[int, int] = {}
        for idx, fc in enumerate(functions):
            sid = servers[0].id if placement == "single" else servers[idx % len(servers)].id
            hosted[sid] = hosted.get(sid, 0) + fc.replicas
        for sid, count in hosted.items():
            k = next(s.max_containers for s in servers if s.id == sid)
            if count > k:
                c.bad("functions", f"{count} initial replicas exceed max_containers={k} on server {sid}")

    if c.violations:
        raise ConfigInvalid(c.violations)
    return ScenarioConfig(
        grid=grid,
        functions=tuple(functions),
        channel=channel,
        gateway_service=gateway_service,
        servers=tuple(servers),
        autoscaler=autoscaler,
        controller_rate=ctrl_rate,
        placement=placement,
        seeds=tuple(seeds),
        horizon=horizon,
        stages=tuple(stages),
        backlog_cap=backlog_cap,
        subscriptions=subscriptions,
        mgn_mode=MgnMode(mode),
        warmup_fraction=warmup,
        batches=batches,
        sweep=sweep,
        output_dir=str(output_dir),
        name=str(name),
        description=str(description),
    )


def loads(text: str) -> ScenarioConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigInvalid([("<file>", f"TOML syntax: {exc}")]) from exc
    return parse_dict(raw)


def parse_scenario(path: str | Path) -> ScenarioConfig:
    """Read and validate a scenario file. ``OSError`` propagates for unreadable paths."""
    return loads(Path(path).read_text())


def shipped_scenario(name: str) -> Path:
    """Path of a scenario bundled with the package, e.g. ``paper_grid``."""
    here = Path(__file__).parent / "scenarios"
    p = here / (name if name.endswith(".toml") else f"{name}.toml")
    if not p.exists():
        raise FileNotFoundError(p)
    return p
