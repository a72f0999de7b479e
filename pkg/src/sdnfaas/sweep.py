"""One-dimensional parameter sweeps with analytic and simulated columns."""

from __future__ import annotations

import dataclasses
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytic import run_analytic
from .config import AXES, ScenarioConfig
from .engine import run_simulation
from .power import cold_flags_for, total_server_power

COLUMNS = (
    "digest", "seed", "axis", "value", "function_id", "status",
    "an_TS", "an_Wg", "an_Tg", "an_Wf", "an_Tf", "an_T", "an_U_s", "an_P_s", "an_Pc_total", "an_energy",
    "sim_events", "sim_completed", "sim_in_flight", "sim_dropped",
    "sim_TS", "sim_Wg", "sim_Tg", "sim_Wf", "sim_Tf", "sim_T", "sim_U_s", "sim_P_s", "sim_Pc_total", "sim_energy",
    "sim_flags",
)  # fmt: skip

SIMULATED_AXES = ("lambda", "replicas", "cold_delay")


@dataclass
class TrendCheck:
    name: str
    passed: bool
    detail: str


@dataclass
class SweepResult:
    axis: str
    values: list[float]
    rows: list[dict]
    checks: list[TrendCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def grid_values(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic range that does not accumulate floating-point drift."""
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(max(count, 0))]


def with_axis(cfg: ScenarioConfig, axis: str, value: float) -> ScenarioConfig:
    """Scenario variant with one swept parameter set to ``value``."""
    if axis == "lambda":
        funcs = []
        slots = cfg.grid.slot_count
        totals = [sum(fc.lambda_per_slot[t] for fc in cfg.functions) for t in range(slots)]
        for fc in cfg.functions:
            rates = []
            for t in range(slots):
                share = fc.lambda_per_slot[t] / totals[t] if totals[t] > 0 else 1.0 / len(cfg.functions)
                rates.append(value * share)
            funcs.append(dataclasses.replace(fc, lambda_per_slot=tuple(rates)))
        return cfg.replace(functions=tuple(funcs))
    if axis == "replicas":
        n = int(value)
        funcs = tuple(dataclasses.replace(fc, replicas=n, n_max=max(fc.n_max, n)) for fc in cfg.functions)
        return cfg.replace(functions=funcs)
    if axis == "cold_delay":
        return cfg.replace(
            servers=tuple(dataclasses.replace(s, cold_start_delay=float(value)) for s in cfg.servers)
        )
    if axis in ("containers", "utilization"):
        return cfg
    raise ValueError(f"unknown axis {axis!r}; expected one of {AXES}")


def _focus(cfg: ScenarioConfig) -> int:
    return cfg.sweep.function_id if cfg.sweep.function_id is not None else cfg.functions[0].id


def _weighted(rows, attr, fid=None):
    num = den = 0.0
    for r in rows:
        if fid is not None and r.function_id != fid:
            continue
        if r.rate == 0:
            continue
        v = getattr(r, attr)
        if v is None:
            return None
        num += r.rate * v
        den += r.rate
    return num / den if den else None


def _power_only(cfg: ScenarioConfig, axis: str, value: float) -> dict:
    u = float(value) if axis == "utilization" else cfg.sweep.utilization
    count = int(value) if axis == "containers" else cfg.sweep.containers
    parts = [
        total_server_power(u, cold_flags_for(count, s), s, slot_length=cfg.grid.slot_length)
        for s in cfg.servers
    ]
    return {
        "an_U_s": u,
        "an_P_s": math.fsum(p.total for p in parts),
        "an_Pc_total": math.fsum(p.cold_total for p in parts),
        "an_energy": math.fsum(p.total for p in parts) * cfg.grid.horizon,
    }


def _analytic_cols(cfg: ScenarioConfig) -> dict:
    rep = run_analytic(cfg)
    fid = _focus(cfg)
    n_srv = len(cfg.servers)
    slots = cfg.grid.slot_count
    return {
        "an_TS": _weighted(rep.rows, "ts"),
        "an_Wg": _weighted(rep.rows, "wg"),
        "an_Tg": _weighted(rep.rows, "tg"),
        "an_Wf": _weighted(rep.rows, "wf", fid),
        "an_Tf": _weighted(rep.rows, "tf", fid),
        "an_T": _weighted(rep.rows, "total", fid),
        "an_U_s": float(np.mean([p.utilization for p in rep.power])),
        "an_P_s": math.fsum(p.total for p in rep.power) / slots,
        "an_Pc_total": math.fsum(p.cold_total for p in rep.power) / slots,
        "an_energy": rep.total_energy,
        "status": "ok" if rep.all_stable else sorted({r.status for r in rep.rows if not r.stable})[0],
        "_servers": n_srv,
    }


def _sim_cols(cfg: ScenarioConfig, seed: int) -> dict:
    rep = run_simulation(cfg, seed)
    fid = _focus(cfg)
    s = rep.samples
    ok = s["completed"]
    sel = ok & (s["function"] == fid)

    def mean(key, mask):
        return float(s[key][mask].mean()) if mask.any() else None

    slots = len(rep.power_trace) // len(cfg.servers)
    return {
        "sim_events": rep.event_count,
        "sim_completed": rep.completed,
        "sim_in_flight": rep.in_flight,
        "sim_dropped": rep.dropped,
        "sim_TS": mean("ts", ok),
        "sim_Wg": mean("wg", ok),
        "sim_Tg": mean("tg", ok),
        "sim_Wf": mean("wf", sel),
        "sim_Tf": mean("tf", sel),
        "sim_T": mean("total", sel),
        "sim_U_s": float(np.mean([p.utilization for p in rep.power_trace])),
        "sim_P_s": math.fsum(p.total for p in rep.power_trace) / slots,
        "sim_Pc_total": math.fsum(p.cold_total for p in rep.power_trace) / slots,
        "sim_energy": rep.total_energy,
        "sim_flags": ";".join(rep.flags),
    }


def _point(task) -> list[dict]:
    cfg, axis, value, seeds, simulate = task
    base = {"digest": cfg.digest(), "axis": axis, "value": value, "function_id": _focus(cfg)}
    try:
        variant = with_axis(cfg, axis, value)
        base["digest"] = variant.digest()
        if axis in SIMULATED_AXES:
            an = _analytic_cols(variant)
            an.pop("_servers")
        else:
            an = {"status": "ok", **_power_only(variant, axis, value)}
    except Exception as exc:  # a bad point must not abort the sweep
        return [{**base, "seed": seed, "status": f"error:{type(exc).__name__}:{exc}"} for seed in seeds]
    rows = []
    for seed in seeds:
        row = {**base, "seed": seed, **an}
        if simulate and axis in SIMULATED_AXES:
            try:
                row.update(_sim_cols(variant, seed))
            except Exception as exc:
                row["status"] = f"error:{type(exc).__name__}:{exc}"
        rows.append(row)
    return rows


def run_sweep(
    cfg: ScenarioConfig,
    axis: str,
    values: list[float],
    *,
    seeds: tuple[int, ...] | None = None,
    simulate: bool = True,
    workers: int | None = None,
) -> SweepResult:
    """Evaluate every grid point; rows come back in grid order whatever the worker count."""
    if axis not in AXES:
        raise ValueError(f"unknown axis {axis!r}; expected one of {AXES}")
    seeds = tuple(seeds if seeds is not None else cfg.seeds)
    tasks = [(cfg, axis, v, seeds, simulate) for v in values]
    if workers is None:
        workers = cfg.sweep.workers or os.cpu_count() or 1
    workers = max(1, min(workers, len(tasks)))
    if workers == 1:
        chunks = [_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_point, tasks))
    rows = [r for chunk in chunks for r in chunk]
    result = SweepResult(axis, list(values), rows)
    result.checks = trend_checks(result, seeds)
    return result


def _series(rows: list[dict], key: str, seed) -> list:
    return [r.get(key) for r in rows if r["seed"] == seed]


def _monotone(xs, strict: bool, increasing: bool) -> bool:
    if any(x is None for x in xs):
        return False
    pairs = zip(xs, xs[1:])
    if increasing:
        return all(b > a if strict else b >= a for a, b in pairs)
    return all(b < a if strict else b <= a for a, b in pairs)


def trend_checks(result: SweepResult, seeds: tuple[int, ...]) -> list[TrendCheck]:
    """Shape assertions for the swept axis, evaluated on the analytic columns."""
    seed = seeds[0]
    axis = result.axis
    checks: list[TrendCheck] = []
    if axis == "lambda":
        xs = _series(result.rows, "an_T", seed)
        checks.append(TrendCheck("T strictly increasing in lambda", _monotone(xs, True, True), repr(xs)))
    elif axis == "replicas":
        xs = _series(result.rows, "an_T", seed)
        checks.append(TrendCheck("T strictly decreasing in replicas", _monotone(xs, True, False), repr(xs)))
    elif axis == "cold_delay":
        xs = _series(result.rows, "an_energy", seed)
        checks.append(TrendCheck("energy non-decreasing in cold delay", _monotone(xs, False, True), repr(xs)))
        sim = _series(result.rows, "sim_energy", seed)
        if all(x is not None for x in sim) and sim:
            checks.append(
                TrendCheck("simulated energy non-decreasing in cold delay", _monotone(sim, False, True), repr(sim))
            )
    elif axis == "containers":
        xs = _series(result.rows, "an_Pc_total", seed)
        if any(x is None for x in xs):
            linear = False
        else:
            steps = [b - a for a, b in zip(xs, xs[1:])]
            linear = not steps or all(math.isclose(d, steps[0], rel_tol=1e-9, abs_tol=1e-12) for d in steps)
        checks.append(TrendCheck("cold power linear in container count", linear, repr(xs)))
        ps = _series(result.rows, "an_P_s", seed)
        checks.append(TrendCheck("power non-decreasing in containers", _monotone(ps, False, True), repr(ps)))
    elif axis == "utilization":
        xs = _series(result.rows, "an_P_s", seed)
        checks.append(TrendCheck("power strictly increasing in utilization", _monotone(xs, True, True), repr(xs)))
    return checks
