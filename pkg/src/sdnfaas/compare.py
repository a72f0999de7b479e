"""Simulation-versus-formula validation with batch-means confidence intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .analytic import AnalyticReport, run_analytic
from .config import ScenarioConfig
from .engine import SimReport, run_simulation
from .errors import ConfigInvalid


@dataclass(frozen=True)
class Tolerances:
    single_server: float = 0.03  # controller and gateway (M/D/1, M/G/1)
    pool: float = 0.05  # M/G/n replica pools and end-to-end totals
    power: float = 0.03  # utilization, power, energy
    abs_delay: float = 1e-6  # seconds; delays this close count as equal


def batch_means(
    samples: np.ndarray, batches: int = 20, warmup_fraction: float = 0.1, level: float = 0.95
) -> tuple[float, float, float]:
    """Mean and confidence bounds from non-overlapping batch means after warm-up truncation."""
    x = np.asarray(samples, dtype=float)
    x = x[int(len(x) * warmup_fraction):]
    size = len(x) // batches
    if size == 0:
        m = float(x.mean()) if len(x) else math.nan
        return m, math.nan, math.nan
    means = x[: size * batches].reshape(batches, size).mean(axis=1)
    return _t_interval(means, level)


def _t_interval(means: np.ndarray, level: float) -> tuple[float, float, float]:
    m = float(means.mean())
    if len(means) < 2:
        return m, math.nan, math.nan
    half = float(stats.t.ppf(0.5 + level / 2, len(means) - 1) * means.std(ddof=1) / math.sqrt(len(means)))
    return m, m - half, m + half


@dataclass
class MetricComparison:
    metric: str
    subject: str
    analytic: float | None
    simulated: float
    ci_low: float
    ci_high: float
    rel_error: float | None
    tolerance: float
    passed: bool
    note: str = ""


@dataclass
class ComparisonReport:
    digest: str
    seeds: tuple[int, ...]
    events: int
    metrics: list[MetricComparison]
    analytic: AnalyticReport
    runs: list[SimReport] = field(repr=False, default_factory=list)

    @property
    def passed(self) -> bool:
        return all(m.passed for m in self.metrics)

    def get(self, metric: str, subject: str = "all") -> MetricComparison:
        for m in self.metrics:
            if m.metric == metric and m.subject == subject:
                return m
        raise KeyError((metric, subject))


def _judge(analytic, simulated, tol, abs_tol=0.0):
    if analytic is None:
        return None, False
    err = abs(simulated - analytic)
    rel = err / analytic if analytic > 0 else (0.0 if err == 0 else math.inf)
    return rel, bool(rel < tol or err <= abs_tol)


def _pooled(runs: list[SimReport], key: str, mask_fn, batches: int, warmup: float):
    """Batch means pooled over seeds: each seed contributes ``batches`` batches."""
    all_means = []
    for r in runs:
        s = r.samples
        sel = s["completed"] & mask_fn(s)
        x = s[key][sel]
        x = x[int(len(x) * warmup):]
        size = len(x) // batches
        if size == 0:
            continue
        all_means.append(x[: size * batches].reshape(batches, size).mean(axis=1))
    if not all_means:
        return math.nan, math.nan, math.nan
    return _t_interval(np.concatenate(all_means), 0.95)


def _weighted_analytic(report: AnalyticReport, cfg: ScenarioConfig, attr: str, fid: int | None):
    """Arrival-weighted average of a per-slot formula value across slots."""
    num = den = 0.0
    for row in report.rows:
        if fid is not None and row.function_id != fid:
            continue
        w = row.rate
        if w == 0:
            continue
        v = getattr(row, attr)
        if v is None:
            return None
        num += w * v
        den += w
    return num / den if den > 0 else None


def run_compare(
    cfg: ScenarioConfig,
    tolerances: Tolerances = Tolerances(),
    seeds: tuple[int, ...] | None = None,
    horizon: float | None = None,
) -> ComparisonReport:
    """Simulate every seed and score each steady-state metric against its formula."""
    if cfg.autoscaler.enabled:
        raise ConfigInvalid([("autoscaler.enabled", "comparison needs fixed replica counts")])
    seeds = tuple(seeds if seeds is not None else cfg.seeds)
    analytic = run_analytic(cfg)
    runs = [run_simulation(cfg, s, horizon) for s in seeds]
    B, warm = cfg.batches, cfg.warmup_fraction
    out: list[MetricComparison] = []

    def add(metric, subject, expected, key, mask_fn, tol, abs_tol):
        m, lo, hi = _pooled(runs, key, mask_fn, B, warm)
        rel, ok = _judge(expected, m, tol, abs_tol)
        note = "" if expected is not None else "unstable"
        out.append(MetricComparison(metric, subject, expected, m, lo, hi, rel, tol, ok, note))

    everything = lambda s: np.ones_like(s["completed"])  # noqa: E731
    t1, tn, tp, ab = tolerances.single_server, tolerances.pool, tolerances.power, tolerances.abs_delay
    if "controller" in cfg.stages:
        add("TS", "all", _weighted_analytic(analytic, cfg, "ts", None), "ts", everything, t1, ab)
    if "gateway" in cfg.stages:
        add("Wg", "all", _weighted_analytic(analytic, cfg, "wg", None), "wg", everything, t1, ab)
        add("Tg", "all", _weighted_analytic(analytic, cfg, "tg", None), "tg", everything, t1, ab)
    for fc in cfg.functions:
        subj = f"f{fc.id}"
        sel = lambda s, fid=fc.id: s["function"] == fid  # noqa: E731
        if "pool" in cfg.stages:
            add("Wf", subj, _weighted_analytic(analytic, cfg, "wf", fc.id), "wf", sel, tn, ab)
            add("Tf", subj, _weighted_analytic(analytic, cfg, "tf", fc.id), "tf", sel, tn, ab)
        add("T", subj, _weighted_analytic(analytic, cfg, "total", fc.id), "total", sel, tn, ab)
        if "pool" in cfg.stages:
            u_expected = _weighted_analytic(analytic, cfg, "utilization", fc.id)
            per_slot = np.concatenate([np.asarray(r.function_utilization[fc.id]) for r in runs])
            m, lo, hi = _t_interval_or_nan(per_slot, B)
            rel, ok = _judge(u_expected, m, tp)
            out.append(MetricComparison("U", subj, u_expected, m, lo, hi, rel, tp, ok))

    n_srv = len(cfg.servers)
    for k, s in enumerate(cfg.servers):
        subj = f"s{s.id}"
        sim_p = np.concatenate([np.asarray([p.total for p in r.power_trace[k::n_srv]]) for r in runs])
        slots = len(runs[0].power_trace) // n_srv if runs else 0
        exp_p = [p.total for p in analytic.power[k::n_srv]][:slots]
        expected = float(np.mean(exp_p)) if exp_p else None
        m, lo, hi = _t_interval_or_nan(sim_p, B)
        rel, ok = _judge(expected, m, tp)
        out.append(MetricComparison("P_s", subj, expected, m, lo, hi, rel, tp, ok))
        cold = [p.cold_total for r in runs for p in r.power_trace[k::n_srv]]
        if cold and max(cold) > 0:
            out[-1].note = "cold starts present"

    if runs:
        durations = [p.duration for p in runs[0].power_trace[::n_srv]]
        exp_e = 0.0
        for k in range(n_srv):
            for d, p in zip(durations, analytic.power[k::n_srv]):
                exp_e += p.total * d
        sim_e = np.asarray([r.total_energy for r in runs])
        m = float(sim_e.mean())
        rel, ok = _judge(exp_e, m, tp)
        out.append(MetricComparison("energy", "all", exp_e, m, float(sim_e.min()), float(sim_e.max()), rel, tp, ok))

    return ComparisonReport(cfg.digest(), seeds, sum(r.event_count for r in runs), out, analytic, runs)


def _t_interval_or_nan(values: np.ndarray, batches: int):
    if len(values) >= batches:
        size = len(values) // batches
        means = values[: size * batches].reshape(batches, size).mean(axis=1)
        m, lo, hi = _t_interval(means, 0.95)
        return float(values.mean()), lo, hi
    return float(values.mean()) if len(values) else math.nan, math.nan, math.nan
