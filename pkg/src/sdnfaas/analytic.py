"""Closed-form evaluation of a whole scenario, slot by slot."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .config import ScenarioConfig
from .errors import Infeasible, NoReplica, OverCapacity, Unstable
from .power import SlotPowerBreakdown, cold_flags_for, total_server_power
from .queueing import (
    MgnMode,
    StageDelays,
    controller_latency,
    event_processing_time,
    function_response,
    function_utilization,
    gateway_response,
    mg1_wait,
    mgn_wait,
    min_replicas_for_threshold,
    total_latency,
)
from .workload import aggregate_rate

# the pool response adds the mean service time of the function itself
FUNCTION_RESPONSE_SERVICE_TERM = "b_m"


@dataclass
class AnalyticRow:
    tau: int
    function_id: int
    rate: float
    replicas: int
    cold_starts: int
    controller_wait: float | None
    ts: float | None
    wg: float | None
    tg: float | None
    tp: float | None
    wf: float | None
    tf: float | None
    total: float | None
    utilization: float | None
    status: str = "ok"

    @property
    def stable(self) -> bool:
        return self.status == "ok"


@dataclass
class AnalyticReport:
    digest: str
    mode: MgnMode
    rows: list[AnalyticRow]
    stages: list[StageDelays | None]
    power: list[SlotPowerBreakdown]
    slot_length: float
    notes: list[str] = field(default_factory=list)

    def row(self, tau: int, function_id: int) -> AnalyticRow:
        for r in self.rows:
            if r.tau == tau and r.function_id == function_id:
                return r
        raise KeyError((tau, function_id))

    @property
    def total_energy(self) -> float:
        return math.fsum(p.energy for p in self.power)

    @property
    def all_stable(self) -> bool:
        return all(r.stable for r in self.rows)


def _guard(fn, *args):
    try:
        return fn(*args), None
    except Unstable as exc:
        return None, f"unstable:{exc.stage}"
    except NoReplica:
        return None, "no_replica"


def replica_plan(cfg: ScenarioConfig) -> dict[int, list[int]]:
    """Replica count per function per slot.

    Fixed pools keep their configured size.  With the autoscaler on, each slot
    grows the pool to the smallest size meeting the threshold (never shrinking
    unless scale-down is enabled), capped at ``n_max``.
    """
    policy = cfg.autoscaler
    plan: dict[int, list[int]] = {}
    for fc in cfg.functions:
        counts = []
        n = fc.replicas
        for tau in range(1, cfg.grid.slot_count + 1):
            if policy.enabled:
                lam = fc.rate(tau)
                try:
                    need = min_replicas_for_threshold(lam, fc.service, policy.threshold, fc.n_max, policy.mode)
                except Infeasible:
                    need = fc.n_max
                n = need if policy.scale_down_enabled else max(n, need)
                n = max(n, policy.min_replicas)
            counts.append(n)
        plan[fc.id] = counts
    return plan


def run_analytic(cfg: ScenarioConfig, mode: MgnMode | str | None = None) -> AnalyticReport:
    mode = MgnMode(mode) if mode is not None else cfg.mgn_mode
    use_ctrl = "controller" in cfg.stages
    use_gw = "gateway" in cfg.stages
    use_pool = "pool" in cfg.stages
    mu = cfg.controller.service_rate
    plan = replica_plan(cfg)
    rows: list[AnalyticRow] = []
    stage_list: list[StageDelays | None] = []
    power: list[SlotPowerBreakdown] = []
    notes = [
        f"pool wait formula: {mode.value}",
        f"function response adds {FUNCTION_RESPONSE_SERVICE_TERM} (mean service time of that function)",
    ]
    if cfg.phi_heterogeneous:
        notes.append("phi_heterogeneous: controller delay uses the common channel packet size")
    L = cfg.grid.slot_length

    for tau in range(1, cfg.grid.slot_count + 1):
        lam_total = aggregate_rate(list(cfg.functions), tau)
        if use_ctrl:
            ctrl, ctrl_status = _guard(controller_latency, lam_total, mu)
        else:
            ctrl, ctrl_status = (0.0, 0.0), None
        if use_gw:
            wg, gw_status = _guard(mg1_wait, lam_total, cfg.gateway_service)
            tg = None if wg is None else gateway_response(lam_total, cfg.gateway_service)
        else:
            wg, tg, gw_status = 0.0, 0.0, None
        tp = None
        if ctrl is not None and tg is not None:
            tp = event_processing_time(ctrl[1], tg)
        sd_slot = None
        if tp is not None:
            sd_slot = StageDelays(ctrl[0], ctrl[1], wg, tg, tp)

        busy_by_server: dict[int, float] = {s.id: 0.0 for s in cfg.servers}
        cold_by_server: dict[int, int] = {s.id: 0 for s in cfg.servers}
        for fc in cfg.functions:
            lam = fc.rate(tau)
            n = plan[fc.id][tau - 1]
            prev = plan[fc.id][tau - 2] if tau > 1 else fc.replicas
            cold = max(n - prev, 0)
            host = cfg.host_of(fc.id)
            cold_by_server[host] += cold
            status = ctrl_status or gw_status
            wf = tf = util = None
            if use_pool:
                wf, pool_status = _guard(mgn_wait, lam, fc.service, n, mode)
                if wf is not None:
                    tf = function_response(lam, fc.service, n, mode)
                    util = function_utilization(lam, fc.service.rate, n)
                status = status or pool_status
                busy_by_server[host] += min(lam * fc.service.mean, n)
            else:
                wf, tf = 0.0, 0.0
            total = None
            if tp is not None and tf is not None:
                total = total_latency(ctrl[1], tg, tf)
                if sd_slot is not None:
                    sd_slot.wf[fc.id] = wf
                    sd_slot.tf[fc.id] = tf
                    sd_slot.total[fc.id] = total
            rows.append(
                AnalyticRow(
                    tau=tau,
                    function_id=fc.id,
                    rate=lam,
                    replicas=n,
                    cold_starts=cold,
                    controller_wait=ctrl[0] if ctrl else None,
                    ts=ctrl[1] if ctrl else None,
                    wg=wg,
                    tg=tg,
                    tp=tp,
                    wf=wf,
                    tf=tf,
                    total=total,
                    utilization=util,
                    status=status or "ok",
                )
            )
        stage_list.append(sd_slot)

        for s in cfg.servers:
            u = min(busy_by_server[s.id] / s.core_count, 1.0)
            count = cold_by_server[s.id]
            if count > s.max_containers:
                notes.append(f"slot {tau}: server {s.id} needs {count} cold starts, capped at k={s.max_containers}")
                count = s.max_containers
            try:
                flags = cold_flags_for(count, s)
            except OverCapacity:  # pragma: no cover - capped above
                flags = [True] * s.max_containers
            power.append(total_server_power(u, flags, s, tau=tau, slot_length=L))

    return AnalyticReport(cfg.digest(), mode, rows, stage_list, power, L, notes)
