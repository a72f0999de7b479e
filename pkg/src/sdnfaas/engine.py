"""Discrete-event simulation of the controller -> gateway -> replica-pool pipeline.

All three stages are FCFS and non-preemptive.  The controller serves each event
in ``packet_size / R`` seconds, the gateway draws from its service law, and each
function owns a pool of replicas that may be cold-starting, idle or busy.

Random draws happen before the loop (per function, per slot, per purpose), so
scheduling decisions never consume randomness and a run is bit-reproducible.
The calendar orders entries by (time, stage priority, sequence number).
"""

from __future__ import annotations

import enum
import heapq
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .autoscaler import (
    Action,
    AutoscalerPolicy,
    Estimator,
    Evaluation,
    ScalingDecision,
    SlidingWindow,
    autoscale_step,
)
from .config import ScenarioConfig
from .errors import ConfigInvalid, OverCapacity, UnmappedTopic
from .power import ServerPowerParams, SlotPowerBreakdown, total_server_power
from .workload import StreamTag, arrival_times, substream

# calendar priorities; lower runs first at equal timestamps
P_CONTROLLER = 0
P_GATEWAY = 1
P_POOL = 2
P_SLOT = 3

K_CTRL_DONE = 0
K_GW_DONE = 1
K_POOL_DONE = 2
K_COLD_READY = 3
K_EXPIRE = 4
K_SLOT_END = 5


class ReplicaState(enum.Enum):
    COLD = "cold_starting"
    IDLE = "idle_warm"
    BUSY = "busy"


class Replica:
    __slots__ = ("id", "state", "ready_at", "busy_since", "event", "token", "retiring")

    def __init__(self, rid: int, state: ReplicaState, ready_at: float = 0.0):
        self.id = rid
        self.state = state
        self.ready_at = ready_at
        self.busy_since = 0.0
        self.event = -1
        self.token = 0
        self.retiring = False

    def cold_remaining(self, now: float) -> float:
        return max(self.ready_at - now, 0.0) if self.state is ReplicaState.COLD else 0.0


class ReplicaPool:
    """Replicas of one function plus its FCFS backlog."""

    def __init__(self, function_id: int, host_server: int, n_max: int):
        self.function_id = function_id
        self.host_server = host_server
        self.n_max = n_max
        self.replicas: list[Replica] = []
        self.idle: deque[Replica] = deque()
        self.backlog: deque[int] = deque()
        self.next_id = 0
        self.last_scale_slot: int | None = None
        self.saturated = False

    @property
    def n(self) -> int:
        """Replica count n_m; replicas flagged for retirement are already excluded."""
        return sum(1 for r in self.replicas if not r.retiring)

    @property
    def busy(self) -> int:
        return sum(1 for r in self.replicas if r.state is ReplicaState.BUSY)

    def add_replica(self, state: ReplicaState, ready_at: float = 0.0) -> Replica:
        r = Replica(self.next_id, state, ready_at)
        self.next_id += 1
        self.replicas.append(r)
        if state is ReplicaState.IDLE:
            self.idle.append(r)
        return r

    def remove(self, r: Replica) -> None:
        self.replicas.remove(r)
        if r.state is ReplicaState.IDLE:
            self.idle.remove(r)


@dataclass(frozen=True)
class Assignment:
    """Outcome of routing one event to a pool."""

    kind: str  # "serve", "queue", "launch" or "drop"
    replica: Replica | None = None


def dispatch_event(
    pool: ReplicaPool | None,
    event: int,
    clock: float,
    *,
    on_demand: bool = True,
    can_grow: bool = True,
    cold_delay: float = 0.0,
) -> Assignment:
    """Hand ``event`` to an idle warm replica, or queue it behind earlier arrivals.

    A pool without any replica launches one cold replica on demand; the event then
    waits ``cold_delay`` before service.  ``pool=None`` means the event's topic has
    no subscriber and the event is dropped.
    """
    if pool is None:
        return Assignment("drop")
    if pool.idle and not pool.backlog:
        r = pool.idle.popleft()
        r.state = ReplicaState.BUSY
        r.event = event
        r.busy_since = clock
        return Assignment("serve", r)
    pool.backlog.append(event)
    if pool.n == 0 and on_demand and can_grow:
        r = pool.add_replica(ReplicaState.COLD, clock + cold_delay)
        return Assignment("launch", r)
    return Assignment("queue")


@dataclass
class FunctionStats:
    function_id: int
    generated: int
    completed: int
    in_flight: int
    dropped: int
    mean_total: float
    p50_total: float
    p95_total: float
    p99_total: float
    mean_ts: float
    mean_wc: float
    mean_wg: float
    mean_tg: float
    mean_wf: float
    mean_tf: float


@dataclass
class SimReport:
    seed: int
    digest: str
    horizon: float
    stages: tuple[str, ...]
    event_count: int
    completed: int
    in_flight: int
    dropped: int
    functions: dict[int, FunctionStats]
    replica_trace: dict[int, list[int]]
    cold_starts: dict[int, list[int]]
    function_utilization: dict[int, list[float]]
    server_utilization: dict[int, list[float]]
    power_trace: list[SlotPowerBreakdown]
    total_energy: float
    scale_log: list[tuple[float, int, int]]
    little: dict[str, tuple[float, float]]
    flags: list[str] = field(default_factory=list)
    samples: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def first_time_at(self, function_id: int, replicas: int) -> float | None:
        """Earliest simulated time at which the pool reached ``replicas``."""
        for t, fid, n in self.scale_log:
            if fid == function_id and n >= replicas:
                return t
        return None


def account_power(
    tau: int,
    duration: float,
    busy_time: float,
    cold_count: int,
    params: ServerPowerParams,
) -> SlotPowerBreakdown:
    """Power of one server over one slot from its replicas' busy time and cold starts."""
    if cold_count > params.max_containers:
        raise OverCapacity(
            f"server {params.id}: {cold_count} cold starts in slot {tau} exceed k={params.max_containers}"
        )
    u = busy_time / (duration * params.core_count) if duration > 0 else 0.0
    u = min(max(u, 0.0), 1.0)
    flags = [i < cold_count for i in range(params.max_containers)]
    return total_server_power(u, flags, params, tau=tau, slot_length=duration)


def _pregenerate(cfg: ScenarioConfig, seed: int, horizon: float):
    """Merged arrival stream with per-event routing and service draws."""
    grid = cfg.grid
    route = cfg.route_table()
    mu_rate = None
    if cfg.controller_rate is not None:
        mu_rate = cfg.controller_rate
    else:
        from .queueing import wireless_rate

        mu_rate = wireless_rate(cfg.channel)  # bits/s; divided by packet size below
    times, fids, targets, gw_s, fn_s, ctrl_s = [], [], [], [], [], []
    for fc in cfg.functions:
        t = arrival_times(fc, grid, seed)
        t = t[t <= horizon]
        if t.size == 0:
            continue
        target = route.get(fc.topic, -1)
        law = cfg.function(target).service if target > 0 else fc.service
        gws = np.empty(t.size)
        fns = np.empty(t.size)
        slot_idx = np.minimum((t // grid.slot_length).astype(np.int64) + 1, grid.slot_count)
        for tau in np.unique(slot_idx):
            sel = slot_idx == tau
            k = int(sel.sum())
            gws[sel] = cfg.gateway_service.sample(
                substream(seed, fc.id, int(tau), StreamTag.GATEWAY_SERVICE), k
            )
            fns[sel] = law.sample(substream(seed, fc.id, int(tau), StreamTag.FUNCTION_SERVICE), k)
        if cfg.controller_rate is not None:
            cs = 1.0 / mu_rate
        else:
            phi = fc.packet_size if fc.packet_size is not None else cfg.channel.packet_size
            cs = phi / mu_rate if mu_rate > 0 else math.inf
        times.append(t)
        fids.append(np.full(t.size, fc.id))
        targets.append(np.full(t.size, target))
        gw_s.append(gws)
        fn_s.append(fns)
        ctrl_s.append(np.full(t.size, cs))
    if not times:
        e = np.empty(0)
        return e, e.astype(np.int64), e.astype(np.int64), e, e, e
    t = np.concatenate(times)
    fid = np.concatenate(fids)
    order = np.lexsort((fid, t))
    return (
        t[order],
        fid[order],
        np.concatenate(targets)[order],
        np.concatenate(gw_s)[order],
        np.concatenate(fn_s)[order],
        np.concatenate(ctrl_s)[order],
    )


def run_simulation(cfg: ScenarioConfig, seed: int, horizon: float | None = None) -> SimReport:
    """Simulate ``cfg`` with ``seed`` up to ``horizon`` seconds (default: whole grid)."""
    H = cfg.sim_horizon if horizon is None else min(horizon, cfg.grid.horizon)
    if not H > 0:
        raise ConfigInvalid([("simulation.horizon", "must be > 0")])
    grid = cfg.grid
    L = grid.slot_length
    n_slots = min(int(math.ceil(H / L - 1e-12)), grid.slot_count)
    policy: AutoscalerPolicy = cfg.autoscaler
    use_ctrl = "controller" in cfg.stages
    use_gw = "gateway" in cfg.stages
    use_pool = "pool" in cfg.stages

    arr, src, target, gw_service, fn_service, ctrl_service = _pregenerate(cfg, seed, H)
    N = int(arr.size)
    arr_l = arr.tolist()
    target_l = target.tolist()
    gw_l = gw_service.tolist()
    fn_l = fn_service.tolist()
    cs_l = ctrl_service.tolist()

    nan = math.nan
    ctrl_start = [nan] * N
    ctrl_done = [nan] * N
    gw_start = [nan] * N
    gw_done = [nan] * N
    pool_start = [nan] * N
    done = [nan] * N
    dropped_mask = [False] * N

    servers = {s.id: s for s in cfg.servers}
    pools: dict[int, ReplicaPool] = {}
    hosted: dict[int, int] = {sid: 0 for sid in servers}
    for fc in cfg.functions:
        host = cfg.host_of(fc.id)
        p = ReplicaPool(fc.id, host, fc.n_max)
        for _ in range(fc.replicas):
            p.add_replica(ReplicaState.IDLE)
        hosted[host] += fc.replicas
        pools[fc.id] = p
    laws = {fc.id: fc.service for fc in cfg.functions}

    window = policy.window if policy.window is not None else L
    rate_win = {fid: SlidingWindow(window) for fid in pools}
    wait_win = {fid: SlidingWindow(window) for fid in pools}
    slot_arrivals = {fid: 0 for fid in pools}

    busy_fn = {fid: [0.0] * n_slots for fid in pools}
    busy_srv = {sid: [0.0] * n_slots for sid in servers}
    replica_time = {fid: [0.0] * n_slots for fid in pools}
    replica_mark = {fid: 0.0 for fid in pools}
    cold_fn = {fid: [0] * n_slots for fid in pools}
    cold_srv = {sid: [0] * n_slots for sid in servers}
    replica_trace = {fid: [] for fid in pools}
    util_fn = {fid: [] for fid in pools}
    util_srv = {sid: [] for sid in servers}
    power_trace: list[SlotPowerBreakdown] = []
    scale_log: list[tuple[float, int, int]] = [(0.0, fid, p.n) for fid, p in pools.items()]
    flags: list[str] = []
    if cfg.phi_heterogeneous:
        flags.append("phi_heterogeneous: analytic formulas assume one common packet size")

    cal: list = []
    seq = 0
    push = heapq.heappush
    pop = heapq.heappop
    for tau in range(1, n_slots + 1):
        push(cal, (min(tau * L, H), P_SLOT, seq, K_SLOT_END, tau, 0))
        seq += 1

    state = {"slot": 1}
    ctrl_q: deque[int] = deque()
    gw_q: deque[int] = deque()
    ctrl_busy = False
    gw_busy = False
    backlog_cap = cfg.backlog_cap
    cap_flagged = set()
    on_demand = policy.on_demand_launch
    per_event_scaling = policy.enabled and policy.evaluation is Evaluation.PER_EVENT

    def update_replica_time(fid: int, now: float) -> None:
        pool = pools[fid]
        slot = state["slot"]
        replica_time[fid][slot - 1] += len(pool.replicas) * (now - replica_mark[fid])
        replica_mark[fid] = now

    def add_busy(pool: ReplicaPool, start: float, end: float) -> None:
        s = state["slot"] - 1
        busy_fn[pool.function_id][s] += end - start
        busy_srv[pool.host_server][s] += end - start

    def start_service(pool: ReplicaPool, r: Replica, i: int, now: float) -> None:
        nonlocal seq
        r.state = ReplicaState.BUSY
        r.event = i
        r.busy_since = now
        pool_start[i] = now
        wait_win[pool.function_id].add(now, now - gw_done[i])
        push(cal, (now + fn_l[i], P_POOL, seq, K_POOL_DONE, pool.function_id, r))
        seq += 1

    def make_idle(pool: ReplicaPool, r: Replica, now: float) -> None:
        nonlocal seq
        if r.retiring:
            update_replica_time(pool.function_id, now)
            pool.replicas.remove(r)
            hosted[pool.host_server] -= 1
            return
        if pool.backlog:
            start_service(pool, r, pool.backlog.popleft(), now)
            return
        r.state = ReplicaState.IDLE
        r.event = -1
        pool.idle.append(r)
        if policy.idle_timeout is not None:
            r.token += 1
            push(cal, (now + policy.idle_timeout, P_POOL, seq, K_EXPIRE, pool.function_id, (r, r.token)))
            seq += 1

    def launch(pool: ReplicaPool, now: float, r: Replica | None = None) -> None:
        nonlocal seq
        server = servers[pool.host_server]
        if r is None:
            update_replica_time(pool.function_id, now)
            r = pool.add_replica(ReplicaState.COLD, now + server.cold_start_delay)
        hosted[pool.host_server] += 1
        slot = state["slot"] - 1
        cold_fn[pool.function_id][slot] += 1
        cold_srv[pool.host_server][slot] += 1
        push(cal, (r.ready_at, P_POOL, seq, K_COLD_READY, pool.function_id, r))
        seq += 1
        scale_log.append((now, pool.function_id, pool.n))

    def apply(pool: ReplicaPool, decision: ScalingDecision, now: float, tau: int) -> None:
        if decision.action is Action.UP:
            launch(pool, now)
            pool.last_scale_slot = tau
        elif decision.action is Action.SATURATED:
            pool.saturated = True
        elif decision.action is Action.DOWN:
            pool.last_scale_slot = tau
            if pool.idle:
                r = pool.idle.pop()
                update_replica_time(pool.function_id, now)
                pool.replicas.remove(r)
                hosted[pool.host_server] -= 1
            else:
                for r in reversed(pool.replicas):
                    if not r.retiring:
                        r.retiring = True
                        break
            scale_log.append((now, pool.function_id, pool.n))

    def evaluate(pool: ReplicaPool, now: float, tau: int, phase: Evaluation, rate) -> None:
        fid = pool.function_id
        measured = wait_win[fid].mean(now) if policy.estimator is Estimator.MEASURED else None
        decision = autoscale_step(
            pool.n,
            pool.n_max,
            policy,
            tau,
            laws[fid],
            rate=rate,
            measured_wait=measured,
            last_scale_slot=pool.last_scale_slot,
            can_grow=hosted[pool.host_server] < servers[pool.host_server].max_containers,
            phase=phase,
        )
        apply(pool, decision, now, tau)

    def pool_arrive(i: int, now: float) -> None:
        nonlocal n_completed, n_dropped
        gw_done[i] = now
        if not use_pool:
            pool_start[i] = now
            done[i] = now
            n_completed += 1
            return
        fid = target_l[i]
        pool = pools.get(fid) if fid > 0 else None
        if pool is None:
            dropped_mask[i] = True
            n_dropped += 1
            unmapped.append(i)
            return
        rate_win[fid].add(now)
        slot_arrivals[fid] += 1
        server = servers[pool.host_server]
        if not pool.replicas:
            update_replica_time(fid, now)
        assignment = dispatch_event(
            pool,
            i,
            now,
            on_demand=on_demand,
            can_grow=hosted[pool.host_server] < server.max_containers,
            cold_delay=server.cold_start_delay,
        )
        if assignment.kind == "serve":
            pool_start[i] = now
            wait_win[fid].add(now, 0.0)
            push_done(pool, assignment.replica, i, now)
        elif assignment.kind == "launch":
            launch(pool, now, assignment.replica)
        if len(pool.backlog) > backlog_cap and fid not in cap_flagged:
            cap_flagged.add(fid)
            flags.append(f"unbounded_growth: pool {fid} backlog exceeded {backlog_cap}")
        if per_event_scaling and pool.n > 0:
            evaluate(pool, now, state["slot"], Evaluation.PER_EVENT, rate_win[fid].rate(now))

    def push_done(pool: ReplicaPool, r: Replica, i: int, now: float) -> None:
        nonlocal seq
        push(cal, (now + fn_l[i], P_POOL, seq, K_POOL_DONE, pool.function_id, r))
        seq += 1

    def gw_arrive(i: int, now: float) -> None:
        nonlocal gw_busy, seq
        ctrl_done[i] = now
        if not use_gw:
            gw_start[i] = now
            pool_arrive(i, now)
            return
        if gw_busy:
            gw_q.append(i)
            if len(gw_q) > backlog_cap and "gateway" not in cap_flagged:
                cap_flagged.add("gateway")
                flags.append(f"unbounded_growth: gateway backlog exceeded {backlog_cap}")
        else:
            gw_busy = True
            gw_start[i] = now
            push(cal, (now + gw_l[i], P_GATEWAY, seq, K_GW_DONE, i, None))
            seq += 1

    def slot_end(tau: int, now: float) -> None:
        start = (tau - 1) * L
        duration = now - start
        for fid, pool in pools.items():
            for r in pool.replicas:
                if r.state is ReplicaState.BUSY:
                    add_busy(pool, r.busy_since, now)
                    r.busy_since = now
            update_replica_time(fid, now)
        if policy.enabled:
            for fid, pool in pools.items():
                rate = slot_arrivals[fid] / duration if duration > 0 else 0.0
                if policy.evaluation is Evaluation.PER_SLOT and pool.n > 0:
                    evaluate(pool, now, tau, Evaluation.PER_SLOT, rate)
                elif policy.scale_down_enabled:
                    decision = autoscale_step(
                        pool.n, pool.n_max, policy, tau, laws[fid], rate=rate,
                        last_scale_slot=pool.last_scale_slot, phase=Evaluation.PER_SLOT,
                    )
                    if decision.action is Action.DOWN:
                        apply(pool, decision, now, tau)
        for fid, pool in pools.items():
            slot_arrivals[fid] = 0
            replica_trace[fid].append(pool.n)
            rt = replica_time[fid][tau - 1]
            util_fn[fid].append(min(busy_fn[fid][tau - 1] / rt, 1.0) if rt > 0 else 0.0)
        for sid, params in servers.items():
            bd = account_power(tau, duration, busy_srv[sid][tau - 1], cold_srv[sid][tau - 1], params)
            util_srv[sid].append(bd.utilization)
            power_trace.append(bd)
        state["slot"] = tau + 1

    n_completed = 0
    n_dropped = 0
    unmapped: list[int] = []
    nxt = 0
    inf = math.inf
    while True:
        ta = arr_l[nxt] if nxt < N else inf
        tc = cal[0][0] if cal else inf
        if ta <= tc:
            # external arrivals precede calendar entries at equal times
            if ta > H:
                break
            i = nxt
            nxt += 1
            now = ta
            if use_ctrl:
                if ctrl_busy:
                    ctrl_q.append(i)
                    if len(ctrl_q) > backlog_cap and "controller" not in cap_flagged:
                        cap_flagged.add("controller")
                        flags.append(f"unbounded_growth: controller backlog exceeded {backlog_cap}")
                else:
                    ctrl_busy = True
                    ctrl_start[i] = now
                    push(cal, (now + cs_l[i], P_CONTROLLER, seq, K_CTRL_DONE, i, None))
                    seq += 1
            else:
                ctrl_start[i] = now
                gw_arrive(i, now)
            continue
        if tc > H:
            break
        now, _, _, kind, a, b = pop(cal)
        if kind == K_CTRL_DONE:
            if ctrl_q:
                j = ctrl_q.popleft()
                ctrl_start[j] = now
                push(cal, (now + cs_l[j], P_CONTROLLER, seq, K_CTRL_DONE, j, None))
                seq += 1
            else:
                ctrl_busy = False
            gw_arrive(a, now)
        elif kind == K_GW_DONE:
            if gw_q:
                j = gw_q.popleft()
                gw_start[j] = now
                push(cal, (now + gw_l[j], P_GATEWAY, seq, K_GW_DONE, j, None))
                seq += 1
            else:
                gw_busy = False
            pool_arrive(a, now)
        elif kind == K_POOL_DONE:
            pool = pools[a]
            r = b
            i = r.event
            done[i] = now
            n_completed += 1
            add_busy(pool, r.busy_since, now)
            make_idle(pool, r, now)
        elif kind == K_COLD_READY:
            pool = pools[a]
            r = b
            if r.state is ReplicaState.COLD:
                make_idle(pool, r, now)
        elif kind == K_EXPIRE:
            pool = pools[a]
            r, token = b
            if r.state is ReplicaState.IDLE and r.token == token:
                update_replica_time(a, now)
                pool.idle.remove(r)
                pool.replicas.remove(r)
                hosted[pool.host_server] -= 1
                scale_log.append((now, a, pool.n))
        else:
            slot_end(a, now)

    # ---- summarise
    t_arr = arr
    c_start = np.asarray(ctrl_start)
    c_done = np.asarray(ctrl_done)
    g_start = np.asarray(gw_start)
    g_done = np.asarray(gw_done)
    p_start = np.asarray(pool_start)
    t_done = np.asarray(done)
    dropped = np.asarray(dropped_mask, dtype=bool)
    completed = ~np.isnan(t_done)
    ts = c_done - t_arr
    wc = c_start - t_arr
    wg = g_start - c_done
    tg = g_done - c_done
    wf = p_start - g_done
    tf = t_done - g_done
    total = ts + tg + tf

    fstats: dict[int, FunctionStats] = {}
    for fc in cfg.functions:
        gen = src == fc.id
        sel = completed & (target == fc.id)
        n_sel = int(sel.sum())

        def m(x, sel=sel, n_sel=n_sel):
            return float(x[sel].mean()) if n_sel else math.nan

        def q(p, sel=sel, n_sel=n_sel):
            return float(np.percentile(total[sel], p)) if n_sel else math.nan

        fstats[fc.id] = FunctionStats(
            function_id=fc.id,
            generated=int(gen.sum()),
            completed=int((completed & gen).sum()),
            in_flight=int((gen & ~completed & ~dropped).sum()),
            dropped=int((gen & dropped).sum()),
            mean_total=m(total),
            p50_total=q(50),
            p95_total=q(95),
            p99_total=q(99),
            mean_ts=m(ts),
            mean_wc=m(wc),
            mean_wg=m(wg),
            mean_tg=m(tg),
            mean_wf=m(wf),
            mean_tf=m(tf),
        )

    little = {}
    for name, enter, leave, used in (
        ("controller", t_arr, c_done, use_ctrl),
        ("gateway", c_done, g_done, use_gw),
        ("pool", g_done, t_done, use_pool),
    ):
        if not used or N == 0:
            continue
        entered = ~np.isnan(enter)
        if use_pool and name == "pool":
            entered &= ~dropped
        exit_t = np.where(np.isnan(leave), H, leave)[entered]
        area = float(np.sum(exit_t - enter[entered]))
        finished = entered & ~np.isnan(leave)
        mean_sojourn = float(np.mean(leave[finished] - enter[finished])) if finished.any() else 0.0
        lam = float(entered.sum()) / H
        little[name] = (area / H, lam * mean_sojourn)

    if unmapped:
        flags.append(f"unmapped_topic: {len(unmapped)} events dropped ({UnmappedTopic.__name__})")
    for fid, pool in pools.items():
        if pool.saturated:
            flags.append(f"saturated: pool {fid} reached its replica cap with wait >= threshold")

    n_in_flight = N - n_completed - n_dropped
    energy = math.fsum(bd.energy for bd in power_trace)
    return SimReport(
        seed=seed,
        digest=cfg.digest(),
        horizon=H,
        stages=tuple(cfg.stages),
        event_count=N,
        completed=n_completed,
        in_flight=n_in_flight,
        dropped=n_dropped,
        functions=fstats,
        replica_trace=replica_trace,
        cold_starts={fid: cold_fn[fid][:] for fid in pools},
        function_utilization=util_fn,
        server_utilization=util_srv,
        power_trace=power_trace,
        total_energy=energy,
        scale_log=scale_log,
        little=little,
        flags=flags,
        samples={
            "arrival": t_arr,
            "function": target,
            "completed": completed,
            "ts": ts,
            "wc": wc,
            "wg": wg,
            "tg": tg,
            "wf": wf,
            "tf": tf,
            "total": total,
        },
    )
