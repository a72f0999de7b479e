"""CSV and text emission.  Column orders are fixed; floats use shortest round-trip repr."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable

from .analytic import AnalyticReport
from .compare import ComparisonReport
from .engine import SimReport
from .power import SlotPowerBreakdown
from .sweep import COLUMNS as SWEEP_COLUMNS
from .sweep import SweepResult

UNSTABLE = "UNSTABLE"

ANALYTIC_COLUMNS = (
    "digest", "mode", "tau", "function_id", "rate", "replicas", "cold_starts",
    "controller_wait", "TS", "Wg", "Tg", "Tp", "Wf", "Tf", "T", "U_m", "status",
)  # fmt: skip
SIM_COLUMNS = (
    "digest", "seed", "function_id", "generated", "completed", "in_flight", "dropped",
    "mean_T", "p50_T", "p95_T", "p99_T", "mean_TS", "mean_Wc", "mean_Wg", "mean_Tg", "mean_Wf", "mean_Tf",
)  # fmt: skip
TRACE_COLUMNS = (
    "digest", "seed", "tau", "server_id", "duration", "U_s", "Pidle", "Pdyn", "Pw",
    "cold_count", "Pc_total", "P_s", "energy", "cold_energy", "cold_slot_avg_power",
)  # fmt: skip
COMPARE_COLUMNS = (
    "digest", "metric", "subject", "analytic", "simulated", "ci_low", "ci_high",
    "rel_error", "tolerance", "pass", "note",
)  # fmt: skip


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return repr(v)
    if hasattr(v, "item"):
        return fmt(v.item())
    return str(v)


def to_csv(columns: Iterable[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = list(columns)
    w.writerow(cols)
    for r in rows:
        w.writerow([fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def analytic_rows(rep: AnalyticReport) -> list[dict]:
    rows = []
    for r in rep.rows:
        d = {
            "digest": rep.digest, "mode": rep.mode.value, "tau": r.tau, "function_id": r.function_id,
            "rate": r.rate, "replicas": r.replicas, "cold_starts": r.cold_starts,
            "controller_wait": r.controller_wait, "TS": r.ts, "Wg": r.wg, "Tg": r.tg, "Tp": r.tp,
            "Wf": r.wf, "Tf": r.tf, "T": r.total, "U_m": r.utilization, "status": r.status,
        }  # fmt: skip
        if not r.stable:
            for k in ("controller_wait", "TS", "Wg", "Tg", "Tp", "Wf", "Tf", "T", "U_m"):
                if d[k] is None:
                    d[k] = UNSTABLE
        rows.append(d)
    return rows


def trace_rows(trace: list[SlotPowerBreakdown], digest: str, seed) -> list[dict]:
    return [
        {
            "digest": digest, "seed": seed, "tau": p.tau, "server_id": p.server_id, "duration": p.duration,
            "U_s": p.utilization, "Pidle": p.idle, "Pdyn": p.dynamic, "Pw": p.warm,
            "cold_count": p.cold_count, "Pc_total": p.cold_total, "P_s": p.total, "energy": p.energy,
            "cold_energy": p.cold_energy_view.energy if p.cold_energy_view else None,
            "cold_slot_avg_power": p.cold_energy_view.slot_average_power if p.cold_energy_view else None,
        }  # fmt: skip
        for p in trace
    ]


def sim_rows(rep: SimReport) -> list[dict]:
    rows = []
    for fid, f in rep.functions.items():
        rows.append(
            {
                "digest": rep.digest, "seed": rep.seed, "function_id": fid, "generated": f.generated,
                "completed": f.completed, "in_flight": f.in_flight, "dropped": f.dropped,
                "mean_T": f.mean_total, "p50_T": f.p50_total, "p95_T": f.p95_total, "p99_T": f.p99_total,
                "mean_TS": f.mean_ts, "mean_Wc": f.mean_wc, "mean_Wg": f.mean_wg, "mean_Tg": f.mean_tg,
                "mean_Wf": f.mean_wf, "mean_Tf": f.mean_tf,
            }  # fmt: skip
        )
    return rows


def compare_rows(rep: ComparisonReport) -> list[dict]:
    return [
        {
            "digest": rep.digest, "metric": m.metric, "subject": m.subject,
            "analytic": UNSTABLE if m.analytic is None else m.analytic, "simulated": m.simulated,
            "ci_low": m.ci_low, "ci_high": m.ci_high, "rel_error": m.rel_error,
            "tolerance": m.tolerance, "pass": m.passed, "note": m.note,
        }  # fmt: skip
        for m in rep.metrics
    ]


def sweep_rows(res: SweepResult) -> list[dict]:
    out = []
    for r in res.rows:
        d = dict(r)
        for c in SWEEP_COLUMNS:
            if c.startswith("an_") and c in d and d[c] is None:
                d[c] = UNSTABLE
        out.append(d)
    return out


def analytic_summary(rep: AnalyticReport) -> str:
    lines = [f"analytic report  digest={rep.digest}", *rep.notes]
    unstable = [r for r in rep.rows if not r.stable]
    lines.append(f"rows={len(rep.rows)} unstable={len(unstable)}")
    lines.append(f"total_energy_J={fmt(rep.total_energy)}")
    return "\n".join(lines) + "\n"


def sim_summary(rep: SimReport) -> str:
    lines = [
        f"simulation  digest={rep.digest} seed={rep.seed} horizon={fmt(rep.horizon)}",
        f"events={rep.event_count} completed={rep.completed} in_flight={rep.in_flight} dropped={rep.dropped}",
        f"conservation={'ok' if rep.event_count == rep.completed + rep.in_flight + rep.dropped else 'VIOLATED'}",
        f"total_energy_J={fmt(rep.total_energy)}",
    ]
    for stage, (area, product) in rep.little.items():
        lines.append(f"little[{stage}] L={fmt(area)} lambda*W={fmt(product)}")
    for fid, trace in rep.replica_trace.items():
        lines.append(f"replicas[f{fid}]={' '.join(map(str, trace))}")
    lines.extend(f"flag: {f}" for f in rep.flags)
    return "\n".join(lines) + "\n"


def compare_summary(rep: ComparisonReport) -> str:
    lines = [f"comparison  digest={rep.digest} seeds={list(rep.seeds)} events={rep.events}"]
    for m in rep.metrics:
        rel = "n/a" if m.rel_error is None else f"{m.rel_error:.4%}"
        lines.append(
            f"{'PASS' if m.passed else 'FAIL'}  {m.metric:<6} {m.subject:<5} analytic={fmt(m.analytic)} "
            f"simulated={fmt(m.simulated)} rel_err={rel} tol={m.tolerance}"
        )
    lines.append("overall: " + ("PASS" if rep.passed else "FAIL"))
    return "\n".join(lines) + "\n"


def sweep_summary(res: SweepResult) -> str:
    lines = [f"sweep axis={res.axis} points={len(res.values)} rows={len(res.rows)}"]
    for c in res.checks:
        lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    errors = [r for r in res.rows if str(r.get("status", "")).startswith("error")]
    lines.append(f"failed_rows={len(errors)}")
    return "\n".join(lines) + "\n"


def write(outdir: Path, name: str, text: str) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    p = outdir / name
    with open(p, "w", newline="") as fh:
        fh.write(text)
    return p
