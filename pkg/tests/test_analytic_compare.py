import math

import numpy as np
import pytest
from conftest import pipeline

from sdnfaas.analytic import replica_plan, run_analytic
from sdnfaas.autoscaler import AutoscalerPolicy
from sdnfaas.compare import Tolerances, batch_means, run_compare
from sdnfaas.config import parse_scenario, shipped_scenario
from sdnfaas.errors import ConfigInvalid
from sdnfaas.queueing import MgnMode
from sdnfaas.workload import ServiceDistribution as SD


class TestAnalytic:
    def test_paper_grid_top_point(self):
        cfg = parse_scenario(shipped_scenario("paper_grid"))
        rep = run_analytic(cfg)
        row = rep.row(1, 1)
        assert row.rate == 2.5
        assert row.ts == pytest.approx(0.0005 / 0.95 * 0.05 + 0.001, rel=1e-12)  # M/D/1 at rho = 0.05
        assert rep.all_stable

    def test_pool_only_worked(self):
        rep = run_analytic(pipeline(lam=5.0, replicas=2, stages=("pool",), slots=1))
        r = rep.row(1, 1)
        assert r.ts == 0.0 and r.tg == 0.0
        assert r.wf == pytest.approx(1 / 15, rel=1e-12)
        assert r.total == pytest.approx(1 / 15 + 0.2, rel=1e-12)
        assert r.utilization == 0.5

    def test_mode_switch(self):
        cfg = pipeline(lam=5.0, replicas=2, stages=("pool",), slots=1)
        g = run_analytic(cfg).row(1, 1).wf
        p = run_analytic(cfg, MgnMode.PAPER_LITERAL).row(1, 1).wf
        assert p == pytest.approx(g / 2, rel=1e-12)

    def test_unstable_rows_are_marked(self):
        rep = run_analytic(pipeline(lam=12.0, replicas=2, slots=1))
        r = rep.row(1, 1)
        assert r.status == "unstable:function pool"
        assert r.wf is None and r.total is None
        assert not rep.all_stable
        assert all(math.isfinite(p.total) for p in rep.power)

    def test_no_replica_marked(self):
        assert run_analytic(pipeline(lam=1.0, replicas=0, slots=1)).row(1, 1).status == "no_replica"

    def test_zero_rate_slot(self):
        r = run_analytic(pipeline(lam=0.0, slots=1)).row(1, 1)
        assert r.wf == 0.0 and r.status == "ok"

    def test_replica_plan_grows_and_counts_cold(self):
        pol = AutoscalerPolicy(enabled=True, threshold=0.05)
        cfg = pipeline(lam=[0.5, 4.5, 2.0], replicas=1, autoscaler=pol)
        assert replica_plan(cfg)[1] == [1, 3, 3]
        rep = run_analytic(cfg)
        assert [rep.row(t, 1).cold_starts for t in (1, 2, 3)] == [0, 2, 0]
        assert [p.cold_count for p in rep.power] == [0, 2, 0]

    def test_replica_plan_scale_down(self):
        pol = AutoscalerPolicy(enabled=True, threshold=0.05, scale_down_enabled=True)
        cfg = pipeline(lam=[0.5, 4.5, 2.0], replicas=1, autoscaler=pol)
        assert replica_plan(cfg)[1] == [1, 3, 2]

    def test_power_follows_load(self):
        rep = run_analytic(pipeline(lam=2.5, replicas=1, slots=1))
        p = rep.power[0]
        assert p.utilization == pytest.approx(0.5, rel=1e-9)
        assert p.total == pytest.approx(155.0, rel=1e-9)


class TestBatchMeans:
    def test_constant(self):
        m, lo, hi = batch_means(np.full(1000, 2.0))
        assert m == lo == hi == 2.0

    def test_interval_covers_mean(self):
        x = np.random.default_rng(1).exponential(1.0, 100_000)
        m, lo, hi = batch_means(x)
        assert lo < 1.0 < hi and lo < m < hi

    def test_too_short(self):
        m, lo, hi = batch_means(np.array([1.0, 2.0]), batches=20, warmup_fraction=0.0)
        assert m == 1.5 and math.isnan(lo)


class TestCompare:
    def test_short_mm1_passes(self):
        cfg = pipeline(lam=2.5, replicas=1, slots=4, slot_length=2500.0)
        rep = run_compare(cfg, Tolerances(pool=0.1), seeds=(1, 2))
        assert rep.get("T", "f1").passed, rep.get("T", "f1")
        assert rep.get("P_s", "s1").passed
        assert rep.get("energy").passed

    def test_unstable_fails_cleanly(self):
        cfg = pipeline(lam=6.0, replicas=1, slots=2, slot_length=50.0)
        rep = run_compare(cfg, seeds=(1,))
        wf = rep.get("Wf", "f1")
        assert wf.analytic is None and not wf.passed and wf.note == "unstable"
        assert not rep.passed

    def test_autoscaler_rejected(self):
        with pytest.raises(ConfigInvalid):
            run_compare(pipeline(autoscaler=AutoscalerPolicy(enabled=True)))

    def test_deterministic_gateway_small_delays(self):
        cfg = pipeline(lam=1.0, gateway=SD.deterministic(1e-6), slots=2, slot_length=500.0)
        rep = run_compare(cfg, seeds=(3,))
        assert rep.get("Wg").passed  # well inside the absolute floor


def test_grid_argmin_at_low_rate_many_replicas():
    from sdnfaas.sweep import with_axis

    base = parse_scenario(shipped_scenario("paper_grid"))
    t = {
        (lam, n): run_analytic(with_axis(with_axis(base, "lambda", lam), "replicas", n)).row(1, 1).total
        for lam in range(20, 101, 10)
        for n in range(2, 11)
    }
    assert min(t, key=t.get) == (20, 10)


def test_paper_grid_ranges():
    cfg = parse_scenario(shipped_scenario("paper_grid"))
    s = cfg.servers[0]
    assert 1e9 <= s.cpu_freq <= 2e9
    assert 0.15 <= s.cold_start_delay <= 0.85


def test_idle_slots_draw_idle_power():
    rep = run_analytic(pipeline(lam=[0.0, 2.5, 0.0], replicas=1))
    assert [p.total for p in rep.power][::2] == [100.0, 100.0]


@pytest.mark.parametrize(
    "name,metric,subject",
    [("md1_controller", "TS", "all"), ("mm1_oracle", "Wg", "all"), ("mdn_oracle", "Wf", "f1")],
)
def test_oracle_scenarios_compare(name, metric, subject):
    cfg = parse_scenario(shipped_scenario(name))
    rep = run_compare(cfg, seeds=(1,))
    m = rep.get(metric, subject)
    assert m.passed and m.ci_low < m.simulated < m.ci_high, m
    # warm pools and no autoscaler: no cold-start power anywhere
    assert all(p.cold_total == 0.0 for r in rep.runs for p in r.power_trace)
