import math

import pytest

from seeco.baselines import (
    Strategy,
    StrategyKind,
    local_chromosome,
    solve,
    solve_detailed,
)
from seeco.evaluator import evaluate
from seeco.ga import GaParams
from seeco.platform import MD_LOCATION, default_platform
from seeco.security import RiskModel, default_catalog
from seeco.workflow import GeneratorConfig, Task, Workflow, compute_deadline, random_workflow

CAT = default_catalog()
RISK = RiskModel()
PLATFORM = default_platform()
FAST = GaParams(pop_size=16, iterations=25, seed=1)


def offload_friendly_workflow(n=8, seed=3):
    """Heavy compute, light payloads: offloading clearly pays off."""
    cfg = GeneratorConfig(data_range_mb=(1.0, 3.0), workload_range_gcycles=(8.0, 15.0))
    w = random_workflow(n, 0.3, gen_cfg=cfg, seed=seed)
    w.deadline_s = compute_deadline(w, PLATFORM, CAT)
    return w


class TestLocal:
    def test_two_task_example(self):
        w = Workflow(
            tasks=(Task(0, 10.0, 10.0, 2.36), Task(1, 10.0, 10.0, 2.36)),
            edges=((0, 1),), deadline_s=10.0, risk_cap=0.5)
        _, res = solve(Strategy(StrategyKind.LOCAL), w, PLATFORM, CAT, RISK)
        assert res.energy_j == pytest.approx(1.0)
        assert res.risk == 0.0

    def test_energy_closed_form(self):
        for seed in range(4):
            w = random_workflow(9, 0.4, seed=seed)
            w.deadline_s = 5.0  # deliberately tight; energy must not care
            _, res = solve(Strategy(StrategyKind.LOCAL), w, PLATFORM, CAT, RISK)
            expected = PLATFORM.md.p_comp_w * sum(
                t.workload_gcycles for t in w.tasks) / PLATFORM.md.vm.capability_ghz
            assert res.energy_j == pytest.approx(expected, rel=1e-12)

    def test_energy_independent_of_caps(self):
        w = random_workflow(7, 0.4, seed=11)
        results = []
        for deadline, cap in ((1.0, 0.1), (100.0, 0.9)):
            w.deadline_s = deadline
            w.risk_cap = cap
            results.append(solve(Strategy(StrategyKind.LOCAL), w, PLATFORM, CAT, RISK)[1])
        assert results[0].energy_j == results[1].energy_j
        assert not results[0].feasible and results[1].feasible

    def test_no_search_performed(self):
        w = offload_friendly_workflow()
        outcome = solve_detailed(Strategy(StrategyKind.LOCAL), w, PLATFORM, CAT, RISK, FAST)
        assert outcome.ga_run is None
        assert set(outcome.chromosome.locations) == {MD_LOCATION}


class TestMaxLevel:
    def test_zero_risk_exactly(self):
        w = offload_friendly_workflow()
        chromo, res = solve(Strategy(StrategyKind.MAX_LEVEL), w, PLATFORM, CAT, RISK, FAST)
        assert res.risk == 0.0
        assert set(chromo.conf_levels) == {1}
        assert set(chromo.integ_levels) == {1}


class TestMinLevel:
    def test_risk_saturates_with_crossings(self):
        w = offload_friendly_workflow(n=10, seed=5)
        chromo, res = solve(Strategy(StrategyKind.MIN_LEVEL), w, PLATFORM, CAT, RISK, FAST)
        crossings = sum(1 for row in res.timings if row.risk > 0)
        assert crossings >= 3
        assert res.risk >= 0.999

    def test_no_security_time_cost(self):
        w = offload_friendly_workflow(n=6, seed=9)
        _, res = solve(Strategy(StrategyKind.MIN_LEVEL), w, PLATFORM, CAT, RISK, FAST)
        for row in res.timings:
            assert row.encrypt_cost == 0.0
            assert row.decrypt_cost == 0.0

    def test_risk_cap_not_binding(self):
        w = offload_friendly_workflow(n=8, seed=13)
        w.risk_cap = 0.01
        _, res = solve(Strategy(StrategyKind.MIN_LEVEL), w, PLATFORM, CAT, RISK, FAST)
        # feasibility here means deadline only; saturated risk must not block it
        assert res.risk > w.risk_cap
        assert res.feasible


class TestSingleService:
    def test_confi_only_has_no_integrity_cost_or_risk(self):
        w = offload_friendly_workflow(n=8, seed=7)
        chromo, res = solve(Strategy(StrategyKind.CONFI_ONLY), w, PLATFORM, CAT, RISK, FAST)
        again = evaluate(chromo, w, PLATFORM, CAT, RISK)  # both services active
        assert res.makespan_s <= again.makespan_s
        for row in res.timings:
            if row.risk > 0:
                # exposure only through the confidentiality channel
                assert row.risk < 1 - math.exp(-RISK.lambda_conf) + 1e-12

    def test_integ_only_risk_bounded_by_integrity_channel(self):
        w = offload_friendly_workflow(n=8, seed=7)
        _, res = solve(Strategy(StrategyKind.INTEG_ONLY), w, PLATFORM, CAT, RISK, FAST)
        cap = 1 - math.exp(-RISK.lambda_integ)
        for row in res.timings:
            assert row.risk <= cap + 1e-12


class TestStrategyParsing:
    def test_all_names_round_trip(self):
        for kind in StrategyKind:
            assert Strategy.parse(kind.value).kind is kind

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown strategy"):
            Strategy.parse("annealing")


class TestOrdering:
    def test_mean_energy_ordering_on_one_instance(self):
        # local >= max_level >= seeco >= min_level (averaged over seeds)
        w = offload_friendly_workflow(n=10, seed=21)
        means = {}
        for kind in (StrategyKind.LOCAL, StrategyKind.MAX_LEVEL,
                     StrategyKind.SEECO, StrategyKind.MIN_LEVEL):
            vals = []
            for seed in range(1, 6):
                params = GaParams(pop_size=20, iterations=40, seed=seed)
                vals.append(solve(Strategy(kind), w, PLATFORM, CAT, RISK, params)[1].energy_j)
            means[kind] = sum(vals) / len(vals)
        assert means[StrategyKind.LOCAL] >= means[StrategyKind.MAX_LEVEL] - 1e-9
        assert means[StrategyKind.MAX_LEVEL] >= means[StrategyKind.SEECO] - 1e-9
        assert means[StrategyKind.SEECO] >= means[StrategyKind.MIN_LEVEL] - 1e-9

    def test_local_chromosome_shape(self):
        w = offload_friendly_workflow(n=5, seed=2)
        c = local_chromosome(w, CAT)
        assert set(c.locations) == {MD_LOCATION}
        assert len(c.order) == 5
