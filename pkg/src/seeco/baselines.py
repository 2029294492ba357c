"""Reference offloading strategies for head-to-head comparisons.

========== =====================================================================
local      everything on the mobile device; no search needed, no transfers,
           zero risk, energy independent of the deadline and risk cap
max_level  GA over order and placement with both services pinned to their
           strongest algorithm; workflow risk is exactly zero
min_level  GA with security absent: no time cost, but crossing data is fully
           exposed, so risk saturates; evaluated without the risk cap since
           every offloading solution would otherwise be infeasible
confi      GA with only the confidentiality service in the threat model
integ      GA with only the integrity service in the threat model
seeco      the full GA over all four gene vectors
========== =====================================================================
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .evaluator import (
    Chromosome,
    EvalOptions,
    EvaluationResult,
    ServiceMode,
    evaluate,
)
from .ga import GaParams, GaRun, GeneConstraints, run
from .platform import MD_LOCATION, Platform
from .security import RiskModel, SecurityCatalog, Service
from .workflow import Workflow, canonical_order


class StrategyKind(str, Enum):
    LOCAL = "local"
    MAX_LEVEL = "max"
    MIN_LEVEL = "min"
    CONFI_ONLY = "confi"
    INTEG_ONLY = "integ"
    SEECO = "seeco"


@dataclass(frozen=True)
class Strategy:
    kind: StrategyKind
    literal_decrypt_ratio: bool = True

    @classmethod
    def parse(cls, name: str, literal_decrypt_ratio: bool = True) -> "Strategy":
        try:
            return cls(StrategyKind(name), literal_decrypt_ratio)
        except ValueError:
            valid = ", ".join(k.value for k in StrategyKind)
            raise ValueError(f"unknown strategy {name!r}; expected one of {valid}")


@dataclass(frozen=True)
class SolveOutcome:
    chromosome: Chromosome
    result: EvaluationResult
    ga_run: GaRun | None  # None for strategies that need no search


def search_setup(strategy: Strategy, cat: SecurityCatalog) -> tuple[GeneConstraints, EvalOptions]:
    """Gene freezes and evaluation modes that realize a strategy."""
    kind = strategy.kind
    base = dict(decrypt_producer_core_ratio=strategy.literal_decrypt_ratio)
    strongest_conf = cat.strongest_id(Service.CONFIDENTIALITY)
    strongest_integ = cat.strongest_id(Service.INTEGRITY)
    if kind in (StrategyKind.SEECO, StrategyKind.LOCAL):
        return GeneConstraints.from_catalog(cat), EvalOptions(**base)
    if kind is StrategyKind.MAX_LEVEL:
        cons = GeneConstraints.from_catalog(
            cat, fixed_conf_level=strongest_conf, fixed_integ_level=strongest_integ)
        return cons, EvalOptions(**base)
    if kind is StrategyKind.MIN_LEVEL:
        cons = GeneConstraints.from_catalog(
            cat, fixed_conf_level=strongest_conf, fixed_integ_level=strongest_integ)
        return cons, EvalOptions(conf_mode=ServiceMode.UNPROTECTED,
                                 integ_mode=ServiceMode.UNPROTECTED,
                                 ignore_risk_cap=True, **base)
    if kind is StrategyKind.CONFI_ONLY:
        cons = GeneConstraints.from_catalog(cat, fixed_integ_level=strongest_integ)
        return cons, EvalOptions(integ_mode=ServiceMode.DISABLED, **base)
    if kind is StrategyKind.INTEG_ONLY:
        cons = GeneConstraints.from_catalog(cat, fixed_conf_level=strongest_conf)
        return cons, EvalOptions(conf_mode=ServiceMode.DISABLED, **base)
    raise ValueError(f"unhandled strategy kind {kind}")


def local_chromosome(w: Workflow, cat: SecurityCatalog) -> Chromosome:
    """Canonical order, everything on the MD, levels pinned (and moot)."""
    n = w.n
    return Chromosome(
        order=tuple(canonical_order(w)),
        locations=(MD_LOCATION,) * n,
        conf_levels=(cat.strongest_id(Service.CONFIDENTIALITY),) * n,
        integ_levels=(cat.strongest_id(Service.INTEGRITY),) * n,
    )


# Strategies with free level genes start every individual at the strongest
# levels (risk-free), letting evolution relax security where the cap allows.
# A purely random population drifts back to the all-MD attractor under tight
# risk caps: offloading one task then needs placement and both level genes
# to line up in a single variation step.
STRONG_SEED_FRACTION = 1.0


def solve_detailed(
    strategy: Strategy,
    w: Workflow,
    p: Platform,
    cat: SecurityCatalog,
    risk_model: RiskModel,
    params: GaParams | None = None,
) -> SolveOutcome:
    constraints, options = search_setup(strategy, cat)
    if strategy.kind is StrategyKind.LOCAL:
        c = local_chromosome(w, cat)
        return SolveOutcome(c, evaluate(c, w, p, cat, risk_model, options), None)
    seeding = 0.0
    if constraints.fixed_conf_level is None or constraints.fixed_integ_level is None:
        seeding = STRONG_SEED_FRACTION
    ga_run = run(w, p, cat, risk_model, params, constraints=constraints,
                 options=options, strong_seed_fraction=seeding, warm_start=True)
    return SolveOutcome(ga_run.best_chromosome, ga_run.best_result, ga_run)


def solve(
    strategy: Strategy,
    w: Workflow,
    p: Platform,
    cat: SecurityCatalog,
    risk_model: RiskModel,
    params: GaParams | None = None,
) -> tuple[Chromosome, EvaluationResult]:
    outcome = solve_detailed(strategy, w, p, cat, risk_model, params)
    return outcome.chromosome, outcome.result
