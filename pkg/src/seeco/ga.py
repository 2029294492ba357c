"""Improved genetic algorithm over the four-vector chromosome.

Operators preserve chromosome validity by construction: order crossover
keeps one parent's prefix and fills the tail in the other parent's
relative order, order mutation relocates a task only inside the window
between its last predecessor and first successor, and the entry/exit
placement genes are re-pinned to the MD after every variation.

Selection is a binary tournament under feasibility-first rules (two
feasible solutions compare on energy, feasible beats infeasible,
infeasible ones compare on summed violation).  One elite individual is
carried over per generation so the best-so-far never worsens.

A run is deterministic for a fixed seed: all draws come from one
``random.Random`` advanced in a fixed sequence.  Evaluation itself is
pure, so populations may be scored in parallel by callers that manage
their own RNG discipline; this implementation stays single-threaded.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

from .evaluator import (
    Chromosome,
    DEFAULT_OPTIONS,
    EvalOptions,
    EvaluationResult,
    better,
    deb_key,
    make_evaluator,
)
from .platform import MD_LOCATION, Platform
from .security import RiskModel, SecurityCatalog, Service
from .workflow import Workflow, greedy_witness


@dataclass(frozen=True)
class GaParams:
    pop_size: int = 40
    iterations: int = 150
    p_c: float = 0.5
    p_m: float = 0.3
    seed: int = 0
    elitism: int = 1

    def __post_init__(self) -> None:
        if self.pop_size < 2:
            raise ValueError(f"pop_size must be >= 2, got {self.pop_size}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not 0.0 <= self.p_c <= 1.0 or not 0.0 <= self.p_m <= 1.0:
            raise ValueError("p_c and p_m must be probabilities")
        if not 0 <= self.elitism < self.pop_size:
            raise ValueError("elitism must satisfy 0 <= elitism < pop_size")


@dataclass(frozen=True)
class GeneConstraints:
    """Gene alphabets, plus optional frozen level genes for baselines."""

    conf_level_count: int = 5
    integ_level_count: int = 5
    fixed_conf_level: int | None = None
    fixed_integ_level: int | None = None
    strongest_conf_level: int = 1
    strongest_integ_level: int = 1

    @classmethod
    def from_catalog(cls, cat: SecurityCatalog,
                     fixed_conf_level: int | None = None,
                     fixed_integ_level: int | None = None) -> "GeneConstraints":
        return cls(
            conf_level_count=cat.level_count(Service.CONFIDENTIALITY),
            integ_level_count=cat.level_count(Service.INTEGRITY),
            fixed_conf_level=fixed_conf_level,
            fixed_integ_level=fixed_integ_level,
            strongest_conf_level=cat.strongest_id(Service.CONFIDENTIALITY),
            strongest_integ_level=cat.strongest_id(Service.INTEGRITY),
        )

    def draw_conf(self, rng: random.Random) -> int:
        # always consume one draw so runs that differ only in gene freezes
        # stay on correlated RNG streams (fairer strategy comparisons)
        drawn = rng.randint(1, self.conf_level_count)
        return self.fixed_conf_level or drawn

    def draw_integ(self, rng: random.Random) -> int:
        drawn = rng.randint(1, self.integ_level_count)
        return self.fixed_integ_level or drawn

    def repair(self, c: Chromosome) -> Chromosome:
        """Re-pin the endpoint placements and re-impose frozen levels."""
        n = len(c.order)
        loc = list(c.locations)
        loc[0] = loc[n - 1] = MD_LOCATION
        conf = ((self.fixed_conf_level,) * n if self.fixed_conf_level
                else c.conf_levels)
        integ = ((self.fixed_integ_level,) * n if self.fixed_integ_level
                 else c.integ_levels)
        return Chromosome(c.order, tuple(loc), conf, integ)


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    best_energy: float
    best_violation: float
    feasible_count: int


@dataclass
class GaRun:
    best_chromosome: Chromosome
    best_result: EvaluationResult
    history: list[GenerationStats] = field(default_factory=list)
    params: GaParams = field(default_factory=GaParams)
    evaluations: int = 0


def init_order(w: Workflow, rng: random.Random) -> list[int]:
    """Random topological order: repeatedly pick a uniformly random ready task.

    The entry task is placed first; the exit task lands last on its own
    because it depends on everything else.
    """
    done: set[int] = set()
    order: list[int] = []
    remaining = set(range(w.n))
    while remaining:
        ready = sorted(t for t in remaining if w.predecessors(t) <= done)
        t = ready[0] if len(ready) == 1 else ready[rng.randrange(len(ready))]
        order.append(t)
        done.add(t)
        remaining.discard(t)
    return order


def init_vectors(
    w: Workflow,
    rng: random.Random,
    constraints: GeneConstraints | None = None,
) -> tuple[list[int], list[int], list[int]]:
    """Random placement bytes and level genes; endpoints pinned to the MD."""
    cons = constraints or GeneConstraints()
    n = w.n
    loc = [MD_LOCATION] * n
    for i in range(1, n - 1):
        loc[i] = rng.randint(0x01, 0xFF)
    conf = [cons.draw_conf(rng) for _ in range(n)]
    integ = [cons.draw_integ(rng) for _ in range(n)]
    return loc, conf, integ


def init_chromosome(w: Workflow, rng: random.Random,
                    constraints: GeneConstraints | None = None) -> Chromosome:
    order = init_order(w, rng)
    loc, conf, integ = init_vectors(w, rng, constraints)
    return Chromosome(tuple(order), tuple(loc), tuple(conf), tuple(integ))


def crossover_order(
    o1: tuple[int, ...] | list[int],
    o2: tuple[int, ...] | list[int],
    rng: random.Random,
) -> tuple[list[int], list[int]]:
    """One-point order crossover that preserves topological validity.

    The child keeps one parent's prefix up to the cut and appends the
    other parent's genes in their relative order, skipping duplicates.
    """
    n = len(o1)
    r = rng.randrange(n)
    head1, head2 = list(o1[:r + 1]), list(o2[:r + 1])
    seen1, seen2 = set(head1), set(head2)
    child1 = head1 + [t for t in o2 if t not in seen1]
    child2 = head2 + [t for t in o1 if t not in seen2]
    return child1, child2


def _cut_pair(v1, v2, r):
    return list(v1[:r + 1]) + list(v2[r + 1:]), list(v2[:r + 1]) + list(v1[r + 1:])


def crossover_vectors(
    a: Chromosome,
    b: Chromosome,
    rng: random.Random,
) -> tuple[Chromosome, Chromosome]:
    """One-point crossover of the three gene vectors, one cut per vector.

    Orders pass through untouched; endpoint placements are re-pinned
    afterwards.
    """
    n = len(a.order)
    loc1, loc2 = _cut_pair(a.locations, b.locations, rng.randrange(n))
    cf1, cf2 = _cut_pair(a.conf_levels, b.conf_levels, rng.randrange(n))
    ig1, ig2 = _cut_pair(a.integ_levels, b.integ_levels, rng.randrange(n))
    loc1[0] = loc1[n - 1] = MD_LOCATION
    loc2[0] = loc2[n - 1] = MD_LOCATION
    child_a = Chromosome(a.order, tuple(loc1), tuple(cf1), tuple(ig1))
    child_b = Chromosome(b.order, tuple(loc2), tuple(cf2), tuple(ig2))
    return child_a, child_b


def mutate_order(
    order: tuple[int, ...] | list[int],
    w: Workflow,
    rng: random.Random,
) -> list[int]:
    """Relocate one interior task within its precedence-free window.

    The window runs from just after the last position holding one of the
    task's predecessors to just before the first position holding one of
    its successors; any slot there keeps the order topological.  If the
    window holds no alternative slot the mutation is the identity.
    """
    n = len(order)
    out = list(order)
    if n < 3:
        return out
    l0 = rng.randint(1, n - 2)
    task = out[l0]
    preds = w.predecessors(task)
    succs = w.successors(task)
    a = max((i for i in range(l0) if out[i] in preds), default=0)
    b = min((i for i in range(l0 + 1, n) if out[i] in succs), default=n - 1)
    slots = [i for i in range(a + 1, b) if i != l0]
    if not slots:
        return out
    target = slots[0] if len(slots) == 1 else slots[rng.randrange(len(slots))]
    out.pop(l0)
    out.insert(target, task)
    return out


def mutate_vectors(
    c: Chromosome,
    rng: random.Random,
    constraints: GeneConstraints | None = None,
) -> Chromosome:
    """Replace one interior placement byte and one level gene per service."""
    cons = constraints or GeneConstraints()
    n = len(c.order)
    if n < 3:
        return c
    loc = list(c.locations)
    conf = list(c.conf_levels)
    integ = list(c.integ_levels)
    loc[rng.randint(1, n - 2)] = rng.randint(0x01, 0xFF)
    conf[rng.randint(1, n - 2)] = cons.draw_conf(rng)
    integ[rng.randint(1, n - 2)] = cons.draw_integ(rng)
    return Chromosome(c.order, tuple(loc), tuple(conf), tuple(integ))


Individual = tuple[Chromosome, EvaluationResult]


def select(pop: list[Individual], rng: random.Random) -> Individual:
    """Binary tournament between two distinct population slots."""
    if not pop:
        raise ValueError("cannot select from an empty population")
    if len(pop) == 1:
        return pop[0]
    i = rng.randrange(len(pop))
    j = rng.randrange(len(pop) - 1)
    if j >= i:
        j += 1
    a, b = pop[i], pop[j]
    return a if better(a[1], b[1]) else b


def _make_ranking_key(options: EvalOptions) -> Callable[[EvaluationResult], tuple]:
    """Population ordering: feasibility-first, then deterministic tie-breaks.

    Security levels never change energy (only time and risk), so level
    variations constantly produce equal-energy individuals; without a
    tie direction they drift through tournaments and dilute the
    placement search.  Preferring lower risk, then more schedule slack,
    keeps the gene pool conservative wherever weakening buys nothing.
    When the risk cap is ignored, risk is not an objective at all and
    would only punish offloading, so only the slack tie-break remains.
    """
    if options.ignore_risk_cap:
        def key(res: EvaluationResult) -> tuple:
            first, second = deb_key(res)
            return (first, second, res.makespan_s)
    else:
        def key(res: EvaluationResult) -> tuple:
            first, second = deb_key(res)
            return (first, second, res.risk, res.makespan_s)
    return key


def run(
    w: Workflow,
    p: Platform,
    cat: SecurityCatalog,
    risk_model: RiskModel,
    params: GaParams | None = None,
    constraints: GeneConstraints | None = None,
    options: EvalOptions = DEFAULT_OPTIONS,
    evaluate_fn: Callable[[Chromosome], EvaluationResult] | None = None,
    strong_seed_fraction: float = 0.0,
    warm_start: bool = False,
    risk_repair: bool = True,
    conservative_polish: bool = False,
) -> GaRun:
    """Evolve a population and return the best individual ever evaluated.

    ``history`` holds one row per generation (the post-variation
    population's best under the feasibility-first ordering).

    Heuristic initialization knobs (both default off for a purely random
    population): ``strong_seed_fraction`` starts that share of the
    population at the strongest levels with random placements, and
    ``warm_start`` replaces the first individual with the greedy witness
    schedule, which is feasible by construction whenever the deadline
    came from :func:`seeco.workflow.compute_deadline`.

    Two deterministic level-gene refinements keep the search honest
    about what weak services are for (they never lower energy, they only
    buy schedule slack at the price of risk).  ``risk_repair`` upgrades
    the crossing tasks of any individual that busts the risk cap to
    full-strength services (which zeroes their risk) and re-scores it;
    without it, tight caps funnel the population onto the all-MD
    attractor, because risk falls placement-gene by placement-gene while
    fixing it via levels needs every crossing task raised at once.
    ``conservative_polish`` swaps a feasible individual that still
    carries risk for its full-strength twin when the twin also meets the
    deadline: the twin has identical energy, so weak levels persist only
    where strength would break the deadline.  It is off by default
    because the destroyed slack also starves placement exploration.
    Variation operators themselves are never touched.
    """
    params = params or GaParams()
    cons = constraints or GeneConstraints.from_catalog(cat)
    if not 0.0 <= strong_seed_fraction <= 1.0:
        raise ValueError("strong_seed_fraction must be in [0, 1]")
    rng = random.Random(params.seed)
    # operators keep chromosomes valid by construction, so skip re-validation
    score = evaluate_fn or make_evaluator(w, p, cat, risk_model, options, validate=False)
    risk_cap = 1.0 if options.ignore_risk_cap else w.risk_cap

    strong_conf = (cons.fixed_conf_level or cons.strongest_conf_level,) * w.n
    strong_integ = (cons.fixed_integ_level or cons.strongest_integ_level,) * w.n

    def upgrade_crossing(c: Chromosome, res: EvaluationResult) -> Chromosome:
        conf = list(c.conf_levels)
        integ = list(c.integ_levels)
        for pos, t in enumerate(c.order):
            if res.timings[t].risk > 0.0:
                conf[pos] = strong_conf[0]
                integ[pos] = strong_integ[0]
        return Chromosome(c.order, c.locations, tuple(conf), tuple(integ))

    evaluations = 0

    def scored(c: Chromosome) -> Individual:
        nonlocal evaluations
        res = score(c)
        evaluations += 1
        if res.risk > 0.0:
            if risk_repair and res.risk > risk_cap:
                c = upgrade_crossing(c, res)
                res = score(c)
                evaluations += 1
            elif conservative_polish and res.feasible:
                twin = upgrade_crossing(c, res)
                if twin.conf_levels != c.conf_levels or twin.integ_levels != c.integ_levels:
                    twin_res = score(twin)
                    evaluations += 1
                    if twin_res.feasible:  # same energy, zero risk
                        c, res = twin, twin_res
        return c, res

    strong_seeds = round(params.pop_size * strong_seed_fraction)
    pop: list[Individual] = []
    for i in range(params.pop_size):
        c = init_chromosome(w, rng, cons)
        if i == 0 and warm_start:
            c = cons.repair(greedy_witness(w, p, cat))
        elif i < strong_seeds:
            c = Chromosome(c.order, c.locations, strong_conf, strong_integ)
        pop.append(scored(c))

    ranking_key = _make_ranking_key(options)

    def tournament(population: list[Individual]) -> Individual:
        i = rng.randrange(len(population))
        j = rng.randrange(len(population) - 1)
        if j >= i:
            j += 1
        a, b = population[i], population[j]
        return a if ranking_key(a[1]) <= ranking_key(b[1]) else b

    best = min(pop, key=lambda ind: deb_key(ind[1]))
    history: list[GenerationStats] = []

    for gen in range(params.iterations):
        nxt: list[Individual] = sorted(
            pop, key=lambda ind: ranking_key(ind[1]))[:params.elitism]
        while len(nxt) < params.pop_size:
            p1 = tournament(pop)[0]
            p2 = tournament(pop)[0]
            if rng.random() < params.p_c:
                o1, o2 = crossover_order(p1.order, p2.order, rng)
                c1, c2 = crossover_vectors(p1, p2, rng)
                pair = [Chromosome(tuple(o1), c1.locations, c1.conf_levels, c1.integ_levels),
                        Chromosome(tuple(o2), c2.locations, c2.conf_levels, c2.integ_levels)]
            else:
                pair = [p1, p2]
            for child in pair:
                if rng.random() < params.p_m:
                    mutated_order = mutate_order(child.order, w, rng)
                    child = mutate_vectors(
                        replace(child, order=tuple(mutated_order)), rng, cons)
                child = cons.repair(child)
                if len(nxt) < params.pop_size:
                    nxt.append(scored(child))
        pop = nxt
        gen_best = min(pop, key=lambda ind: deb_key(ind[1]))
        if not better(best[1], gen_best[1]):  # strictly better newcomers only
            best = gen_best
        history.append(GenerationStats(
            generation=gen,
            best_energy=gen_best[1].energy_j,
            best_violation=gen_best[1].violation,
            feasible_count=sum(1 for _, r in pop if r.feasible),
        ))

    return GaRun(best_chromosome=best[0], best_result=best[1],
                 history=history, params=params, evaluations=evaluations)


HISTORY_CSV_HEADER = ["generation", "best_energy", "best_violation", "feasible_count"]


def write_history_csv(run_result: GaRun, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(HISTORY_CSV_HEADER)
        for row in run_result.history:
            writer.writerow([row.generation, row.best_energy,
                             row.best_violation, row.feasible_count])
