"""Chromosome decoding: schedule timing, device energy, and risk.

A candidate solution is a four-vector chromosome: a task execution
order plus three gene vectors parallel to it (placement byte,
confidentiality level, integrity level).  Gene ``i`` of each vector
belongs to the task at order position ``i``; since the entry task is
the only source and the exit the only sink, positions 0 and n-1 always
hold them and their placement genes stay pinned to the MD byte 0x01.

Schedule semantics
------------------
Tasks are processed in chromosome order.  A task starts no earlier
than all its predecessors' end times and no earlier than the end of
the previous task placed on the same VM (one VM runs one task at a
time, in chromosome order).  Its busy window is

    decrypt inbound cross-AP payloads
    + execute
    + transfer its output to each successor (per edge; free inside an AP)
    + encrypt its output once, iff some successor sits on another AP

Only data that leaves an access point is protected, so only those
producer tasks contribute risk.  Energy bills the mobile device only:
compute power while it executes, transmit power while it uploads,
receive power while it downloads; security time is billed as time, not
device energy.

``evaluate`` is a pure function; any number of chromosomes may be
evaluated concurrently over shared workflow/platform/catalog values.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Sequence

from .platform import MD_LOCATION, Platform, VmSpec, decode_location, downlink_rate, uplink_rate
from .security import (
    REF_FREQUENCY_GHZ,
    RiskModel,
    SecurityCatalog,
    Service,
)
from .workflow import Workflow


@dataclass(frozen=True)
class Chromosome:
    """(order, locations, conf_levels, integ_levels), all of length n."""

    order: tuple[int, ...]
    locations: tuple[int, ...]
    conf_levels: tuple[int, ...]
    integ_levels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "conf_levels", tuple(self.conf_levels))
        object.__setattr__(self, "integ_levels", tuple(self.integ_levels))
        n = len(self.order)
        if any(len(v) != n for v in (self.locations, self.conf_levels, self.integ_levels)):
            raise ValueError("all chromosome vectors must have the same length")


class ServiceMode(Enum):
    """How one security service participates in an evaluation."""

    ACTIVE = "active"            # level gene selects the algorithm
    UNPROTECTED = "unprotected"  # no time cost, crossing data fully exposed
    DISABLED = "disabled"        # service outside the threat model: no cost, no risk


@dataclass(frozen=True)
class EvalOptions:
    """Evaluation variants used by the baseline strategies.

    ``decrypt_producer_core_ratio`` keeps the literal decryption formula
    whose cost scales with the producing VM's core count; switching it
    off drops that factor.  ``ignore_risk_cap`` evaluates feasibility
    against a risk cap of 1.0 (deadline only).
    """

    conf_mode: ServiceMode = ServiceMode.ACTIVE
    integ_mode: ServiceMode = ServiceMode.ACTIVE
    decrypt_producer_core_ratio: bool = True
    ignore_risk_cap: bool = False


DEFAULT_OPTIONS = EvalOptions()


class TaskTiming(NamedTuple):
    """Per-task slice of the decoded schedule (seconds / probability)."""

    ap: int
    vm: int
    start: float
    end: float
    exec: float
    transfer: float
    encrypt_cost: float
    decrypt_cost: float
    risk: float


class EvaluationResult(NamedTuple):
    timings: tuple[TaskTiming, ...]  # indexed by task id
    makespan_s: float
    energy_j: float
    risk: float
    violation: float
    feasible: bool


def exec_time(workload_gcycles: float, vm: VmSpec) -> float:
    """Seconds to run a workload on a VM."""
    return workload_gcycles / vm.capability_ghz


def transfer_time(
    producer: tuple[int, int],
    consumer: tuple[int, int],
    output_mb: float,
    p: Platform,
) -> float:
    """Seconds to move a payload between two placements.

    Free inside one access point (or on one VM); MD-to-edge rides the
    consumer AP's uplink, edge-to-MD the producer AP's downlink, and
    edge-to-edge the shared backhaul.
    """
    src_ap, dst_ap = producer[0], consumer[0]
    if src_ap == dst_ap:
        return 0.0
    if src_ap == 0:
        return output_mb / uplink_rate(p.radio(dst_ap))
    if dst_ap == 0:
        return output_mb / downlink_rate(p.radio(src_ap))
    return output_mb / p.inter_ap_bandwidth_mb_s


_BOTH_SERVICES = (Service.CONFIDENTIALITY, Service.INTEGRITY)


def encrypt_cost(
    output_mb: float,
    vm: VmSpec,
    conf_level: int,
    integ_level: int,
    cat: SecurityCatalog,
    services: Sequence[Service] = _BOTH_SERVICES,
) -> float:
    """Seconds the producing VM spends protecting one outbound payload."""
    levels = {Service.CONFIDENTIALITY: conf_level, Service.INTEGRITY: integ_level}
    total = 0.0
    for service in services:
        alg = cat.algorithm(service, levels[service])
        total += (output_mb * REF_FREQUENCY_GHZ) / (
            alg.speed_mb_s * vm.frequency_ghz * vm.cores)
    return total


def decrypt_cost(
    producers: Iterable[tuple[float, VmSpec, int, int]],
    consumer: VmSpec,
    cat: SecurityCatalog,
    services: Sequence[Service] = _BOTH_SERVICES,
    producer_core_ratio: bool = True,
) -> float:
    """Seconds the consuming VM spends unwrapping cross-AP inputs.

    ``producers`` lists (payload MB, producing VM, conf level, integ
    level) for each predecessor whose data crossed access points; the
    levels are the producer's, since they picked the algorithms.
    """
    total = 0.0
    for output_mb, producer_vm, conf_level, integ_level, in producers:
        ratio = producer_vm.cores / consumer.cores if producer_core_ratio else 1.0
        levels = {Service.CONFIDENTIALITY: conf_level, Service.INTEGRITY: integ_level}
        for service in services:
            alg = cat.algorithm(service, levels[service])
            total += ratio * (output_mb * REF_FREQUENCY_GHZ) / (
                alg.speed_mb_s * consumer.frequency_ghz * consumer.cores)
    return total


def violation(makespan_s: float, risk: float, deadline_s: float, risk_cap: float) -> float:
    """Sum of the deadline excess and the risk-cap excess, each floored at 0."""
    return max(0.0, makespan_s - deadline_s) + max(0.0, risk - risk_cap)


def make_evaluator(
    w: Workflow,
    p: Platform,
    cat: SecurityCatalog,
    risk_model: RiskModel,
    options: EvalOptions = DEFAULT_OPTIONS,
    validate: bool = True,
) -> Callable[[Chromosome], EvaluationResult]:
    """Build a reusable scoring function with all lookups precomputed.

    Captures the workflow's deadline and risk cap at build time.  The
    optimizer scores thousands of chromosomes against one fixed problem,
    so the decode table, link rates, and per-level survival factors are
    resolved here once; ``validate=False`` additionally skips the
    chromosome invariant checks for callers that construct genes by
    valid-by-construction operators.
    """
    n = w.n
    preds = [tuple(w.predecessors(i)) for i in range(n)]
    succs = [tuple(w.successors(i)) for i in range(n)]
    out_mb = [t.output_mb for t in w.tasks]
    load = [t.workload_gcycles for t in w.tasks]
    edges = w.edges
    deadline = w.deadline_s
    risk_cap = 1.0 if options.ignore_risk_cap else w.risk_cap

    # byte -> (ap, vm index, 1/capability, crypto denominator f*cores, cores)
    decode_table: list[tuple[int, int, float, float, int]] = [None]  # type: ignore
    for byte in range(0x01, 0x100):
        ap, k = decode_location(byte, p)
        vm = p.vm_at(ap, k)
        decode_table.append((ap, k, 1.0 / vm.capability_ghz,
                             vm.frequency_ghz * vm.cores, vm.cores))

    ul_rate = [0.0] * (p.num_aps + 1)
    dl_rate = [0.0] * (p.num_aps + 1)
    for j in range(1, p.num_aps + 1):
        ul_rate[j] = uplink_rate(p.radio(j))
        dl_rate[j] = downlink_rate(p.radio(j))
    inter_bw = p.inter_ap_bandwidth_mb_s
    md_p_comp, md_p_ul, md_p_dl = p.md.p_comp_w, p.md.p_ul_w, p.md.p_dl_w

    # per-gene crypto cost factors (None when the service costs nothing)
    # and survival factors for crossing tasks, resolved per service mode
    n_conf = cat.level_count(Service.CONFIDENTIALITY)
    n_integ = cat.level_count(Service.INTEGRITY)
    conf_cost = ([0.0] + [REF_FREQUENCY_GHZ / a.speed_mb_s for a in cat.confidentiality]
                 if options.conf_mode is ServiceMode.ACTIVE else None)
    integ_cost = ([0.0] + [REF_FREQUENCY_GHZ / a.speed_mb_s for a in cat.integrity]
                  if options.integ_mode is ServiceMode.ACTIVE else None)

    def survival_table(mode, algs, rate, count):
        if mode is ServiceMode.ACTIVE:
            return [1.0] + [math.exp(-rate * (1.0 - a.level)) for a in algs]
        if mode is ServiceMode.UNPROTECTED:
            return [math.exp(-rate)] * (count + 1)
        return [1.0] * (count + 1)

    conf_surv = survival_table(options.conf_mode, cat.confidentiality,
                               risk_model.lambda_conf, n_conf)
    integ_surv = survival_table(options.integ_mode, cat.integrity,
                                risk_model.lambda_integ, n_integ)
    literal_ratio = options.decrypt_producer_core_ratio

    def engine(c: Chromosome) -> EvaluationResult:
        order = c.order
        locations = c.locations
        conf_levels = c.conf_levels
        integ_levels = c.integ_levels
        if validate:
            if len(order) != n:
                raise ValueError(
                    f"chromosome length {len(order)} does not match {n} tasks")
            position = [-1] * n
            for pos, t in enumerate(order):
                if not 0 <= t < n or position[t] != -1:
                    raise ValueError(
                        "chromosome order is not a permutation of the task indices")
                position[t] = pos
            for u, v in edges:
                if position[u] > position[v]:
                    raise ValueError(f"chromosome order violates precedence: "
                                     f"task {u} must run before {v}")
            if locations[0] != MD_LOCATION or locations[n - 1] != MD_LOCATION:
                raise ValueError(
                    "entry and exit placement genes must be pinned to the MD (0x01)")
            for lev in conf_levels:
                if not 1 <= lev <= n_conf:
                    raise ValueError(
                        f"confidentiality level gene {lev} outside 1..{n_conf}")
            for lev in integ_levels:
                if not 1 <= lev <= n_integ:
                    raise ValueError(f"integrity level gene {lev} outside 1..{n_integ}")

        # genes live at order positions; re-key them by task id
        slot = [0] * n       # decode_table index per task
        ap_of = [0] * n
        conf_of = [0] * n
        integ_of = [0] * n
        for pos in range(n):
            t = order[pos]
            byte = locations[pos]
            slot[t] = byte
            ap_of[t] = decode_table[byte][0]
            conf_of[t] = conf_levels[pos]
            integ_of[t] = integ_levels[pos]

        vm_avail: dict[tuple[int, int], float] = {}
        end = [0.0] * n
        rows: list[TaskTiming] = [TaskTiming(0, 0, 0, 0, 0, 0, 0, 0, 0)] * n
        energy = 0.0
        survival = 1.0

        for t in order:
            ap, vm_k, inv_cap, denom, cores = decode_table[slot[t]]
            key = (ap, vm_k)

            start = vm_avail.get(key, 0.0)
            for r in preds[t]:
                if end[r] > start:
                    start = end[r]

            dec = 0.0
            for r in preds[t]:
                if ap_of[r] == ap:
                    continue
                r_cores = decode_table[slot[r]][4]
                ratio = (r_cores / cores) if literal_ratio else 1.0
                per_mb = 0.0
                if conf_cost is not None:
                    per_mb += conf_cost[conf_of[r]]
                if integ_cost is not None:
                    per_mb += integ_cost[integ_of[r]]
                dec += ratio * out_mb[r] * per_mb / denom

            ex = load[t] * inv_cap
            if ap == 0:
                energy += md_p_comp * ex

            tr = 0.0
            crossing = False
            beta = out_mb[t]
            for s in succs[t]:
                s_ap = ap_of[s]
                if s_ap == ap:
                    continue
                crossing = True
                if ap == 0:
                    leg = beta / ul_rate[s_ap]
                    energy += md_p_ul * leg
                elif s_ap == 0:
                    leg = beta / dl_rate[ap]
                    energy += md_p_dl * leg
                else:
                    leg = beta / inter_bw
                tr += leg

            enc = 0.0
            risk_t = 0.0
            if crossing:
                per_mb = 0.0
                if conf_cost is not None:
                    per_mb += conf_cost[conf_of[t]]
                if integ_cost is not None:
                    per_mb += integ_cost[integ_of[t]]
                enc = beta * per_mb / denom
                task_survival = conf_surv[conf_of[t]] * integ_surv[integ_of[t]]
                risk_t = 1.0 - task_survival
                survival *= task_survival

            finish = start + dec + ex + tr + enc
            end[t] = finish
            vm_avail[key] = finish
            rows[t] = TaskTiming(ap=ap, vm=vm_k, start=start, end=finish, exec=ex,
                                 transfer=tr, encrypt_cost=enc, decrypt_cost=dec,
                                 risk=risk_t)

        makespan = max(end)
        total_risk = 1.0 - survival
        viol = (makespan - deadline if makespan > deadline else 0.0) + \
               (total_risk - risk_cap if total_risk > risk_cap else 0.0)
        return EvaluationResult(
            timings=tuple(rows),
            makespan_s=makespan,
            energy_j=energy,
            risk=total_risk,
            violation=viol,
            feasible=viol == 0.0,
        )

    return engine


def evaluate(
    c: Chromosome,
    w: Workflow,
    p: Platform,
    cat: SecurityCatalog,
    risk_model: RiskModel,
    options: EvalOptions = DEFAULT_OPTIONS,
) -> EvaluationResult:
    """Decode a chromosome into per-task timings and workflow totals."""
    return make_evaluator(w, p, cat, risk_model, options)(c)


def better(a: EvaluationResult, b: EvaluationResult) -> bool:
    """Feasibility-first comparison; True when ``a`` wins (ties go to ``a``).

    Two feasible results compare on energy, a feasible one always beats
    an infeasible one, and two infeasible ones compare on the summed
    constraint violation.
    """
    if a.feasible and b.feasible:
        return a.energy_j <= b.energy_j
    if a.feasible != b.feasible:
        return a.feasible
    return a.violation <= b.violation


def deb_key(result: EvaluationResult) -> tuple[int, float]:
    """Sort key consistent with :func:`better` (ascending = best first)."""
    if result.feasible:
        return (0, result.energy_j)
    return (1, result.violation)


SCHEDULE_CSV_HEADER = ["id", "ap", "vm", "start", "end", "exec", "transfer",
                       "ecost", "decost", "risk"]


def write_schedule_csv(result: EvaluationResult, path: str | Path) -> None:
    """Dump the per-task timeline, one row per task id."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCHEDULE_CSV_HEADER)
        for i, row in enumerate(result.timings):
            writer.writerow([i, row.ap, row.vm, row.start, row.end, row.exec,
                             row.transfer, row.encrypt_cost, row.decrypt_cost, row.risk])
