"""Workflow DAG model, random generator, deadline calibration, and files.

A workflow is a precedence DAG of tasks with a deadline and a risk cap.
Task 0 is the unique entry and task n-1 the unique exit; the scheduler
pins both to the mobile device, so validation enforces that shape up
front.  Workflow values are immutable after construction and safe to
share across threads; the generator is deterministic per seed.
"""

from __future__ import annotations

import graphlib
import heapq
import json
import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from .platform import Platform
from .security import SecurityCatalog, Service


@dataclass(frozen=True)
class Task:
    """One task: input/output payload sizes in MB, workload in giga-cycles."""

    id: int
    input_mb: float
    output_mb: float
    workload_gcycles: float

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"task id must be >= 0, got {self.id}")
        if self.input_mb < 0.0 or self.output_mb < 0.0:
            raise ValueError(f"task {self.id}: payload sizes must be >= 0")
        # zero workload is tolerated for virtual entry/exit tasks only
        if self.workload_gcycles < 0.0:
            raise ValueError(f"task {self.id}: workload must be >= 0")


@dataclass
class Workflow:
    """Tasks, precedence edges, deadline (s), and risk-probability cap."""

    tasks: tuple[Task, ...]
    edges: tuple[tuple[int, int], ...]
    deadline_s: float
    risk_cap: float
    _preds: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)
    _succs: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.tasks = tuple(self.tasks)
        self.edges = tuple(sorted({(int(u), int(v)) for u, v in self.edges}))
        n = len(self.tasks)
        if n < 1:
            raise ValueError("workflow needs at least one task")
        if [t.id for t in self.tasks] != list(range(n)):
            raise ValueError("task ids must be contiguous 0..n-1 in order")
        if not 0.0 <= self.risk_cap <= 1.0:
            raise ValueError(f"risk cap must be in [0, 1], got {self.risk_cap}")
        if self.deadline_s <= 0.0:
            raise ValueError(f"deadline must be positive, got {self.deadline_s}")

        preds: list[set[int]] = [set() for _ in range(n)]
        succs: list[set[int]] = [set() for _ in range(n)]
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a missing task")
            if u == v:
                raise ValueError(f"self-loop on task {u}")
            preds[v].add(u)
            succs[u].add(v)

        try:
            list(graphlib.TopologicalSorter({i: preds[i] for i in range(n)}).static_order())
        except graphlib.CycleError as exc:
            raise ValueError(f"workflow edges contain a cycle: {exc.args[1]}") from exc

        entries = [i for i in range(n) if not preds[i]]
        exits = [i for i in range(n) if not succs[i]]
        if n == 1:
            pass  # the single task is both entry and exit
        else:
            if entries != [0]:
                raise ValueError(f"expected task 0 as the unique entry, found {entries}")
            if exits != [n - 1]:
                raise ValueError(f"expected task {n - 1} as the unique exit, found {exits}")

        self._preds = tuple(frozenset(s) for s in preds)
        self._succs = tuple(frozenset(s) for s in succs)

    @property
    def n(self) -> int:
        return len(self.tasks)

    def predecessors(self, i: int) -> frozenset[int]:
        if not 0 <= i < self.n:
            raise ValueError(f"task index {i} outside 0..{self.n - 1}")
        return self._preds[i]

    def successors(self, i: int) -> frozenset[int]:
        if not 0 <= i < self.n:
            raise ValueError(f"task index {i} outside 0..{self.n - 1}")
        return self._succs[i]


def is_valid_order(w: Workflow, order: list[int] | tuple[int, ...]) -> bool:
    """True iff ``order`` is a topological order of the workflow.

    Raises if ``order`` is not a permutation of 0..n-1 at all.
    """
    if len(order) != w.n or set(order) != set(range(w.n)):
        raise ValueError("order is not a permutation of the task indices")
    position = [0] * w.n
    for pos, t in enumerate(order):
        position[t] = pos
    return all(position[u] < position[v] for u, v in w.edges)


def canonical_order(w: Workflow) -> list[int]:
    """Deterministic topological order: smallest ready index first."""
    indegree = [len(w.predecessors(i)) for i in range(w.n)]
    ready = [i for i in range(w.n) if indegree[i] == 0]
    heapq.heapify(ready)
    out: list[int] = []
    while ready:
        t = heapq.heappop(ready)
        out.append(t)
        for s in w.successors(t):
            indegree[s] -= 1
            if indegree[s] == 0:
                heapq.heappush(ready, s)
    return out


@dataclass(frozen=True)
class GeneratorConfig:
    """Uniform sampling ranges for random workflows."""

    data_range_mb: tuple[float, float] = (5.0, 50.0)
    workload_range_gcycles: tuple[float, float] = (1.0, 10.0)

    def __post_init__(self) -> None:
        for lo, hi in (self.data_range_mb, self.workload_range_gcycles):
            if not 0.0 <= lo <= hi:
                raise ValueError("generator ranges must satisfy 0 <= lo <= hi")


def random_workflow(
    n: int,
    density: float,
    gen_cfg: GeneratorConfig | None = None,
    seed: int = 0,
    risk_cap: float = 0.5,
    deadline_s: float = math.inf,
) -> Workflow:
    """Random single-entry/single-exit DAG, reproducible per seed.

    Each forward pair (i, j), i < j, becomes an edge with probability
    ``density``; nodes left without predecessors are then wired to the
    entry and nodes without successors to the exit.  The deadline
    defaults to +inf; callers normally fill it via
    :func:`compute_deadline`.
    """
    if n < 2:
        raise ValueError(f"random workflows need n >= 2, got {n}")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    cfg = gen_cfg or GeneratorConfig()
    rng = random.Random(seed)

    tasks = tuple(
        Task(
            id=i,
            input_mb=rng.uniform(*cfg.data_range_mb),
            output_mb=rng.uniform(*cfg.data_range_mb),
            workload_gcycles=rng.uniform(*cfg.workload_range_gcycles),
        )
        for i in range(n)
    )

    edges = {
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    }
    has_pred = [False] * n
    has_succ = [False] * n
    for u, v in edges:
        has_pred[v] = True
        has_succ[u] = True
    for v in range(1, n):
        if not has_pred[v]:
            edges.add((0, v))
            has_succ[0] = True
    for u in range(n - 1):
        if not has_succ[u]:
            edges.add((u, n - 1))

    return Workflow(tasks=tasks, edges=tuple(sorted(edges)),
                    deadline_s=deadline_s, risk_cap=risk_cap)


def greedy_witness(w: Workflow, p: Platform, cat: SecurityCatalog):
    """Max-security schedule from an insertion-free greedy EFT pass.

    Tasks are placed in canonical order, each on the VM minimizing its
    estimated finish time; the estimate charges each crossing edge's
    encrypt+wire time on the consumer's ready time (the real model bills
    the producer's window; the proxy only steers placement).  Entry and
    exit stay on the MD.  Returns the corresponding chromosome with all
    level genes at full strength, which makes its risk exactly zero.
    """
    from .evaluator import Chromosome, decrypt_cost, encrypt_cost, transfer_time
    from .platform import encode_location

    if w.n == 0:
        raise ValueError("workflow is empty")

    conf = cat.strongest_id(Service.CONFIDENTIALITY)
    integ = cat.strongest_id(Service.INTEGRITY)
    # the byte encoding reaches at most 15 APs and 15 VMs per AP
    slots = [(0, 1)] + [(j, k) for j in range(1, min(p.num_aps, 0x0F) + 1)
                        for k in range(1, min(p.vm_count(j), 0x0F) + 1)]
    avail = {slot: 0.0 for slot in slots}
    end: dict[int, float] = {}
    placed: dict[int, tuple[int, int]] = {}
    order = canonical_order(w)

    for t in order:
        task = w.tasks[t]
        candidates = [(0, 1)] if t in (0, w.n - 1) else slots
        best_slot, best_finish = (0, 1), math.inf
        for slot in candidates:
            vm = p.vm_at(*slot)
            ready = 0.0
            crossing_preds = []
            for r in w.predecessors(t):
                r_slot = placed[r]
                arrival = end[r]
                if r_slot[0] != slot[0]:
                    out = w.tasks[r].output_mb
                    r_vm = p.vm_at(*r_slot)
                    arrival += encrypt_cost(out, r_vm, conf, integ, cat)
                    arrival += transfer_time(r_slot, slot, out, p)
                    crossing_preds.append((out, r_vm, conf, integ))
                ready = max(ready, arrival)
            start = max(avail[slot], ready)
            finish = (start
                      + decrypt_cost(crossing_preds, vm, cat)
                      + task.workload_gcycles / vm.capability_ghz)
            if finish < best_finish:
                best_slot, best_finish = slot, finish
        placed[t] = best_slot
        end[t] = best_finish
        avail[best_slot] = best_finish

    return Chromosome(
        order=tuple(order),
        locations=tuple(encode_location(*placed[t]) for t in order),
        conf_levels=(conf,) * w.n,
        integ_levels=(integ,) * w.n,
    )


def compute_deadline(w: Workflow, p: Platform, cat: SecurityCatalog) -> float:
    """Deadline halfway between the best and worst makespan bounds.

    Both bounds assume full-strength security on every crossing edge.
    The upper bound serializes everything on the MD (no transfers, no
    security); the lower bound is the true makespan of the greedy
    witness schedule, clamped to the serial bound.  Both bounds are
    makespans of real schedules, so a schedule meeting the midpoint
    deadline always exists (at zero risk, since full-strength security
    is risk-free).
    """
    from .evaluator import evaluate
    from .security import RiskModel

    if w.n == 0:
        raise ValueError("cannot compute a deadline for an empty workflow")

    serial = sum(t.workload_gcycles for t in w.tasks) / p.md.vm.capability_ghz
    witness = greedy_witness(w, p, cat)
    greedy = evaluate(witness, w, p, cat, RiskModel()).makespan_s
    return (min(greedy, serial) + serial) / 2.0


def with_deadline(w: Workflow, deadline_s: float) -> Workflow:
    return replace(w, deadline_s=deadline_s)


def save_workflow(w: Workflow, path: str | Path) -> None:
    payload = {
        "tasks": [
            {"id": t.id, "alpha_mb": t.input_mb, "beta_mb": t.output_mb,
             "workload_gcycles": t.workload_gcycles}
            for t in w.tasks
        ],
        "edges": [list(e) for e in w.edges],
        "deadline_s": w.deadline_s,
        "risk_cap": w.risk_cap,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_workflow(path: str | Path) -> Workflow:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed workflow file {path}: {exc}") from exc
    try:
        tasks = tuple(
            Task(id=int(t["id"]), input_mb=float(t["alpha_mb"]),
                 output_mb=float(t["beta_mb"]),
                 workload_gcycles=float(t["workload_gcycles"]))
            for t in sorted(payload["tasks"], key=lambda t: int(t["id"]))
        )
        edges = tuple((int(u), int(v)) for u, v in payload["edges"])
        deadline = float(payload["deadline_s"])
        risk_cap = float(payload["risk_cap"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed workflow file {path}: {exc}") from exc
    return Workflow(tasks=tasks, edges=edges, deadline_s=deadline, risk_cap=risk_cap)
