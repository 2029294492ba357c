"""Command-line surface: workflow generation, single solves, and sweeps.

Three verbs:

  generate   write a random workflow file with a calibrated deadline
  solve      run one strategy on a workflow and dump result CSVs
  sweep      rerun strategies across a swept variable, seeds crossed in,
             and write long-format plus mean-over-seeds CSVs

Every command is deterministic given its flags and seeds.  A JSON config
file (``--config``) may hold any flag value under its long name with
dashes as underscores; explicit command-line flags win.  The environment
variable ``SEECO_THREADS`` caps sweep parallelism (default 1, meaning
strictly sequential); results are gathered and written in sorted order
either way, so the output does not depend on the worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .baselines import Strategy, StrategyKind, solve_detailed
from .evaluator import write_schedule_csv
from .ga import GaParams, write_history_csv
from .platform import Platform, default_platform, load_platform
from .security import RiskModel, default_catalog, load_catalog
from .workflow import (
    GeneratorConfig,
    Workflow,
    compute_deadline,
    load_workflow,
    random_workflow,
    save_workflow,
    with_deadline,
)

SWEEP_VARIABLES = ("pop", "iters", "pc", "pm", "risk_cap", "lambda", "servers", "tasks")
_INT_SWEEPS = {"pop", "iters", "servers", "tasks"}

# fixed companions for the GA-parameter sweeps, applied unless overridden
_GA_SWEEP_BASELINES = {
    "pop": dict(iters=50, pc=0.2, pm=0.6),
    "iters": dict(pop=30, pc=0.2, pm=0.6),
    "pc": dict(pop=30, iters=100, pm=0.6),
    "pm": dict(pop=30, iters=100, pc=0.2),
}

SWEEP_CSV_HEADER = ["sweep", "value", "strategy", "seed", "pop", "iters", "pc", "pm",
                    "energy", "makespan", "risk", "violation", "feasible"]
SUMMARY_CSV_HEADER = ["sweep", "value", "strategy", "seeds", "mean_energy",
                      "mean_makespan", "mean_risk", "feasible_fraction"]
SOLVE_CSV_HEADER = ["strategy", "seed", "energy", "makespan", "risk", "violation",
                    "feasible", "deadline", "risk_cap"]


def parse_range(spec: str, integer: bool) -> list[float] | list[int]:
    """Parse ``a:b:step`` into an inclusive list of sweep values."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must look like a:b:step, got {spec!r}")
    a, b, step = (float(x) for x in parts)
    if step <= 0 or b < a:
        raise ValueError(f"range {spec!r} must have step > 0 and b >= a")
    values = []
    i = 0
    while True:
        v = round(a + i * step, 10)
        if v > b + 1e-9:
            break
        values.append(int(round(v)) if integer else v)
        i += 1
    return values


def parse_seeds(spec: str) -> list[int]:
    return [int(s) for s in spec.split(",") if s.strip() != ""]


def parse_bool(spec: str) -> bool:
    if spec.lower() in ("true", "1", "yes"):
        return True
    if spec.lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"expected true/false, got {spec!r}")


@dataclass(frozen=True)
class SweepJob:
    sweep: str
    value: float | int
    strategy: str
    seed: int
    workflow: Workflow
    platform: Platform
    risk_model: RiskModel
    params: GaParams
    literal_eq11: bool
    catalog_path: str | None

    def sort_key(self):
        return (self.value, self.strategy, self.seed)


def run_job(job: SweepJob) -> dict:
    """Execute one sweep point; used directly and by worker processes."""
    cat = load_catalog(job.catalog_path) if job.catalog_path else default_catalog()
    strategy = Strategy.parse(job.strategy, literal_decrypt_ratio=job.literal_eq11)
    outcome = solve_detailed(strategy, job.workflow, job.platform, cat,
                             job.risk_model, job.params)
    res = outcome.result
    return {
        "sweep": job.sweep, "value": job.value, "strategy": job.strategy,
        "seed": job.seed, "pop": job.params.pop_size, "iters": job.params.iterations,
        "pc": job.params.p_c, "pm": job.params.p_m,
        "energy": res.energy_j, "makespan": res.makespan_s, "risk": res.risk,
        "violation": res.violation, "feasible": res.feasible,
    }


def build_sweep_jobs(
    sweep: str,
    values: list,
    strategies: list[str],
    seeds: list[int],
    base_params: GaParams,
    workflow: Workflow | None,
    platform: Platform | None,
    risk_model: RiskModel,
    gen_cfg: GeneratorConfig,
    density: float,
    workflow_seed: int,
    risk_cap: float,
    literal_eq11: bool = True,
    catalog_path: str | None = None,
    tasks: int = 30,
) -> list[SweepJob]:
    """Materialize one job per (value, strategy, seed).

    The swept variable decides what varies: GA parameters rebuild the
    params, ``risk_cap`` rewrites the workflow's cap, ``lambda`` sets
    both services' attack rates, ``servers`` rebuilds the platform (the
    deadline stays calibrated against the default platform so feasible
    sets grow with the server count), and ``tasks`` regenerates the
    workflow per value.
    """
    if sweep not in SWEEP_VARIABLES:
        raise ValueError(f"unknown sweep variable {sweep!r}; expected one of "
                         f"{', '.join(SWEEP_VARIABLES)}")
    if not values:
        raise ValueError("sweep range is empty")
    if not seeds:
        raise ValueError("seed list is empty")
    cat = load_catalog(catalog_path) if catalog_path else default_catalog()

    if sweep == "servers" and platform is not None:
        raise ValueError("the servers sweep builds its own platforms; drop --platform")
    if sweep == "tasks" and workflow is not None:
        raise ValueError("the tasks sweep generates its own workflows; drop --workflow")
    base_platform = platform or default_platform()

    def make_workflow(n: int) -> Workflow:
        w = random_workflow(n, density, gen_cfg, seed=workflow_seed, risk_cap=risk_cap)
        return with_deadline(w, compute_deadline(w, base_platform, cat))

    jobs = []
    for value in values:
        w = workflow
        plat = base_platform
        rm = risk_model
        params = base_params
        if sweep in _GA_SWEEP_BASELINES:
            if w is None:
                w = make_workflow(tasks)
            key = {"pop": "pop_size", "iters": "iterations", "pc": "p_c", "pm": "p_m"}[sweep]
            params = replace(base_params, **{key: value})
        elif sweep == "risk_cap":
            if w is None:
                w = make_workflow(tasks)
            w = replace(w, risk_cap=float(value))
        elif sweep == "lambda":
            if w is None:
                w = make_workflow(tasks)
            rm = replace(risk_model, lambda_conf=float(value), lambda_integ=float(value))
        elif sweep == "servers":
            if w is None:
                w = make_workflow(tasks)
            plat = default_platform(int(value))
        elif sweep == "tasks":
            w = make_workflow(int(value))
        for strategy in strategies:
            for seed in seeds:
                jobs.append(SweepJob(
                    sweep=sweep, value=value, strategy=strategy, seed=seed,
                    workflow=w, platform=plat, risk_model=rm,
                    params=replace(params, seed=seed),
                    literal_eq11=literal_eq11, catalog_path=catalog_path))
    return jobs


def run_sweep(jobs: list[SweepJob], max_workers: int | None = None) -> list[dict]:
    """Run all jobs and return rows sorted by (value, strategy, seed)."""
    if max_workers is None:
        max_workers = int(os.environ.get("SEECO_THREADS", "1"))
    if max_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(run_job, jobs))
    else:
        rows = [run_job(job) for job in jobs]
    rows.sort(key=lambda r: (r["value"], r["strategy"], r["seed"]))
    return rows


def summarize_rows(rows: list[dict]) -> list[dict]:
    """Mean-over-seeds per (value, strategy), in sorted order."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault((row["value"], row["strategy"]), []).append(row)
    out = []
    for (value, strategy), grp in sorted(groups.items(), key=lambda kv: kv[0]):
        n = len(grp)
        out.append({
            "sweep": grp[0]["sweep"], "value": value, "strategy": strategy, "seeds": n,
            "mean_energy": sum(r["energy"] for r in grp) / n,
            "mean_makespan": sum(r["makespan"] for r in grp) / n,
            "mean_risk": sum(r["risk"] for r in grp) / n,
            "feasible_fraction": sum(1 for r in grp if r["feasible"]) / n,
        })
    return out


def _write_csv(path: Path, header: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[k] for k in header])


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ValueError(f"config {path} must hold a JSON object")
    return cfg


def _merged(args: argparse.Namespace, parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Fill flags left unset on the command line from the config file."""
    cfg = _load_config(getattr(args, "config", None))
    known = {a.dest for a in parser._actions}
    unknown = set(cfg) - known
    if unknown:
        raise ValueError(f"config keys not recognized: {', '.join(sorted(unknown))}")
    for dest, value in cfg.items():
        if getattr(args, dest, None) is None:
            setattr(args, dest, value)
    return args


def _ga_params(args, sweep: str | None = None) -> GaParams:
    defaults = dict(pop=40, iters=150, pc=0.5, pm=0.3)
    if sweep in _GA_SWEEP_BASELINES:
        defaults.update(_GA_SWEEP_BASELINES[sweep])
    return GaParams(
        pop_size=int(args.pop if args.pop is not None else defaults["pop"]),
        iterations=int(args.iters if args.iters is not None else defaults["iters"]),
        p_c=float(args.pc if args.pc is not None else defaults["pc"]),
        p_m=float(args.pm if args.pm is not None else defaults["pm"]),
        seed=int(args.seed) if getattr(args, "seed", None) is not None else 0,
    )


def _risk_model(args) -> RiskModel:
    return RiskModel(
        lambda_conf=float(args.lambda_conf) if args.lambda_conf is not None else 2.5,
        lambda_integ=float(args.lambda_integ) if args.lambda_integ is not None else 1.8,
    )


def _platform(args) -> Platform:
    return load_platform(args.platform) if args.platform else default_platform()


def _catalog(args):
    return load_catalog(args.catalog) if getattr(args, "catalog", None) else default_catalog()


def cmd_generate(args, parser) -> int:
    args = _merged(args, parser)
    n = int(args.tasks if args.tasks is not None else 10)
    if n < 2:
        print(f"error: --tasks must be >= 2, got {n}", file=sys.stderr)
        return 2
    density = float(args.density if args.density is not None else 0.3)
    seed = int(args.seed if args.seed is not None else 1)
    risk_cap = float(args.risk_cap if args.risk_cap is not None else 0.5)
    gen_cfg = GeneratorConfig(
        data_range_mb=(float(args.data_min if args.data_min is not None else 5.0),
                       float(args.data_max if args.data_max is not None else 50.0)),
        workload_range_gcycles=(
            float(args.load_min if args.load_min is not None else 1.0),
            float(args.load_max if args.load_max is not None else 10.0)),
    )
    platform = _platform(args)
    cat = _catalog(args)
    w = random_workflow(n, density, gen_cfg, seed=seed, risk_cap=risk_cap)
    w = with_deadline(w, compute_deadline(w, platform, cat))
    out = Path(args.out if args.out is not None else "workflow.json")
    save_workflow(w, out)
    print(f"wrote {out}: {w.n} tasks, {len(w.edges)} edges, "
          f"deadline {w.deadline_s:.3f} s, risk cap {w.risk_cap}")
    return 0


def cmd_solve(args, parser) -> int:
    args = _merged(args, parser)
    if args.workflow is None:
        print("error: --workflow is required", file=sys.stderr)
        return 2
    try:
        w = load_workflow(args.workflow)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    platform = _platform(args)
    cat = _catalog(args)
    literal = parse_bool(args.literal_eq11) if isinstance(args.literal_eq11, str) \
        else (args.literal_eq11 if args.literal_eq11 is not None else True)
    strategy = Strategy.parse(args.strategy if args.strategy is not None else "seeco",
                              literal_decrypt_ratio=literal)
    params = _ga_params(args)
    outcome = solve_detailed(strategy, w, platform, cat, _risk_model(args), params)
    res = outcome.result

    out_dir = Path(args.out if args.out is not None else "results")
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(out_dir / "summary.csv", SOLVE_CSV_HEADER, [{
        "strategy": strategy.kind.value, "seed": params.seed,
        "energy": res.energy_j, "makespan": res.makespan_s, "risk": res.risk,
        "violation": res.violation, "feasible": res.feasible,
        "deadline": w.deadline_s, "risk_cap": w.risk_cap,
    }])
    dump = parse_bool(args.dump_schedule) if isinstance(args.dump_schedule, str) \
        else (args.dump_schedule if args.dump_schedule is not None else True)
    if dump:
        write_schedule_csv(res, out_dir / "schedule.csv")
    if outcome.ga_run is not None:
        write_history_csv(outcome.ga_run, out_dir / "history.csv")
    status = "feasible" if res.feasible else "infeasible"
    print(f"{strategy.kind.value}: energy {res.energy_j:.4f} J, makespan "
          f"{res.makespan_s:.4f} s, risk {res.risk:.6f} ({status}); wrote {out_dir}/")
    return 0


def cmd_sweep(args, parser) -> int:
    args = _merged(args, parser)
    if args.sweep is None:
        print("error: --sweep is required", file=sys.stderr)
        return 2
    sweep = args.sweep
    if sweep not in SWEEP_VARIABLES:
        print(f"error: unknown sweep variable {sweep!r}; expected one of "
              f"{', '.join(SWEEP_VARIABLES)}", file=sys.stderr)
        return 2
    default_ranges = {
        "pop": "10:100:10", "iters": "50:500:50", "pc": "0.1:0.9:0.1",
        "pm": "0.1:0.9:0.1", "risk_cap": "0.1:1.0:0.1", "lambda": "0.3:3.0:0.3",
        "servers": "0:10:1", "tasks": "10:50:20",
    }
    try:
        values = parse_range(args.range if args.range is not None
                             else default_ranges[sweep], sweep in _INT_SWEEPS)
        strategies = [s.strip() for s in
                      (args.strategies if args.strategies is not None else "seeco").split(",")]
        for name in strategies:
            Strategy.parse(name)
        seeds = parse_seeds(args.seeds if args.seeds is not None
                            else ",".join(str(i) for i in range(1, 11)))
        literal = parse_bool(args.literal_eq11) if isinstance(args.literal_eq11, str) \
            else (args.literal_eq11 if args.literal_eq11 is not None else True)
        workflow = load_workflow(args.workflow) if args.workflow else None
        platform = load_platform(args.platform) if args.platform else None
        gen_cfg = GeneratorConfig(
            data_range_mb=(float(args.data_min if args.data_min is not None else 5.0),
                           float(args.data_max if args.data_max is not None else 50.0)),
            workload_range_gcycles=(
                float(args.load_min if args.load_min is not None else 1.0),
                float(args.load_max if args.load_max is not None else 10.0)),
        )
        jobs = build_sweep_jobs(
            sweep=sweep, values=values, strategies=strategies, seeds=seeds,
            base_params=_ga_params(args, sweep), workflow=workflow, platform=platform,
            risk_model=_risk_model(args), gen_cfg=gen_cfg,
            density=float(args.density if args.density is not None else 0.3),
            workflow_seed=int(args.workflow_seed if args.workflow_seed is not None else 1),
            risk_cap=float(args.risk_cap if args.risk_cap is not None else 0.5),
            literal_eq11=literal, catalog_path=args.catalog,
            tasks=int(args.tasks if args.tasks is not None else 30))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    rows = run_sweep(jobs)
    out_dir = Path(args.out if args.out is not None else "results")
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(out_dir / "sweep.csv", SWEEP_CSV_HEADER, rows)
    _write_csv(out_dir / "summary.csv", SUMMARY_CSV_HEADER, summarize_rows(rows))
    print(f"{len(rows)} runs ({sweep} over {len(set(r['value'] for r in rows))} values, "
          f"{len(strategies)} strategies, {len(seeds)} seeds); wrote {out_dir}/")
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file holding any of these flags")
    sub.add_argument("--platform", help="platform JSON file (default: built-in 3 servers)")
    sub.add_argument("--catalog", help="security catalog JSON file (default: built-in)")


def _add_ga_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--pop", type=int, help="population size (default 40)")
    sub.add_argument("--iters", type=int, help="GA iterations (default 150)")
    sub.add_argument("--pc", type=float, help="crossover probability (default 0.5)")
    sub.add_argument("--pm", type=float, help="mutation probability (default 0.3)")
    sub.add_argument("--lambda-conf", type=float, dest="lambda_conf",
                     help="confidentiality attack rate (default 2.5)")
    sub.add_argument("--lambda-integ", type=float, dest="lambda_integ",
                     help="integrity attack rate (default 1.8)")
    sub.add_argument("--literal-eq11", dest="literal_eq11",
                     help="true/false: keep the producer-core factor in decryption "
                          "cost (default true)")


def _add_generator_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--density", type=float, help="edge probability (default 0.3)")
    sub.add_argument("--data-min", type=float, dest="data_min",
                     help="payload lower bound, MB (default 5)")
    sub.add_argument("--data-max", type=float, dest="data_max",
                     help="payload upper bound, MB (default 50)")
    sub.add_argument("--load-min", type=float, dest="load_min",
                     help="workload lower bound, giga-cycles (default 1)")
    sub.add_argument("--load-max", type=float, dest="load_max",
                     help="workload upper bound, giga-cycles (default 10)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seeco",
        description="Energy-minimizing secure offloading of workflow DAGs "
                    "onto mobile edge platforms")
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="write a random workflow file")
    _add_common(gen)
    _add_generator_flags(gen)
    gen.add_argument("--tasks", type=int, help="number of tasks (default 10)")
    gen.add_argument("--seed", type=int, help="generator seed (default 1)")
    gen.add_argument("--risk-cap", type=float, dest="risk_cap",
                     help="risk probability cap (default 0.5)")
    gen.add_argument("--out", help="output path (default workflow.json)")
    gen.set_defaults(handler=cmd_generate, sub_parser=gen)

    sol = subs.add_parser("solve", help="run one strategy on a workflow")
    _add_common(sol)
    _add_ga_flags(sol)
    sol.add_argument("--workflow", help="workflow JSON file (required)")
    sol.add_argument("--strategy", help="local|max|min|confi|integ|seeco (default seeco)")
    sol.add_argument("--seed", type=int, help="GA seed (default 0)")
    sol.add_argument("--dump-schedule", dest="dump_schedule",
                     help="true/false: write the per-task timeline (default true)")
    sol.add_argument("--out", help="output directory (default results/)")
    sol.set_defaults(handler=cmd_solve, sub_parser=sol)

    swp = subs.add_parser("sweep", help="run strategies across a swept variable")
    _add_common(swp)
    _add_ga_flags(swp)
    _add_generator_flags(swp)
    swp.add_argument("--sweep", help="|".join(SWEEP_VARIABLES))
    swp.add_argument("--range", help="a:b:step (inclusive)")
    swp.add_argument("--workflow", help="workflow JSON file (default: generated)")
    swp.add_argument("--workflow-seed", type=int, dest="workflow_seed",
                     help="generator seed for generated workflows (default 1)")
    swp.add_argument("--tasks", type=int, help="generated workflow size (default 30)")
    swp.add_argument("--risk-cap", type=float, dest="risk_cap",
                     help="risk cap for generated workflows (default 0.5)")
    swp.add_argument("--strategies", help="comma list of strategies (default seeco)")
    swp.add_argument("--seeds", help="comma list of GA seeds (default 1..10)")
    swp.add_argument("--out", help="output directory (default results/)")
    swp.set_defaults(handler=cmd_sweep, sub_parser=swp)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, args.sub_parser)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
