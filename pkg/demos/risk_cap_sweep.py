"""Energy versus risk cap: the headline trade-off curve.

As the cap loosens, the optimizer swaps strong services for weak ones
and offloads more aggressively, so mean energy falls from the
max-level plateau toward the min-level floor.  Equivalent to:

  seeco sweep --sweep risk_cap --tasks 12 --density 0.25 \
      --data-min 2 --data-max 10 --load-min 5 --load-max 15 \
      --strategies local,max,min,seeco --pop 20 --iters 50 --seeds 1,2,3

Run:  python3 demos/risk_cap_sweep.py
"""

from seeco import GaParams, GeneratorConfig, RiskModel
from seeco.cli import build_sweep_jobs, run_sweep, summarize_rows

jobs = build_sweep_jobs(
    sweep="risk_cap",
    values=[round(0.1 * i, 1) for i in range(1, 11)],
    strategies=["local", "max", "min", "seeco"],
    seeds=[1, 2, 3],
    base_params=GaParams(pop_size=20, iterations=50),
    workflow=None,
    platform=None,
    risk_model=RiskModel(),
    gen_cfg=GeneratorConfig(data_range_mb=(2.0, 10.0),
                            workload_range_gcycles=(5.0, 15.0)),
    density=0.25,
    workflow_seed=11,
    risk_cap=0.5,
    tasks=12,
)
summary = summarize_rows(run_sweep(jobs))

by_cap = {}
for row in summary:
    by_cap.setdefault(row["value"], {})[row["strategy"]] = row["mean_energy"]

print("cap    local      max    seeco      min")
for cap in sorted(by_cap):
    line = by_cap[cap]
    print(f"{cap:3.1f} {line['local']:8.3f} {line['max']:8.3f} "
          f"{line['seeco']:8.3f} {line['min']:8.3f}")
