"""Decode one chromosome into a schedule, step by step.

A three-task pipeline runs on the mobile device, hops to edge server 1,
and returns.  The middle task's output is encrypted and hashed before
leaving each access point; the timeline below shows where the time and
the device energy go.

Run:  python3 demos/schedule_walkthrough.py
"""

from seeco import Chromosome, RiskModel, Task, Workflow, default_catalog, default_platform, evaluate

workflow = Workflow(
    tasks=(
        Task(0, input_mb=5.0, output_mb=15.0, workload_gcycles=2.36),
        Task(1, input_mb=15.0, output_mb=10.0, workload_gcycles=4.6),
        Task(2, input_mb=10.0, output_mb=8.0, workload_gcycles=2.36),
    ),
    edges=((0, 1), (1, 2)),
    deadline_s=30.0,
    risk_cap=0.9,
)
platform = default_platform()

# order positions carry the genes: task 1 sits at position 1, placed on
# access point 1 (byte 0x10) with mid-strength services
chromosome = Chromosome(
    order=(0, 1, 2),
    locations=(0x01, 0x10, 0x01),
    conf_levels=(5, 3, 1),
    integ_levels=(5, 2, 1),
)

result = evaluate(chromosome, workflow, platform, default_catalog(), RiskModel())

print("task  ap vm   start    end   exec  wire  encrypt decrypt   risk")
for i, row in enumerate(result.timings):
    print(f"  t{i}   {row.ap}  {row.vm}  {row.start:6.2f} {row.end:6.2f} "
          f"{row.exec:6.2f} {row.transfer:5.2f}  {row.encrypt_cost:6.3f} "
          f"{row.decrypt_cost:6.3f}  {row.risk:5.3f}")

print(f"\nmakespan {result.makespan_s:.3f} s (deadline {workflow.deadline_s}),"
      f" device energy {result.energy_j:.3f} J,"
      f" risk {result.risk:.4f} (cap {workflow.risk_cap})")
print("feasible" if result.feasible else f"infeasible by {result.violation:.3f}")
