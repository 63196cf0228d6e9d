"""
Checking the search against exhaustive enumeration
==================================================

On small instances the exact Pareto front can be enumerated outright.
The oracle enumerates every feasible route combination (with guard rails
on size), and verify_front grades a candidate archive against it.
"""

from leximin_sarp import (
    OracleLimitError,
    OracleLimits,
    SearchConfig,
    enumerate_pareto,
    generate_instance,
    mdls_run,
    verify_front,
)

inst = generate_instance(7, 3, 2, 80.0, "random", seed=103)

# The full front keeps every non-dominated point, including sparse
# solutions that a saturating search never emits (its repairs insert
# until nothing fits).  maximal_only restricts to that reachable world.
full = enumerate_pareto(inst, OracleLimits(10, 2, 50_000_000))
maximal = enumerate_pareto(inst, OracleLimits(10, 2, 50_000_000), maximal_only=True)
print(f"{inst.name}: full front {len(full)} points, insertion-maximal front {len(maximal)}")
for e in maximal:
    print(f"  {e.duration:8.2f}  {tuple(str(f) for f in e.sorted_ratios)}")

# Grade a real run: candidate first, exact front second.
res = mdls_run(inst, SearchConfig(iterations=20_000, seed=1, q_fraction=1.0))
report = verify_front(list(res.archive.entries), maximal)
print(f"\nsearch vs oracle: matched {report.matched}, missing {report.missing}, "
      f"dominated extras {report.extra_dominated}")

# The guard rails refuse instances whose enumeration would not finish.
try:
    enumerate_pareto(generate_instance(30, 4, 2, 120.0, "random", seed=1), OracleLimits(10, 2, 1000))
except OracleLimitError as err:
    print(f"\noversized request refused: {err}")
