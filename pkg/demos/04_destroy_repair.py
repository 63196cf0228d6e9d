"""
Destroy and repair operators, and how their weights adapt
=========================================================

The search perturbs a solution by removing a few sites (destroy) and
re-inserting greedily until no site fits (repair).  Each objective has
its own roster; a roulette wheel picks operators with probability
proportional to weights that adapt to recent success.
"""

import random

from leximin_sarp import OperatorBank, Solution, draw_q, generate_instance, update_weight
from leximin_sarp.operators import (
    DESTROY,
    DESTROY_OPS,
    DURATION_OBJECTIVE,
    REPAIR,
    REPAIR_OPS,
    DestroyContext,
)

rng = random.Random(11)
inst = generate_instance(10, 4, 2, 100.0, "random", seed=11)

# Build a full solution with cheapest insertion, then walk one
# destroy/repair cycle by hand.
sol = REPAIR_OPS["cheapest_ins"](Solution(inst), rng)
print("constructed:", sol.routes, f"duration {sol.duration:.1f}")

q = draw_q(sol.visited_count(), 0.3, rng)  # removal size, at least 1
DESTROY_OPS["worst_dur_rm"](sol, DestroyContext(q, 3, 5, rng))
print(f"after removing {q} costly sites:", sol.routes, f"duration {sol.duration:.1f}")

REPAIR_OPS["regret2_ins"](sol, rng)
print("after 2-regret repair:", sol.routes, f"duration {sol.duration:.1f}")
print("ratios:", sol.coverage_vector().as_decimals(2))

# The repair rosters differ per objective: duration repairs chase cheap
# insertions, leximin repairs chase the weakest characteristic.
bank = OperatorBank.for_configuration("all", reaction=0.1)
print("\nrosters:", {k: sorted(v) for k, v in bank.weights().items()})

# Weights move toward score/attempts at each segment end:
# new = old*(1-r) + r*score/attempts.
print("\nweight after 4 draws, 2 rewards:", update_weight(1.0, 0.1, 2.0, 4))

# A bank draw followed by a reward feeds the same update.
bank.select_operator(DURATION_OBJECTIVE, DESTROY, rng)
bank.select_operator(DURATION_OBJECTIVE, REPAIR, rng)
bank.reward_last(DURATION_OBJECTIVE)
bank.end_segment()
changed = {
    name: round(w, 3)
    for name, w in bank.weights()["duration/destroy"].items()
    if w != 1.0
}
print("weights that moved this segment:", changed)
