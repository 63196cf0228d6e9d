"""
Solutions, coverage vectors, and the leximin order
==================================================

A solution assigns some sites to team routes; unvisited sites stay in a
pool.  Its quality is a (duration, coverage-ratio vector) pair.  Ratios
are exact fractions, and fairness is judged by the leximin order: sort
both vectors ascending, first differing position wins.
"""

from leximin_sarp import (
    CoverageVector,
    LeximinOrder,
    Solution,
    dominates,
    generate_instance,
    leximin_compare,
)

inst = generate_instance(8, 4, 2, 90.0, "random", seed=7)
sol = Solution(inst)

# Place a few sites by hand: insert(site, route, position) keeps cached
# durations and coverage counts up to date.
sol.insert(3, 0, 0)
sol.insert(5, 0, 1)
sol.insert(1, 1, 0)
print("routes:", sol.routes)
print("duration:", round(sol.duration, 3))
print("coverage ratios:", sol.coverage_vector().as_decimals(3))
print("feasible:", sol.is_feasible())

# Removing a site returns it to the pool.
sol.remove_site(5)
print("after removing site 5:", sol.routes, "unassigned:", sorted(sol.unassigned))

# Leximin refines max-min: both vectors below have minimum 0.75, but the
# right one has more positions at 1 and wins from the third sorted slot.
left = CoverageVector(((3, 4), (1, 1), (3, 4), (3, 4), (1, 1), (3, 4)))
right = CoverageVector(((1, 1), (1, 1), (3, 4), (1, 1), (1, 1), (3, 4)))
print("\nleximin_compare(right, left):", leximin_compare(right, left))
assert leximin_compare(right, left) is LeximinOrder.X_DOMINATES

# Bi-objective dominance: at least as good in duration and leximin, strictly
# better somewhere.  Entries carry (duration, ratios, routes).
e1 = sol.to_entry()
cheaper = Solution(inst)
cheaper.insert(3, 0, 0)
cheaper.insert(1, 1, 0)
e2 = cheaper.to_entry()
print("\ne1:", round(e1.duration, 2), e1.sorted_ratios)
print("e2:", round(e2.duration, 2), e2.sorted_ratios)
print("e1 dominates e2:", dominates(e1, e2), "/ e2 dominates e1:", dominates(e2, e1))
