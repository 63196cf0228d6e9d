"""Exact Pareto front by exhaustive enumeration, for tiny instances only.

Every feasible ordered route is enumerated by depth-first extension
(canonical direction: first site id <= last site id, since a route and its
reverse have equal duration), then up to max_teams pairwise-disjoint routes
are combined.  Partitions sharing a visited-site set are collapsed to the
minimum-duration representative on the fly: a costlier arrangement of the
same sites has identical coverage and can only be dominated by (or tie,
key-wise, with) the kept one, so the surviving front is exactly what full
enumeration plus the pairwise dominance filter would return.

In insertion-maximal mode the same collapse applies, so each visited set is
judged by its best arrangement; costlier arrangements of a set whose best
arrangement still has room are deliberately out of scope (they are routing
inefficiencies, not coverage trade-offs).
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import Instance
from .solution import FrontEntry, Solution, dominates

# Partial-path pruning relies on the triangle inequality, which 6-decimal
# rounding can violate by ~1e-6 per chained leg; the slack only costs a bit
# of extra exploration, so keep it comfortably above the worst case.
_PRUNE_SLACK = 1e-4


@dataclass(frozen=True)
class OracleLimits:
    max_sites: int = 10
    max_teams: int = 2
    node_budget: int = 5_000_000


class OracleLimitError(RuntimeError):
    """Instance exceeds an enumeration limit; names the offending dimension."""

    def __init__(self, dimension: str, message: str):
        super().__init__(message)
        self.dimension = dimension


@dataclass
class VerifyReport:
    """Key-level comparison of a candidate front against the exact one.

    Keys match when sorted ratios are exactly equal and durations agree
    within 1e-6.  ``missing`` counts exact entries no candidate matches;
    ``extra_dominated`` counts candidate entries strictly dominated by some
    exact entry (a sound solver must produce zero of those).
    """

    matched: int
    missing: int
    extra_dominated: int
    missing_keys: tuple = ()
    dominated_keys: tuple = ()

    @property
    def clean(self) -> bool:
        return self.missing == 0 and self.extra_dominated == 0


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise OracleLimitError("node_budget", "enumeration node budget exhausted")


def _feasible_route_masks(inst: Instance, budget: _Budget) -> dict[int, tuple[float, tuple[int, ...]]]:
    """Map visited-set bitmask -> (duration, route) of its best single route."""
    rows = inst.travel_rows
    svc = inst.service_times
    cap = inst.t_max + 1e-9
    n = inst.num_sites
    best: dict[int, tuple[float, tuple[int, ...]]] = {}

    def extend(path: list[int], mask: int, dur: float) -> None:
        last = path[-1]
        total = dur + rows[last][0]
        if total <= cap and path[0] <= last:
            cand = (total, tuple(path))
            if mask not in best or cand < best[mask]:
                best[mask] = cand
        for v in range(1, n + 1):
            bit = 1 << (v - 1)
            if mask & bit:
                continue
            budget.spend()
            nd = dur + rows[last][v] + svc[v]
            if nd + rows[v][0] <= cap + _PRUNE_SLACK:
                path.append(v)
                extend(path, mask | bit, nd)
                path.pop()

    for v in range(1, n + 1):
        budget.spend()
        d0 = rows[0][v] + svc[v]
        if d0 + rows[v][0] <= cap + _PRUNE_SLACK:
            extend([v], 1 << (v - 1), d0)
    return best


def _entry_for(inst: Instance, duration: float, mask: int, routes: tuple[tuple[int, ...], ...]) -> FrontEntry:
    counts = [0] * inst.num_characteristics
    for v in range(1, inst.num_sites + 1):
        if mask & (1 << (v - 1)):
            for c in inst.chars_of(v):
                counts[c] += 1
    ordered = tuple(sorted(routes, key=lambda r: r[0]))
    padded = ordered + ((),) * (inst.num_teams - len(ordered))
    return FrontEntry(duration, tuple(zip(counts, inst.characteristic_totals)), padded)


def _is_insertion_maximal(inst: Instance, entry: FrontEntry) -> bool:
    """True when no unvisited site fits into any route under the duration cap.

    Checked on the entry's own routes; a solution with spare room is not
    insertion-maximal even if some costlier arrangement of the same sites
    would be.
    """
    sol = Solution.from_entry(inst, entry)
    if not sol.unassigned:
        return True
    slacks = [inst.t_max - d + 1e-9 for d in sol.route_durations]
    for v in sol.unassigned:
        for k in range(inst.num_teams):
            for pos in range(len(sol.routes[k]) + 1):
                if sol.insertion_delta(v, k, pos) <= slacks[k]:
                    return False
    return True


def enumerate_pareto(
    inst: Instance, limits: OracleLimits = OracleLimits(), maximal_only: bool = False
) -> list[FrontEntry]:
    """Exact Pareto front, sorted by (duration, sorted ratios).

    With maximal_only=False the front is taken over all feasible solutions,
    including partial ones such as the empty solution.  With
    maximal_only=True the solution space is restricted to insertion-maximal
    solutions (no unvisited site fits any route) and dominance is filtered
    within that space.  That restricted front is the right anchor for a
    search whose repair operators always insert until nothing more fits: such
    a search can never emit a solution with spare room, so comparing its
    archive against the unrestricted front would report misses for points no
    amount of searching could reach.

    Raises OracleLimitError when the instance exceeds max_sites/max_teams or
    the enumeration exceeds node_budget.
    """
    if inst.num_sites > limits.max_sites:
        raise OracleLimitError("sites", f"{inst.num_sites} sites exceeds oracle limit {limits.max_sites}")
    if inst.num_teams > limits.max_teams:
        raise OracleLimitError("teams", f"{inst.num_teams} teams exceeds oracle limit {limits.max_teams}")

    budget = _Budget(limits.node_budget)
    route_best = _feasible_route_masks(inst, budget)
    route_items = sorted(route_best.items())

    # combos: visited mask -> (total duration, routes); best partition only.
    combos: dict[int, tuple[float, tuple[tuple[int, ...], ...]]] = {0: (0.0, ())}
    frontier = {0: (0.0, ())}
    for _ in range(inst.num_teams):
        grown: dict[int, tuple[float, tuple[tuple[int, ...], ...]]] = {}
        for base_mask, (base_dur, base_routes) in sorted(frontier.items()):
            for mask, (dur, route) in route_items:
                budget.spend()
                if base_mask & mask:
                    continue
                union = base_mask | mask
                cand = (base_dur + dur, base_routes + (route,))
                if union not in grown or cand < grown[union]:
                    grown[union] = cand
        for union, cand in grown.items():
            if union not in combos or cand < combos[union]:
                combos[union] = cand
        frontier = grown

    candidates = [
        _entry_for(inst, dur, mask, routes) for mask, (dur, routes) in sorted(combos.items())
    ]
    if maximal_only:
        candidates = [e for e in candidates if _is_insertion_maximal(inst, e)]
    candidates.sort(key=lambda e: e.key)

    front: list[FrontEntry] = []
    seen_keys = set()
    for e in candidates:
        if e.key in seen_keys:
            continue
        if any(dominates(o, e) for o in candidates if o is not e):
            continue
        seen_keys.add(e.key)
        front.append(e)
    return front


def verify_front(candidate: list[FrontEntry], exact: list[FrontEntry], duration_tol: float = 1e-6) -> VerifyReport:
    """Count exact-front entries the candidate hits, misses, and candidate
    entries strictly dominated by the exact front.

    Matching and dominance both use duration_tol: a candidate that matches a
    front point (equal sorted ratios, duration within tolerance) is never
    counted as dominated, and an unmatched candidate counts only when some
    exact entry beats it by more than accumulation noise.
    """

    def match(c: FrontEntry, target: FrontEntry) -> bool:
        return c.sorted_ratios == target.sorted_ratios and abs(c.duration - target.duration) <= duration_tol

    missing_keys = tuple(e.key for e in exact if not any(match(c, e) for c in candidate))
    dominated_keys = tuple(
        c.key
        for c in candidate
        if not any(match(c, e) for e in exact) and any(dominates(e, c, duration_tol) for e in exact)
    )
    matched = len(exact) - len(missing_keys)
    return VerifyReport(matched, len(missing_keys), len(dominated_keys), missing_keys, dominated_keys)
