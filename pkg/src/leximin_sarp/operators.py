"""Destroy / repair operators and the adaptive roulette selection bank.

Destroy operators mutate the solution by moving visited sites back to the
unassigned pool; repair operators greedily insert unassigned sites at
feasible positions until none fits.  All operators are deterministic given
the supplied random source.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .solution import DURATION_EPS, Solution

DURATION_OBJECTIVE = "duration"
LEXIMIN_OBJECTIVE = "leximin"
OBJECTIVES = (DURATION_OBJECTIVE, LEXIMIN_OBJECTIVE)

DESTROY = "destroy"
REPAIR = "repair"

CONFIGURATIONS = ("all", "leximin", "max_min")

DURATION_DESTROYS = ("rand_rm", "worst_dur_rm", "related_rm")
DURATION_REPAIRS = ("cheapest_ins", "regret2_ins", "regret3_ins")
LEXIMIN_DESTROYS = ("rand_rm", "worst_min_rm")
_LEXIMIN_REPAIRS = {
    "all": ("maxmin_rand_ins", "maxmin_dur_ins", "leximin_ins"),
    "leximin": ("leximin_ins",),
    "max_min": ("maxmin_rand_ins", "maxmin_dur_ins"),
}


def normalize_configuration(name: str) -> str:
    name = name.replace("-", "_")
    if name not in CONFIGURATIONS:
        raise ValueError(f"configuration must be one of {CONFIGURATIONS}, got {name!r}")
    return name


@dataclass
class DestroyContext:
    q: int
    p_worst: int
    p_related: int
    rng: random.Random


def draw_q(visited_count: int, rng: random.Random, fraction: float = 0.30) -> int:
    """Removal size: uniform in [1, max(1, floor(fraction * visited))]."""
    if visited_count <= 0:
        return 0
    return rng.randint(1, max(1, int(fraction * visited_count)))


# -- destroy -----------------------------------------------------------------


def destroy_random(sol: Solution, q: int, rng: random.Random) -> Solution:
    visited = sol.visited_sites()
    for _ in range(min(q, len(visited))):
        sol.remove_site(visited.pop(int(rng.random() * len(visited))))
    return sol


def destroy_worst_duration(sol: Solution, q: int, p_worst: int, rng: random.Random) -> Solution:
    """Repeatedly drop the site with (randomized) worst duration contribution.

    Contributions are the solution duration with minus without the site and
    are recomputed after every removal; the removal index into the
    descending list is floor(y^p_worst * len) for uniform y.
    """
    rows = sol.inst.travel_rows
    svc = sol.inst.service_times
    for _ in range(q):
        ranked = []
        for k, route in enumerate(sol.routes):
            prev = 0
            for i, v in enumerate(route):
                nxt = route[i + 1] if i + 1 < len(route) else 0
                delta = rows[prev][v] + rows[v][nxt] - rows[prev][nxt] + svc[v]
                ranked.append((-delta, k, i))
                prev = v
        if not ranked:
            break
        ranked.sort()
        idx = int(rng.random() ** p_worst * len(ranked))
        sol.remove(ranked[idx][1], ranked[idx][2])
    return sol


def destroy_related(sol: Solution, q: int, p_related: int, rng: random.Random) -> Solution:
    """Remove a seed site, then grow the removed set by travel-time
    relatedness to randomly chosen already-removed sites."""
    visited = sol.visited_sites()
    if not visited or q <= 0:
        return sol
    seed = visited[int(rng.random() * len(visited))]
    sol.remove_site(seed)
    removed = [seed]
    while len(removed) < q and sol.visited_count() > 0:
        anchor_row = sol.inst.travel_rows[removed[int(rng.random() * len(removed))]]
        remaining = sol.visited_sites()
        remaining.sort(key=lambda v: anchor_row[v])
        victim = remaining[int(rng.random() ** p_related * len(remaining))]
        sol.remove_site(victim)
        removed.append(victim)
    return sol


def destroy_worst_min(sol: Solution, q: int, p_worst: int, rng: random.Random) -> Solution:
    """Leximin counterpart of worst removal: sites whose removal decreases
    the minimum coverage ratio least are ranked first, ties by smaller
    duration contribution; same y^p_worst randomized index."""
    inst = sol.inst
    scales = inst.ratio_scales
    chars_of = inst.chars_of
    rows = inst.travel_rows
    svc = inst.service_times
    for _ in range(q):
        base = [n * s for n, s in zip(sol.coverage_counts, scales)]
        cur_min = min(base)
        ranked = []
        for k, route in enumerate(sol.routes):
            prev = 0
            for i, v in enumerate(route):
                vals = base.copy()
                for c in chars_of(v):
                    vals[c] -= scales[c]
                nxt = route[i + 1] if i + 1 < len(route) else 0
                delta = rows[prev][v] + rows[v][nxt] - rows[prev][nxt] + svc[v]
                ranked.append((cur_min - min(vals), delta, k, i))
                prev = v
        if not ranked:
            break
        ranked.sort(key=lambda t: (t[0], t[1]))
        idx = int(rng.random() ** p_worst * len(ranked))
        sol.remove(ranked[idx][2], ranked[idx][3])
    return sol


# -- repair ------------------------------------------------------------------


class _InsertionPlanner:
    """Cheapest-insertion table shared by every repair operator.

    Keeps, per unassigned site and route, the best (delta, position) over
    all positions whether or not it fits the cap; feasibility is judged
    against the route's current slack on lookup.  Inserting a site replaces
    exactly one gap of its route, so every other cell of that route updates
    in O(1) from the two new positions unless its stored best sat on the
    replaced gap (then the route is rescanned).  Ties always resolve to the
    earliest position, which keeps the increments bit-identical to a scan.
    """

    __slots__ = ("sol", "sites", "table", "rows", "svc", "cap", "slacks")

    def __init__(self, sol: Solution):
        self.sol = sol
        inst = sol.inst
        self.rows = inst.travel_rows
        self.svc = inst.service_times
        self.cap = inst.t_max + DURATION_EPS
        self.slacks = [self.cap - d for d in sol.route_durations]
        self.sites = sorted(sol.unassigned)
        self.table = {site: [self._scan(site, k) for k in range(len(sol.routes))] for site in self.sites}

    def _scan(self, site: int, k: int) -> tuple[float, int]:
        rows = self.rows
        site_row = rows[site]
        svc = self.svc[site]
        prev_row = rows[0]
        best_delta = math.inf
        best_pos = 0
        pos = 0
        for nxt in self.sol.routes[k]:
            delta = prev_row[site] + site_row[nxt] - prev_row[nxt] + svc
            if delta < best_delta:
                best_delta, best_pos = delta, pos
            prev_row = rows[nxt]
            pos += 1
        delta = prev_row[site] + site_row[0] - prev_row[0] + svc
        if delta < best_delta:
            best_delta, best_pos = delta, pos
        return (best_delta, best_pos)

    def best_overall(self, site: int):
        """Cheapest feasible (delta, route, pos) for the site, or None."""
        best = None
        slacks = self.slacks
        for k, (delta, pos) in enumerate(self.table[site]):
            if delta <= slacks[k] and (best is None or delta < best[0]):
                best = (delta, k, pos)
        return best

    def route_costs(self, site: int) -> list[float]:
        """Feasible per-route cheapest deltas, ascending (for k-regret)."""
        slacks = self.slacks
        return sorted(d for k, (d, _) in enumerate(self.table[site]) if d <= slacks[k])

    def apply(self, site: int, k: int, pos: int) -> None:
        sol = self.sol
        route = sol.routes[k]
        prev = route[pos - 1] if pos > 0 else 0
        nxt = route[pos] if pos < len(route) else 0
        sol.insert(site, k, pos)
        self.slacks[k] = self.cap - sol.route_durations[k]
        self.sites.remove(site)
        del self.table[site]
        rows = self.rows
        prev_row = rows[prev]
        site_row = rows[site]
        d_ps = prev_row[site]
        d_sn = site_row[nxt]
        d_pn = prev_row[nxt]
        after = pos + 1
        for other in self.sites:
            row = self.table[other]
            odelta, opos = row[k]
            if opos == pos:
                row[k] = self._scan(other, k)
                continue
            svc = self.svc[other]
            other_row = rows[other]
            c1 = prev_row[other] + other_row[site] - d_ps + svc
            c2 = site_row[other] + other_row[nxt] - d_sn + svc
            row[k] = min((odelta, opos + 1 if opos > pos else opos), (c1, pos), (c2, after))


def repair_cheapest(sol: Solution, rng: random.Random) -> Solution:
    """Insert the globally cheapest feasible site until nothing fits."""
    planner = _InsertionPlanner(sol)
    while True:
        best = None
        for site in planner.sites:
            cand = planner.best_overall(site)
            if cand is not None and (best is None or cand[0] < best[0]):
                best = (cand[0], site, cand[1], cand[2])
        if best is None:
            break
        planner.apply(best[1], best[2], best[3])
    return sol


def repair_k_regret(sol: Solution, k_regret: int, rng: random.Random) -> Solution:
    """Insert the site with the largest regret between its cheapest route
    and its next k-1 cheapest routes; sites with fewer than k_regret
    feasible routes get infinite regret (served first, cheapest delta
    breaking ties).  Insertion goes to the cheapest feasible position."""
    planner = _InsertionPlanner(sol)
    while True:
        chosen = None
        chosen_rank = None
        for site in planner.sites:
            best = planner.best_overall(site)
            if best is None:
                continue
            costs = planner.route_costs(site)
            if len(costs) < k_regret:
                regret = float("inf")
            else:
                regret = sum(costs[1:k_regret]) - (k_regret - 1) * costs[0]
            rank = (-regret, best[0])
            if chosen_rank is None or rank < chosen_rank:
                chosen, chosen_rank = (site, best[1], best[2]), rank
        if chosen is None:
            break
        planner.apply(*chosen)
    return sol


def repair_maxmin(sol: Solution, tie_break: str, rng: random.Random) -> Solution:
    """Insert the site whose insertion maximizes the minimum coverage ratio;
    tie_break is "random" (uniform) or "duration" (lowest increase).  The
    chosen site goes to its duration-minimizing feasible position."""
    planner = _InsertionPlanner(sol)
    scales = sol.inst.ratio_scales
    chars_of = sol.inst.chars_of
    while True:
        base = [n * s for n, s in zip(sol.coverage_counts, scales)]
        cands = []
        for site in planner.sites:
            best = planner.best_overall(site)
            if best is None:
                continue
            vals = base.copy()
            for c in chars_of(site):
                vals[c] += scales[c]
            cands.append((min(vals), best[0], site, best[1], best[2]))
        if not cands:
            break
        top = max(c[0] for c in cands)
        pool = [c for c in cands if c[0] == top]
        if tie_break == "random":
            pick = pool[int(rng.random() * len(pool))]
        else:
            pick = min(pool, key=lambda c: c[1])
        planner.apply(pick[2], pick[3], pick[4])
    return sol


def repair_leximin(sol: Solution, rng: random.Random) -> Solution:
    """Insert the site whose full post-insertion coverage vector is leximin
    maximal, ties by smaller duration increase; cheapest feasible position."""
    planner = _InsertionPlanner(sol)
    scales = sol.inst.ratio_scales
    chars_of = sol.inst.chars_of
    while True:
        base = [n * s for n, s in zip(sol.coverage_counts, scales)]
        chosen = None
        chosen_rank = None
        for site in planner.sites:
            best = planner.best_overall(site)
            if best is None:
                continue
            vals = base.copy()
            for c in chars_of(site):
                vals[c] += scales[c]
            vec = tuple(sorted(vals))
            if chosen_rank is None or vec > chosen_rank[0] or (vec == chosen_rank[0] and best[0] < chosen_rank[1]):
                chosen, chosen_rank = (site, best[1], best[2]), (vec, best[0])
        if chosen is None:
            break
        planner.apply(*chosen)
    return sol


# -- registries ---------------------------------------------------------------


def _rand_rm(sol, ctx):
    return destroy_random(sol, ctx.q, ctx.rng)


def _worst_dur_rm(sol, ctx):
    return destroy_worst_duration(sol, ctx.q, ctx.p_worst, ctx.rng)


def _related_rm(sol, ctx):
    return destroy_related(sol, ctx.q, ctx.p_related, ctx.rng)


def _worst_min_rm(sol, ctx):
    return destroy_worst_min(sol, ctx.q, ctx.p_worst, ctx.rng)


def _regret2_ins(sol, rng):
    return repair_k_regret(sol, 2, rng)


def _regret3_ins(sol, rng):
    return repair_k_regret(sol, 3, rng)


def _maxmin_rand_ins(sol, rng):
    return repair_maxmin(sol, "random", rng)


def _maxmin_dur_ins(sol, rng):
    return repair_maxmin(sol, "duration", rng)


DESTROY_OPS = {
    "rand_rm": _rand_rm,
    "worst_dur_rm": _worst_dur_rm,
    "related_rm": _related_rm,
    "worst_min_rm": _worst_min_rm,
}

REPAIR_OPS = {
    "cheapest_ins": repair_cheapest,
    "regret2_ins": _regret2_ins,
    "regret3_ins": _regret3_ins,
    "maxmin_rand_ins": _maxmin_rand_ins,
    "maxmin_dur_ins": _maxmin_dur_ins,
    "leximin_ins": repair_leximin,
}


# -- adaptive selection --------------------------------------------------------


@dataclass
class _OpStats:
    weight: float = 1.0
    score: float = 0.0
    attempts: int = 0


class OperatorBank:
    """Per-objective operator weights with segment-wise adaptation.

    Weights start at 1; selection is roulette-wheel proportional to weight.
    At the end of each segment every operator with attempts theta > 0 moves
    to weight*(1-r) + r*score/theta, and score/attempts reset.  Operators
    never selected keep their weight.
    """

    def __init__(self, rosters: dict[tuple[str, str], tuple[str, ...]], reaction: float = 0.1):
        self.reaction = reaction
        self.rosters = dict(rosters)
        self._stats: dict[tuple[str, str], dict[str, _OpStats]] = {
            key: {name: _OpStats() for name in names} for key, names in rosters.items()
        }
        self._last_drawn: dict[tuple[str, str], str] = {}
        # Weights only move at segment ends, so roulette totals are cached
        # between them.
        self._totals: dict[tuple[str, str], float] = {}

    @classmethod
    def for_configuration(cls, configuration: str, reaction: float = 0.1) -> "OperatorBank":
        configuration = normalize_configuration(configuration)
        rosters = {
            (DURATION_OBJECTIVE, DESTROY): DURATION_DESTROYS,
            (DURATION_OBJECTIVE, REPAIR): DURATION_REPAIRS,
            (LEXIMIN_OBJECTIVE, DESTROY): LEXIMIN_DESTROYS,
            (LEXIMIN_OBJECTIVE, REPAIR): _LEXIMIN_REPAIRS[configuration],
        }
        return cls(rosters, reaction)

    def operators(self, objective: str, kind: str) -> tuple[str, ...]:
        return self.rosters[(objective, kind)]

    def select_operator(self, objective: str, kind: str, rng: random.Random) -> str:
        stats = self._stats[(objective, kind)]
        names = self.rosters[(objective, kind)]
        total = self._totals.get((objective, kind))
        if total is None:
            total = sum(stats[n].weight for n in names)
            self._totals[(objective, kind)] = total
        x = rng.random() * total
        acc = 0.0
        chosen = names[-1]
        for n in names:
            acc += stats[n].weight
            if x < acc:
                chosen = n
                break
        stats[chosen].attempts += 1
        self._last_drawn[(objective, kind)] = chosen
        return chosen

    def reward_last(self, objective: str, amount: float = 1.0) -> None:
        """Credit the destroy+repair pair last drawn for the objective."""
        for kind in (DESTROY, REPAIR):
            name = self._last_drawn.get((objective, kind))
            if name is None:
                raise RuntimeError(f"no {kind} drawn yet for objective {objective}")
            self._stats[(objective, kind)][name].score += amount

    def end_segment(self) -> None:
        r = self.reaction
        for stats in self._stats.values():
            for s in stats.values():
                if s.attempts > 0:
                    s.weight = s.weight * (1 - r) + r * s.score / s.attempts
                s.score = 0.0
                s.attempts = 0
        self._totals.clear()

    def weights(self) -> dict[str, dict[str, float]]:
        return {
            f"{objective}/{kind}": {n: stats[n].weight for n in self.rosters[(objective, kind)]}
            for (objective, kind), stats in self._stats.items()
        }


def update_weight(weight: float, reaction: float, score: float, attempts: int) -> float:
    """The segment update in isolation: weight*(1-r) + r*score/attempts,
    unchanged when attempts == 0."""
    if attempts == 0:
        return weight
    return weight * (1 - reaction) + reaction * score / attempts
