"""Solutions, coverage vectors, and the leximin / dominance orders.

Coverage ratios are kept exact as (covered, total) integer pairs; all order
comparisons go through rational arithmetic (cross-multiplication via
Fraction), never through float division, so published-style values such as
0.571 and 4/7 cannot be confused by rounding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .instance import Instance

# Tolerance for comparing route/solution durations (floats); coverage-ratio
# comparisons are exact and take no tolerance.
DURATION_EPS = 1e-9


class LeximinOrder(enum.Enum):
    X_DOMINATES = "x_dominates"
    Y_DOMINATES = "y_dominates"
    INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class CoverageVector:
    """Per-characteristic coverage ratios as exact (covered, total) pairs."""

    ratios: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for num, den in self.ratios:
            if den <= 0 or num < 0 or num > den:
                raise ValueError(f"bad coverage ratio {num}/{den}")

    @cached_property
    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(num, den) for num, den in self.ratios)

    @cached_property
    def sorted_ratios(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.fractions))

    @property
    def min_ratio(self) -> Fraction:
        return self.sorted_ratios[0]

    def as_decimals(self, places: int = 6) -> tuple[float, ...]:
        return tuple(round(num / den, places) for num, den in self.ratios)


def leximin_compare(x: CoverageVector, y: CoverageVector) -> LeximinOrder:
    """Definition of the leximin order: sort both vectors non-decreasingly
    and let the first position where they differ decide; equal sorted
    vectors are indifferent (routes may still differ)."""
    if len(x.ratios) != len(y.ratios):
        raise ValueError(f"cannot compare coverage over {len(x.ratios)} vs {len(y.ratios)} characteristics")
    xs, ys = x.sorted_ratios, y.sorted_ratios
    if xs == ys:
        return LeximinOrder.INDIFFERENT
    return LeximinOrder.X_DOMINATES if xs > ys else LeximinOrder.Y_DOMINATES


@dataclass(frozen=True)
class FrontEntry:
    """Immutable evaluated solution: the unit archives and run files store.

    ``ratios`` keeps the per-characteristic (covered, total) pairs in
    characteristic order; ``routes`` keeps one realization of the visits.
    Identity for archive purposes is the key (duration rounded to 1e-9,
    sorted ratios); different routes behind an equal key count as one.
    """

    duration: float
    ratios: tuple[tuple[int, int], ...]
    routes: tuple[tuple[int, ...], ...]

    @cached_property
    def sorted_ratios(self) -> tuple[Fraction, ...]:
        return tuple(sorted(Fraction(num, den) for num, den in self.ratios))

    @cached_property
    def ratio_denominators(self) -> tuple[int, ...]:
        return tuple(den for _, den in self.ratios)

    @cached_property
    def sorted_scaled(self) -> tuple[int, ...]:
        """Sorted ratios as integers on the lcm-of-denominators scale.

        Exact and order-identical to sorted_ratios for entries sharing the
        same denominators (always true within one instance), but compares as
        plain ints, which is what the archive's hot path needs.
        """
        scale = math.lcm(*self.ratio_denominators)
        return tuple(sorted(num * (scale // den) for num, den in self.ratios))

    @cached_property
    def key(self) -> tuple[float, tuple[int, ...]]:
        return (round(self.duration, 9), self.sorted_scaled)

    @property
    def min_ratio(self) -> Fraction:
        return self.sorted_ratios[0]

    def coverage_vector(self) -> CoverageVector:
        return CoverageVector(self.ratios)


def entry_from_decimals(duration, ratios, routes=()) -> FrontEntry:
    """Build an entry from published-style decimal ratios ('0.571' or 0.571);
    each decimal becomes the exact fraction it prints as (571/1000)."""
    pairs = []
    for r in ratios:
        f = Fraction(str(r))
        pairs.append((f.numerator, f.denominator))
    return FrontEntry(float(duration), tuple(pairs), tuple(tuple(r) for r in routes))


def _dominates_nums(da: float, la, db: float, lb, eps: float) -> bool:
    """Dominance core on pre-extracted (duration, sorted vector) pairs; the
    vectors must be same-scale comparables (Fractions or scaled ints)."""
    if da > db + eps:
        return False
    if la < lb:
        return False
    return da < db - eps or la > lb


def dominates(a, b, eps: float = DURATION_EPS) -> bool:
    """True iff a is at most as expensive and leximin at least as good as b,
    with strictness in at least one of the two objectives.  Works on any
    pair of objects exposing ``duration`` and ``sorted_ratios`` (Solution,
    FrontEntry).  Duration uses the eps tolerance; ratios are exact."""
    if (
        type(a) is FrontEntry
        and type(b) is FrontEntry
        and a.ratio_denominators == b.ratio_denominators
    ):
        return _dominates_nums(a.duration, a.sorted_scaled, b.duration, b.sorted_scaled, eps)
    la, lb = a.sorted_ratios, b.sorted_ratios
    if len(la) != len(lb):
        raise ValueError("cannot compare solutions over different characteristic sets")
    return _dominates_nums(a.duration, la, b.duration, lb, eps)


class Solution:
    """Mutable K-route assignment over one instance.

    Caches route durations and per-characteristic visit counts; mutations
    keep them in sync through incremental deltas.  Solutions are rebuilt
    from scratch whenever they are restored from archive entries, so the
    float drift window stays bounded to a single destroy/repair pass (the
    audit helpers below cross-check against full recomputes).
    """

    __slots__ = ("inst", "routes", "unassigned", "route_durations", "coverage_counts")

    def __init__(self, inst: Instance):
        self.inst = inst
        self.routes: list[list[int]] = [[] for _ in range(inst.num_teams)]
        self.unassigned: set[int] = set(range(1, inst.num_sites + 1))
        self.route_durations: list[float] = [0.0] * inst.num_teams
        self.coverage_counts: list[int] = [0] * inst.num_characteristics

    @classmethod
    def from_routes(cls, inst: Instance, routes) -> "Solution":
        sol = cls(inst)
        routes = [list(r) for r in routes]
        if len(routes) > inst.num_teams:
            raise ValueError(f"{len(routes)} routes but only {inst.num_teams} teams")
        seen: set[int] = set()
        for k, route in enumerate(routes):
            for v in route:
                if v in seen or not 1 <= v <= inst.num_sites:
                    raise ValueError(f"bad or repeated site id {v}")
                seen.add(v)
            sol.routes[k] = route
        sol.unassigned -= seen
        sol.route_durations = [sol._route_duration(r) for r in sol.routes]
        counts = [0] * inst.num_characteristics
        for v in seen:
            for c in inst.chars_of(v):
                counts[c] += 1
        sol.coverage_counts = counts
        return sol

    @classmethod
    def from_entry(cls, inst: Instance, entry: FrontEntry) -> "Solution":
        return cls.from_routes(inst, entry.routes)

    def clone(self) -> "Solution":
        other = Solution.__new__(Solution)
        other.inst = self.inst
        other.routes = [list(r) for r in self.routes]
        other.unassigned = set(self.unassigned)
        other.route_durations = list(self.route_durations)
        other.coverage_counts = list(self.coverage_counts)
        return other

    # -- objective views ---------------------------------------------------

    @property
    def duration(self) -> float:
        return sum(self.route_durations)

    def coverage_vector(self) -> CoverageVector:
        totals = self.inst.characteristic_totals
        return CoverageVector(tuple(zip(self.coverage_counts, totals)))

    @property
    def sorted_ratios(self) -> tuple[Fraction, ...]:
        return self.coverage_vector().sorted_ratios

    def sorted_scaled(self) -> tuple[int, ...]:
        """Sorted coverage vector as exact lcm-scaled integers (hot path)."""
        scales = self.inst.ratio_scales
        return tuple(sorted(n * s for n, s in zip(self.coverage_counts, scales)))

    def min_scaled(self) -> int:
        scales = self.inst.ratio_scales
        return min(n * s for n, s in zip(self.coverage_counts, scales))

    def to_entry(self) -> FrontEntry:
        totals = self.inst.characteristic_totals
        entry = FrontEntry(
            self.duration,
            tuple(zip(self.coverage_counts, totals)),
            tuple(tuple(r) for r in self.routes),
        )
        # Pre-fill caches the archive is about to ask for; the instance's
        # lcm scale equals the entry's own, so the values are identical.
        entry.__dict__["ratio_denominators"] = tuple(totals)
        entry.__dict__["sorted_scaled"] = self.sorted_scaled()
        return entry

    # -- structure ---------------------------------------------------------

    def visited_count(self) -> int:
        return self.inst.num_sites - len(self.unassigned)

    def visited_sites(self) -> list[int]:
        out = []
        for route in self.routes:
            out.extend(route)
        return out

    def locate(self, site_id: int) -> tuple[int, int]:
        for k, route in enumerate(self.routes):
            for i, v in enumerate(route):
                if v == site_id:
                    return k, i
        raise ValueError(f"site {site_id} is not visited")

    def is_feasible(self, eps: float = DURATION_EPS) -> bool:
        cap = self.inst.t_max + eps
        return all(d <= cap for d in self.route_durations)

    # -- deltas (no mutation) ----------------------------------------------

    def insertion_delta(self, site_id: int, route_idx: int, pos: int) -> float:
        """Duration increase from inserting site_id at pos of the route."""
        route = self.routes[route_idx]
        rows = self.inst.travel_rows
        prev = route[pos - 1] if pos > 0 else 0
        nxt = route[pos] if pos < len(route) else 0
        return rows[prev][site_id] + rows[site_id][nxt] - rows[prev][nxt] + self.inst.service_times[site_id]

    def removal_delta(self, route_idx: int, pos: int) -> float:
        """Duration decrease from dropping the site at pos of the route."""
        route = self.routes[route_idx]
        rows = self.inst.travel_rows
        v = route[pos]
        prev = route[pos - 1] if pos > 0 else 0
        nxt = route[pos + 1] if pos + 1 < len(route) else 0
        return rows[prev][v] + rows[v][nxt] - rows[prev][nxt] + self.inst.service_times[v]

    # -- mutations ---------------------------------------------------------

    def insert(self, site_id: int, route_idx: int, pos: int) -> None:
        if site_id not in self.unassigned:
            raise ValueError(f"site {site_id} is not unassigned")
        delta = self.insertion_delta(site_id, route_idx, pos)
        self.routes[route_idx].insert(pos, site_id)
        self.unassigned.remove(site_id)
        self.route_durations[route_idx] += delta
        for c in self.inst.chars_of(site_id):
            self.coverage_counts[c] += 1

    def remove(self, route_idx: int, pos: int) -> int:
        delta = self.removal_delta(route_idx, pos)
        site_id = self.routes[route_idx].pop(pos)
        self.unassigned.add(site_id)
        self.route_durations[route_idx] -= delta
        for c in self.inst.chars_of(site_id):
            self.coverage_counts[c] -= 1
        return site_id

    def remove_site(self, site_id: int) -> None:
        k, i = self.locate(site_id)
        self.remove(k, i)

    def _route_duration(self, route: list[int]) -> float:
        rows = self.inst.travel_rows
        svc = self.inst.service_times
        d = 0.0
        prev = 0
        for v in route:
            d += rows[prev][v] + svc[v]
            prev = v
        return d + rows[prev][0]

    # -- audit helpers (tests / debug mode) ---------------------------------

    def recomputed_route_durations(self) -> list[float]:
        return [self._route_duration(r) for r in self.routes]

    def recomputed_coverage_counts(self) -> list[int]:
        counts = [0] * self.inst.num_characteristics
        for route in self.routes:
            for v in route:
                for c in self.inst.chars_of(v):
                    counts[c] += 1
        return counts

    def check_consistent(self, eps: float = DURATION_EPS) -> None:
        """Raise AssertionError if any cache disagrees with a recompute or
        the routes/unassigned partition is broken."""
        visited = self.visited_sites()
        assert len(visited) == len(set(visited)), "duplicate visit"
        assert set(visited) | self.unassigned == set(range(1, self.inst.num_sites + 1)), "partition broken"
        assert not (set(visited) & self.unassigned), "site both visited and unassigned"
        for d, r in zip(self.route_durations, self.recomputed_route_durations()):
            assert abs(d - r) <= eps, f"duration cache drift {d} vs {r}"
        assert self.coverage_counts == self.recomputed_coverage_counts(), "coverage cache drift"

    def __repr__(self):
        return f"Solution(duration={self.duration:.6f}, routes={self.routes})"
