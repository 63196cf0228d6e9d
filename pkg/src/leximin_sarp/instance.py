"""Problem instances: sites, characteristics, travel times, and file I/O.

An instance is a depot, a set of assessment sites with binary characteristic
indicators, a team count, and a per-route duration cap.  Instances live in a
plain-text format, one per file:

    SARP <name> <num_sites> <num_characteristics> <num_teams> <t_max> <speed>
    DEPOT <x> <y>
    <id> <x> <y> <b1> ... <bm> [service_time]

Site ids must be exactly 1..num_sites.  Travel times are Euclidean distances
divided by the header's speed factor and rounded to 6 decimals; the speed
factor lets small duration caps (t_max of a few units) make sense on
coordinates spanning [0, 100].  The optional trailing column per site row is
a service time added to the route duration when the site is visited.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

LAYOUTS = ("random", "random_clustered")

_LAYOUT_ALIASES = {"r": "random", "rc": "random_clustered"}


class ParseError(ValueError):
    """Malformed instance text; carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(ValueError):
    """Structurally well-formed instance that violates a semantic rule."""


@dataclass(frozen=True)
class Site:
    """One assessment site with its binary characteristic indicators."""

    id: int
    x: float
    y: float
    characteristics: tuple[int, ...]
    service_time: float = 0.0


class Instance:
    """Immutable problem data plus derived lookup tables.

    ``travel_time`` is an (n+1) x (n+1) symmetric matrix where index 0 is the
    depot and index i is the site with id i.  ``characteristic_totals[c]``
    counts the sites carrying characteristic c; every characteristic must
    have at least one carrier and every site at least one characteristic.
    """

    def __init__(
        self,
        name: str,
        depot: tuple[float, float],
        sites: list[Site] | tuple[Site, ...],
        num_teams: int,
        t_max: float,
        speed: float = 1.0,
    ):
        if not name or any(ch.isspace() for ch in name):
            raise ValidationError(f"instance name must be non-empty without whitespace: {name!r}")
        if num_teams < 1:
            raise ValidationError(f"num_teams must be >= 1, got {num_teams}")
        if not t_max > 0:
            raise ValidationError(f"t_max must be positive, got {t_max}")
        if not speed > 0:
            raise ValidationError(f"speed must be positive, got {speed}")
        sites = tuple(sorted(sites, key=lambda s: s.id))
        if not sites:
            raise ValidationError("instance needs at least one site")
        if [s.id for s in sites] != list(range(1, len(sites) + 1)):
            raise ValidationError("site ids must be exactly 1..num_sites with no gaps or repeats")
        m = len(sites[0].characteristics)
        if m < 1:
            raise ValidationError("instance needs at least one characteristic")
        for s in sites:
            if len(s.characteristics) != m:
                raise ValidationError(f"site {s.id}: expected {m} characteristic flags")
            if any(b not in (0, 1) for b in s.characteristics):
                raise ValidationError(f"site {s.id}: characteristic flags must be 0 or 1")
            if not any(s.characteristics):
                raise ValidationError(f"site {s.id} carries no characteristic")
            if s.service_time < 0:
                raise ValidationError(f"site {s.id}: negative service time")
        totals = tuple(sum(s.characteristics[c] for s in sites) for c in range(m))
        for c, tot in enumerate(totals):
            if tot == 0:
                raise ValidationError(f"characteristic {c + 1} has no carrier site")

        self.name = name
        self.depot = (float(depot[0]), float(depot[1]))
        self.sites = sites
        self.num_sites = len(sites)
        self.num_characteristics = m
        self.num_teams = int(num_teams)
        self.t_max = float(t_max)
        self.speed = float(speed)
        self.characteristic_totals = totals
        points = [self.depot] + [(s.x, s.y) for s in sites]
        self.travel_time = _travel_matrix(points, self.speed)

        # Derived tables the solver leans on: plain-list rows index faster
        # than ndarray scalars, and the lcm scaling turns every coverage
        # ratio count/total into the exact integer count * (L / total).
        self.travel_rows: list[list[float]] = self.travel_time.tolist()
        self.service_times: list[float] = [0.0] + [float(s.service_time) for s in sites]
        self.site_chars: tuple[tuple[int, ...], ...] = tuple(
            tuple(c for c, bit in enumerate(s.characteristics) if bit) for s in sites
        )
        lcm = math.lcm(*totals)
        self.ratio_scales: tuple[int, ...] = tuple(lcm // tot for tot in totals)

    def chars_of(self, site_id: int) -> tuple[int, ...]:
        """Indices of the characteristics carried by the given site."""
        return self.site_chars[site_id - 1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.name == other.name
            and self.depot == other.depot
            and self.sites == other.sites
            and self.num_teams == other.num_teams
            and self.t_max == other.t_max
            and self.speed == other.speed
        )

    def __hash__(self):
        return hash((self.name, self.depot, self.sites, self.num_teams, self.t_max, self.speed))

    def __repr__(self):
        return (
            f"Instance({self.name!r}, sites={self.num_sites}, "
            f"chars={self.num_characteristics}, teams={self.num_teams}, t_max={self.t_max})"
        )


def _travel_matrix(points: list[tuple[float, float]], speed: float) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    mat = np.round(np.hypot(diff[..., 0], diff[..., 1]) / speed, 6)
    mat.flags.writeable = False
    return mat


def parse_instance(path: str | Path) -> Instance:
    """Read an instance file; raises ParseError / ValidationError."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_instance_text(text)


def parse_instance_text(text: str) -> Instance:
    lines = text.splitlines()
    rows = [(i + 1, ln.split()) for i, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise ParseError(1, "empty instance file")

    lineno, header = rows[0]
    if header[0] != "SARP" or len(header) != 7:
        raise ParseError(lineno, "header must be: SARP <name> <sites> <chars> <teams> <t_max> <speed>")
    name = header[1]
    try:
        num_sites, m, num_teams = int(header[2]), int(header[3]), int(header[4])
        t_max, speed = float(header[5]), float(header[6])
    except ValueError as exc:
        raise ParseError(lineno, f"bad header field: {exc}") from None

    if len(rows) < 2 or rows[1][1][0] != "DEPOT":
        raise ParseError(rows[1][0] if len(rows) > 1 else lineno, "expected DEPOT line after header")
    lineno, depot_row = rows[1]
    if len(depot_row) != 3:
        raise ParseError(lineno, "depot line must be: DEPOT <x> <y>")
    try:
        depot = (float(depot_row[1]), float(depot_row[2]))
    except ValueError as exc:
        raise ParseError(lineno, f"bad depot coordinate: {exc}") from None

    site_rows = rows[2:]
    if len(site_rows) != num_sites:
        raise ParseError(
            site_rows[-1][0] if site_rows else lineno,
            f"header declares {num_sites} sites but file has {len(site_rows)} site rows",
        )
    sites = []
    for expected, (lineno, row) in enumerate(site_rows, start=1):
        if len(row) not in (m + 3, m + 4):
            raise ParseError(lineno, f"site row needs {m + 3} or {m + 4} fields, got {len(row)}")
        try:
            sid = int(row[0])
            x, y = float(row[1]), float(row[2])
            bits = tuple(int(b) for b in row[3 : 3 + m])
            service = float(row[m + 3]) if len(row) == m + 4 else 0.0
        except ValueError as exc:
            raise ParseError(lineno, f"bad site field: {exc}") from None
        if sid != expected:
            raise ParseError(lineno, f"site ids must be 1..{num_sites} in order; got {sid}")
        if any(b not in (0, 1) for b in bits):
            raise ParseError(lineno, "characteristic flags must be 0 or 1")
        sites.append(Site(sid, x, y, bits, service))

    return Instance(name, depot, sites, num_teams, t_max, speed)


def write_instance(inst: Instance, path: str | Path) -> None:
    """Write an instance in the text format parse_instance reads back."""
    out = [
        f"SARP {inst.name} {inst.num_sites} {inst.num_characteristics} "
        f"{inst.num_teams} {inst.t_max!r} {inst.speed!r}",
        f"DEPOT {inst.depot[0]!r} {inst.depot[1]!r}",
    ]
    for s in inst.sites:
        bits = " ".join(str(b) for b in s.characteristics)
        row = f"{s.id} {s.x!r} {s.y!r} {bits}"
        if s.service_time:
            row += f" {s.service_time!r}"
        out.append(row)
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def generate_instance(
    num_sites: int,
    num_characteristics: int,
    num_teams: int,
    t_max: float,
    layout: str = "random",
    seed: int = 0,
    speed: float = 1.0,
    name: str | None = None,
) -> Instance:
    """Generate a synthetic instance; deterministic for a given seed.

    ``random`` scatters sites uniformly over [0, 100]^2; ``random_clustered``
    puts half the sites in Gaussian blobs around a few uniformly drawn
    cluster centers and scatters the rest.  The depot sits at (50, 50).
    Characteristic vectors are drawn uniformly over the nonzero binary
    vectors of the requested width, redrawing the whole matrix until every
    characteristic has at least one carrier.
    """
    layout = _LAYOUT_ALIASES.get(layout, layout)
    if layout not in LAYOUTS:
        raise ValueError(f"layout must be one of {LAYOUTS}, got {layout!r}")
    if num_sites < 1 or num_characteristics < 1:
        raise ValueError("need at least one site and one characteristic")

    rng = random.Random(seed)
    positions: list[tuple[float, float]] = []
    if layout == "random_clustered":
        num_clustered = num_sites // 2
        num_centers = max(2, num_sites // 12)
        centers = [(rng.uniform(10, 90), rng.uniform(10, 90)) for _ in range(num_centers)]
        for _ in range(num_clustered):
            cx, cy = centers[rng.randrange(num_centers)]
            x = min(100.0, max(0.0, rng.gauss(cx, 4.0)))
            y = min(100.0, max(0.0, rng.gauss(cy, 4.0)))
            positions.append((round(x, 2), round(y, 2)))
    for _ in range(num_sites - len(positions)):
        positions.append((round(rng.uniform(0, 100), 2), round(rng.uniform(0, 100), 2)))

    m = num_characteristics
    while True:
        vectors = [rng.randrange(1, 2**m) for _ in range(num_sites)]
        covered = 0
        for v in vectors:
            covered |= v
        if covered == 2**m - 1:
            break
    bit_rows = [tuple((v >> c) & 1 for c in range(m)) for v in vectors]

    if name is None:
        tag = "rc" if layout == "random_clustered" else "r"
        name = f"{tag}{num_sites}-m{m}-k{num_teams}-t{t_max:g}-s{seed}"
    sites = [
        Site(i + 1, positions[i][0], positions[i][1], bit_rows[i])
        for i in range(num_sites)
    ]
    return Instance(name, (50.0, 50.0), sites, num_teams, t_max, speed)
