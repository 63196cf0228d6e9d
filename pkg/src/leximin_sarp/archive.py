"""Archive of mutually non-dominated solutions, plus its file format.

Entries are kept sorted by (duration rounded to 1e-9, sorted ratios), the
same tuple that defines entry identity, so dominance checks scan a prefix
and duplicate detection is a bisect.  Archive files are JSON lines, one
object per entry:

    {"duration": ..., "ratios": [[covered, total], ...],
     "sorted_ratios": [[num, den], ...], "sorted_ratios_decimal": [...],
     "routes": [[site, ...], ...]}
"""

from __future__ import annotations

import bisect
import enum
import json
import random
from pathlib import Path
from typing import Iterable

from .solution import DURATION_EPS, FrontEntry, Solution, _dominates_nums, dominates


class InsertOutcome(enum.Enum):
    INSERTED = "inserted"
    DOMINATED = "dominated"
    DUPLICATE = "duplicate"


class ParetoArchive:
    """Set of mutually non-dominated entries with uniform random selection."""

    def __init__(self, entries: Iterable = (), rng: random.Random | None = None, eps: float = DURATION_EPS):
        self.rng = rng if rng is not None else random.Random()
        self.eps = eps
        self.entries: list[FrontEntry] = []
        self._keys: list[tuple] = []
        for x in entries:
            self.try_insert(x)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def try_insert(self, x: Solution | FrontEntry) -> InsertOutcome:
        """Insert unless an existing entry has the same key or dominates x;
        on insertion, evict every entry the newcomer dominates.  A Solution
        is only materialized into a FrontEntry when it actually enters."""
        if isinstance(x, Solution):
            duration = x.duration
            scaled = x.sorted_scaled()
            dens = tuple(x.inst.characteristic_totals)
            fractions = None  # built only if a neighbor needs exact ratios
            entry = None
        else:
            duration = x.duration
            scaled = x.sorted_scaled
            dens = x.ratio_denominators
            fractions = x.sorted_ratios
            entry = x
        key = (round(duration, 9), scaled)
        keys = self._keys
        eps = self.eps
        i = bisect.bisect_left(keys, key)
        if i < len(keys) and keys[i] == key:
            return InsertOutcome.DUPLICATE

        def exact_ratios():
            # Scaled ints are comparable only on a shared denominator vector;
            # mixed-source archives fall back to exact fractions.
            nonlocal fractions, entry
            if fractions is None:
                entry = x.to_entry()
                fractions = entry.sorted_ratios
            return fractions

        # A dominator needs duration <= ours + eps; entries are duration-sorted.
        dur = key[0]
        for e in self.entries:
            if e.key[0] > dur + 2 * eps:
                break
            if e.ratio_denominators == dens:
                hit = _dominates_nums(e.duration, e.sorted_scaled, duration, scaled, eps)
            else:
                hit = _dominates_nums(e.duration, e.sorted_ratios, duration, exact_ratios(), eps)
            if hit:
                return InsertOutcome.DOMINATED

        if entry is None:
            entry = x.to_entry()
        # Anything we dominate has duration >= ours - eps: a suffix.
        start = bisect.bisect_left(keys, (dur - 2 * eps,))
        kept = self.entries[:start]
        for e in self.entries[start:]:
            if e.ratio_denominators == dens:
                gone = _dominates_nums(duration, scaled, e.duration, e.sorted_scaled, eps)
            else:
                gone = _dominates_nums(duration, exact_ratios(), e.duration, e.sorted_ratios, eps)
            if not gone:
                kept.append(e)
        kept_keys = [e.key for e in kept]
        j = bisect.bisect_left(kept_keys, key)
        kept.insert(j, entry)
        kept_keys.insert(j, key)
        self.entries = kept
        self._keys = kept_keys
        return InsertOutcome.INSERTED

    def select_uniform(self) -> FrontEntry:
        if not self.entries:
            raise ValueError("cannot select from an empty archive")
        return self.entries[int(self.rng.random() * len(self.entries))]

    def best_duration(self) -> float:
        return self.entries[0].duration

    def best_leximin(self) -> tuple:
        return max(e.sorted_ratios for e in self.entries)

    def audit_nondominated(self) -> None:
        """Independent O(n^2) check that no entry dominates another and no
        two entries share a key; raises AssertionError on violation."""
        n = len(self.entries)
        assert len(set(self._keys)) == n, "duplicate keys in archive"
        for a in range(n):
            for b in range(n):
                if a != b:
                    assert not dominates(self.entries[a], self.entries[b], self.eps), (
                        f"archive entry {a} dominates entry {b}"
                    )


def nondominated_union(archive: ParetoArchive, others: Iterable) -> ParetoArchive:
    """Fold try_insert over others; the surviving set is independent of the
    order the solutions arrive in."""
    for x in others:
        archive.try_insert(x)
    return archive


# -- serialization -----------------------------------------------------------


def entry_to_obj(entry: FrontEntry) -> dict:
    return {
        "duration": entry.duration,
        "ratios": [[num, den] for num, den in entry.ratios],
        "sorted_ratios": [[f.numerator, f.denominator] for f in entry.sorted_ratios],
        "sorted_ratios_decimal": [round(float(f), 6) for f in entry.sorted_ratios],
        "routes": [list(r) for r in entry.routes],
    }


def entry_from_obj(obj: dict) -> FrontEntry:
    try:
        duration = float(obj["duration"])
        ratios = tuple((int(num), int(den)) for num, den in obj["ratios"])
        routes = tuple(tuple(int(v) for v in r) for r in obj.get("routes", ()))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed archive record: {exc}") from None
    return FrontEntry(duration, ratios, routes)


def write_archive(path: str | Path, entries: Iterable[FrontEntry]) -> None:
    entries = sorted(entries, key=lambda e: e.key)
    with open(path, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(json.dumps(entry_to_obj(e)) + "\n")


def read_archive(path: str | Path) -> list[FrontEntry]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(entry_from_obj(json.loads(line)))
            except (json.JSONDecodeError, ValueError) as exc:
                raise ValueError(f"{path}, line {lineno}: {exc}") from None
    return out
