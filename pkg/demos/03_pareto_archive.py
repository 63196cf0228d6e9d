"""
The Pareto archive: what survives, in any order
===============================================

The archive keeps mutually non-dominated (duration, coverage) entries.
Insertion reports what happened, the surviving set never depends on
arrival order, and archives serialize to JSON lines.
"""

import itertools
import random
import tempfile
from pathlib import Path

from leximin_sarp import (
    InsertOutcome,
    ParetoArchive,
    entry_from_decimals,
    nondominated_union,
    read_archive,
    write_archive,
)

# Six candidate solutions over four characteristics: two of them are
# dominated (worse or equal in both objectives than some other).
candidates = {
    "s1": entry_from_decimals(7.82, (0.20, 0.30, 0.33, 0.44)),
    "s2": entry_from_decimals(7.90, (0.20, 0.25, 0.33, 0.44)),
    "s3": entry_from_decimals(8.18, (0.30, 0.30, 0.33, 0.44)),
    "s4": entry_from_decimals(8.49, (0.50, 0.50, 0.50, 0.56)),
    "s5": entry_from_decimals(8.56, (0.50, 0.50, 0.56, 0.56)),
    "s6": entry_from_decimals(8.73, (0.50, 0.50, 0.54, 0.57)),
}

archive = ParetoArchive()
for name, entry in candidates.items():
    outcome = archive.try_insert(entry)
    print(f"insert {name}: {outcome.name}")
print("survivors:", len(archive))

# Order independence: every one of the 720 arrival orders leaves the same set.
expected = {e.key for e in archive}
for perm in itertools.permutations(candidates):
    trial = nondominated_union(ParetoArchive(), (candidates[n] for n in perm))
    assert {e.key for e in trial} == expected
print("same survivor set under all 720 insertion orders")

# Duplicates (same duration and same multiset of ratios) are refused.
twin = entry_from_decimals(8.56, (0.56, 0.50, 0.56, 0.50))
print("permuted twin of s5:", archive.try_insert(twin).name)

# Uniform selection is how the search picks its next starting point.
archive = ParetoArchive(candidates.values(), rng=random.Random(0))
draws = {}
for _ in range(4000):
    k = archive.select_uniform().key
    draws[k] = draws.get(k, 0) + 1
print("draw frequencies:", sorted(round(c / 4000, 3) for c in draws.values()))

# Round-trip through the line-per-entry file format.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "archive.jsonl"
    write_archive(path, archive.entries)
    again = read_archive(path)
    print("serialized and restored:", [round(e.duration, 2) for e in again])
