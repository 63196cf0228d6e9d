"""Cross-run evaluation: reference fronts, alpha-distance coverage, and the
max-min-equivalence summaries used to compare against published best values.

The reference set for an instance is the non-dominated union of every run's
archive.  A reference point t counts as found at level alpha when some
assessed entry dominates (or key-equals) t relaxed by alpha percent: target
duration scaled by 1 + alpha/100 and every coverage ratio by 1 - alpha/100,
both exactly (ratios stay rational).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .archive import ParetoArchive, nondominated_union, read_archive
from .solution import FrontEntry, dominates

KEY_DURATION_TOL = 1e-6


@dataclass(frozen=True)
class _Point:
    duration: float
    sorted_ratios: tuple[Fraction, ...]


def _key_equal(a, b, tol: float = KEY_DURATION_TOL) -> bool:
    return abs(a.duration - b.duration) <= tol and a.sorted_ratios == b.sorted_ratios


def within_alpha(candidate: FrontEntry, target, alpha: float) -> bool:
    """True when candidate dominates (or key-equals) the alpha-relaxed target."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    factor = Fraction(str(alpha)) / 100
    relaxed = _Point(
        target.duration * (1 + float(factor)),
        tuple(r * (1 - factor) for r in target.sorted_ratios),
    )
    return dominates(candidate, relaxed) or _key_equal(candidate, relaxed)


@dataclass
class DistanceReport:
    """Fraction of reference entries found, per alpha level."""

    alphas: tuple[float, ...]
    fractions: tuple[float, ...]

    def as_dict(self) -> dict[float, float]:
        return dict(zip(self.alphas, self.fractions))


def coverage_fractions(assessed: Iterable[FrontEntry], reference: Sequence[FrontEntry], alphas: Sequence[float]) -> DistanceReport:
    assessed = list(assessed)
    reference = list(reference)
    if not reference:
        raise ValueError("reference set is empty")
    fractions = []
    for alpha in alphas:
        found = sum(1 for t in reference if any(within_alpha(c, t, alpha) for c in assessed))
        fractions.append(found / len(reference))
    return DistanceReport(tuple(float(a) for a in alphas), tuple(fractions))


def maxmin_equivalence_histogram(entries: Iterable[FrontEntry]) -> dict[Fraction, int]:
    """Count archive entries per exact minimum coverage ratio: entries in
    one bin are max-min-equivalent yet leximin-distinct."""
    hist: dict[Fraction, int] = {}
    for e in entries:
        hist[e.min_ratio] = hist.get(e.min_ratio, 0) + 1
    return dict(sorted(hist.items()))


def lexicographic_maxmin_better(a: FrontEntry, b: FrontEntry, eps: float = 1e-9) -> bool:
    """Order used by single-objective (max-min, duration) solvers: better
    minimum ratio wins; equal minima fall back to lower duration."""
    if a.min_ratio != b.min_ratio:
        return a.min_ratio > b.min_ratio
    return a.duration < b.duration - eps


@dataclass
class PublishedComparison:
    best_found: float
    equal: int | None = None
    higher: int | None = None


def compare_to_published(entries: Iterable[FrontEntry], published: float | None, tol: float = 5e-4) -> PublishedComparison:
    """Count entries whose min ratio equals (within tol) or exceeds the
    published best max-min value; None published reports best_found only."""
    mins = [float(e.min_ratio) for e in entries]
    if not mins:
        raise ValueError("no entries to compare")
    best = max(mins)
    if published is None:
        return PublishedComparison(best_found=best)
    equal = sum(1 for v in mins if abs(v - published) <= tol)
    higher = sum(1 for v in mins if v > published + tol)
    return PublishedComparison(best_found=best, equal=equal, higher=higher)


# -- run files ----------------------------------------------------------------


@dataclass
class RunRecord:
    """One solver run: its archive plus the manifest written alongside it."""

    path: str
    entries: list[FrontEntry]
    instance_name: str | None = None
    instance_sha256: str | None = None
    configuration: str | None = None
    time_limit: float | None = None
    iterations: int | None = None
    seed: int | None = None

    @property
    def run_id(self) -> str:
        if self.seed is not None:
            return f"seed{self.seed}"
        return Path(self.path).stem


def load_run(archive_path: str | Path) -> RunRecord:
    """Read an archive file and, when present, its sibling manifest.json."""
    archive_path = Path(archive_path)
    if archive_path.is_dir():
        archive_path = archive_path / "archive.jsonl"
    record = RunRecord(str(archive_path), read_archive(archive_path))
    manifest_path = archive_path.parent / "manifest.json"
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        record.instance_name = manifest.get("instance_name")
        record.instance_sha256 = manifest.get("instance_sha256")
        record.configuration = manifest.get("configuration")
        record.time_limit = manifest.get("time_limit")
        record.iterations = manifest.get("iterations")
        record.seed = manifest.get("seed")
    return record


@dataclass
class ReferenceSet:
    instance_name: str | None
    entries: list[FrontEntry]
    provenance: tuple[str, ...]


def build_reference(runs: Sequence[RunRecord]) -> ReferenceSet:
    """Non-dominated union over runs; refuses mixed-instance inputs."""
    if not runs:
        raise ValueError("no runs supplied")
    idents = {(r.instance_name, r.instance_sha256) for r in runs if r.instance_name or r.instance_sha256}
    if len(idents) > 1:
        raise ValueError(f"runs span multiple instances: {sorted(idents)}")
    archive = ParetoArchive()
    for run in runs:
        nondominated_union(archive, run.entries)
    name = next(iter(idents))[0] if idents else None
    return ReferenceSet(name, list(archive.entries), tuple(r.path for r in runs))


# -- tabular output -------------------------------------------------------------


def write_coverage_csv(path: str | Path, rows: Iterable[dict]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["instance", "config", "time_limit", "run", "alpha", "fraction"])
        writer.writeheader()
        writer.writerows(rows)


def write_histogram_csv(path: str | Path, instance: str, hist: dict[Fraction, int]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance", "min_ratio", "min_ratio_decimal", "count"])
        for ratio, count in hist.items():
            writer.writerow([instance, f"{ratio.numerator}/{ratio.denominator}", round(float(ratio), 6), count])


def write_published_csv(path: str | Path, instance: str, published: float | None, cmp: PublishedComparison) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance", "published", "equal", "higher", "best_found"])
        writer.writerow([
            instance,
            "" if published is None else published,
            "" if cmp.equal is None else cmp.equal,
            "" if cmp.higher is None else cmp.higher,
            round(cmp.best_found, 6),
        ])
