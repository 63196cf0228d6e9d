"""Multi-directional local search: one ALNS pass per objective per iteration.

Each iteration picks an archive entry uniformly at random and, for the
duration objective and then the leximin objective, applies one destroy and
one repair drawn from that objective's adaptive rosters.  There is no
acceptance test: every result is offered to the archive and survives only
if non-dominated.  Operator weights adapt at fixed-length segment ends.
"""

from __future__ import annotations

import os
import random
import time
import weakref
from dataclasses import dataclass, field

from .archive import InsertOutcome, ParetoArchive
from .instance import Instance
from .operators import (
    DESTROY,
    DESTROY_OPS,
    DURATION_OBJECTIVE,
    LEXIMIN_OBJECTIVE,
    REPAIR,
    REPAIR_OPS,
    DestroyContext,
    OperatorBank,
    draw_q,
    normalize_configuration,
    repair_cheapest,
)
from .solution import Solution


@dataclass
class SearchConfig:
    """Search parameters; at least one stopping rule must be set.

    time_limit is wall-clock seconds; iterations is the fixed-count mode
    used for deterministic runs.  When both are set the run stops at
    whichever hits first.
    """

    time_limit: float | None = None
    iterations: int | None = None
    configuration: str = "all"
    seed: int = 0
    p_worst: int = 3
    p_related: int = 5
    reaction: float = 0.1
    segment_length: int = 100
    q_fraction: float = 0.30
    collect_trace: bool = False

    def __post_init__(self):
        self.configuration = normalize_configuration(self.configuration)
        if self.time_limit is None and self.iterations is None:
            raise ValueError("set time_limit and/or iterations")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError("time_limit must be positive")
        if self.iterations is not None and self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not 0 <= self.reaction <= 1:
            raise ValueError("reaction must be in [0, 1]")
        if self.segment_length < 1:
            raise ValueError("segment_length must be >= 1")


@dataclass
class MdlsResult:
    archive: ParetoArchive
    iterations: int
    wall_time: float
    segments: list[dict] = field(default_factory=list)
    trace: list[tuple] | None = None


def initial_solution(inst: Instance, rng: random.Random) -> Solution:
    """Cheapest-insertion construction from the empty solution."""
    return repair_cheapest(Solution(inst), rng)


# Repairs that never draw from the random source are pure functions of the
# post-destroy routes, so their results can be replayed from a cache without
# disturbing the random stream.
_PURE_REPAIRS = frozenset({"cheapest_ins", "regret2_ins", "regret3_ins", "maxmin_dur_ins", "leximin_ins"})


def alns_step(
    objective: str,
    x: Solution,
    bank: OperatorBank,
    cfg: SearchConfig,
    rng: random.Random,
    repair_cache: dict | None = None,
) -> Solution:
    """One destroy + one repair on a copy of x; the archive judges the result."""
    sol = x.clone()
    destroy = bank.select_operator(objective, DESTROY, rng)
    repair = bank.select_operator(objective, REPAIR, rng)
    q = draw_q(sol.visited_count(), rng, cfg.q_fraction)
    DESTROY_OPS[destroy](sol, DestroyContext(q, cfg.p_worst, cfg.p_related, rng))
    if repair_cache is not None and repair in _PURE_REPAIRS:
        key = (tuple(map(tuple, sol.routes)), repair)
        hit = repair_cache.get(key)
        if hit is not None:
            return hit.clone()
        REPAIR_OPS[repair](sol, rng)
        if len(repair_cache) >= 200_000:
            repair_cache.clear()
        repair_cache[key] = sol.clone()
        return sol
    REPAIR_OPS[repair](sol, rng)
    return sol


def _segment_record(iteration: int, segment: int, archive: ParetoArchive, bank: OperatorBank) -> dict:
    head = [round(float(f), 6) for f in archive.best_leximin()[:4]]
    return {
        "iteration": iteration,
        "segment": segment,
        "archive_size": len(archive),
        "best_duration": archive.best_duration(),
        "best_leximin_head": head,
        "weights": bank.weights(),
    }


def mdls_run(inst: Instance, cfg: SearchConfig) -> MdlsResult:
    rng = random.Random(cfg.seed)
    archive = ParetoArchive(rng=random.Random(rng.getrandbits(64)))
    bank = OperatorBank.for_configuration(cfg.configuration, cfg.reaction)
    audit = os.environ.get("SARP_DEBUG_AUDIT") == "1"

    start = time.monotonic()
    archive.try_insert(initial_solution(inst, rng))

    iterations = 0
    segments: list[dict] = []
    trace: list[tuple] | None = [] if cfg.collect_trace else None
    # Entries are immutable, so the Solution built from one is reusable for
    # as long as the entry stays archived (alns_step works on clones).
    base_cache: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()
    repair_cache: dict = {}
    while True:
        if cfg.iterations is not None and iterations >= cfg.iterations:
            break
        if cfg.time_limit is not None and time.monotonic() - start >= cfg.time_limit:
            break
        iterations += 1
        picked = archive.select_uniform()
        base = base_cache.get(picked)
        if base is None:
            base = Solution.from_entry(inst, picked)
            base_cache[picked] = base
        for objective in (DURATION_OBJECTIVE, LEXIMIN_OBJECTIVE):
            candidate = alns_step(objective, base, bank, cfg, rng, repair_cache)
            if candidate.routes == base.routes:
                # Destroy+repair reconstructed the starting point, which is
                # already archived; identical routes mean an identical key.
                outcome = InsertOutcome.DUPLICATE
            else:
                outcome = archive.try_insert(candidate)
            if outcome is InsertOutcome.INSERTED:
                bank.reward_last(objective)
            if audit:
                candidate.check_consistent()
                archive.audit_nondominated()
        if trace is not None:
            trace.append((archive.best_duration(), archive.best_leximin()))
        if iterations % cfg.segment_length == 0:
            bank.end_segment()
            segments.append(_segment_record(iterations, len(segments) + 1, archive, bank))

    if iterations % cfg.segment_length != 0:
        segments.append(_segment_record(iterations, len(segments) + 1, archive, bank))
    return MdlsResult(archive, iterations, time.monotonic() - start, segments, trace)
