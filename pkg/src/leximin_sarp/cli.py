"""Command line front end.

Subcommands: generate, solve, oracle, oracle-verify, evaluate.  Exit codes:
0 success, 1 I/O or data errors (including a failed oracle-verify), 2 usage
errors, 3 enumeration limits exceeded.  Set SARP_DEBUG_AUDIT=1 to audit the
archive and solution caches after every operator application during solve.
"""

from __future__ import annotations

import argparse
import datetime
import glob
import hashlib
import json
import sys
from pathlib import Path

from .archive import read_archive, write_archive
from .engine import SearchConfig, mdls_run
from .evaluation import (
    build_reference,
    compare_to_published,
    coverage_fractions,
    load_run,
    maxmin_equivalence_histogram,
    write_coverage_csv,
    write_histogram_csv,
    write_published_csv,
)
from .instance import LAYOUTS, ParseError, ValidationError, generate_instance, parse_instance, write_instance
from .oracle import OracleLimitError, OracleLimits, enumerate_pareto, verify_front


def _parse_alphas(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha list: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sarp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic instance file")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--chars", type=int, required=True)
    p.add_argument("--teams", type=int, required=True)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--layout", choices=("r", "rc") + LAYOUTS, default="r")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--speed", type=float, default=1.0)
    p.add_argument("--name", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="run the bi-objective search on an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--config", choices=("all", "leximin", "max-min"), default="all")
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--segment-length", type=int, default=100)
    p.add_argument("--out", required=True, help="output directory for archive/manifest/log")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact Pareto front by enumeration (tiny instances)")
    p.add_argument("--instance", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-sites", type=int, default=OracleLimits.max_sites)
    p.add_argument("--max-teams", type=int, default=OracleLimits.max_teams)
    p.add_argument("--node-budget", type=int, default=OracleLimits.node_budget)
    p.add_argument(
        "--maximal-only",
        action="store_true",
        help="front over insertion-maximal solutions only (the space a "
        "saturating repair search can reach); use when verifying solver archives",
    )
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("oracle-verify", help="compare a candidate front against an exact one")
    p.add_argument("--candidate", required=True)
    p.add_argument("--exact", required=True)
    p.set_defaults(func=cmd_oracle_verify)

    p = sub.add_parser("evaluate", help="build a reference front and coverage tables from runs")
    p.add_argument("--runs", required=True, help="glob matching run archives or run directories")
    p.add_argument("--reference-out", required=True)
    p.add_argument("--alphas", type=_parse_alphas, default=[0.0, 1.0, 2.0, 3.0])
    p.add_argument("--csv", required=True, help="directory for the CSV tables")
    p.add_argument("--published", type=float, default=None)
    p.set_defaults(func=cmd_evaluate)

    return parser


def cmd_generate(args) -> int:
    inst = generate_instance(
        args.sites, args.chars, args.teams, args.tmax,
        layout=args.layout, seed=args.seed, speed=args.speed, name=args.name,
    )
    write_instance(inst, args.out)
    print(f"wrote {inst.name}: {inst.num_sites} sites, {inst.num_characteristics} characteristics -> {args.out}")
    return 0


def cmd_solve(args) -> int:
    if args.time_limit is None and args.iterations is None:
        raise UsageError("solve needs --time-limit and/or --iterations")
    inst = parse_instance(args.instance)
    cfg = SearchConfig(
        time_limit=args.time_limit,
        iterations=args.iterations,
        configuration=args.config,
        seed=args.seed,
        segment_length=args.segment_length,
    )
    started = datetime.datetime.now(datetime.timezone.utc)
    result = mdls_run(inst, cfg)
    finished = datetime.datetime.now(datetime.timezone.utc)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_archive(out / "archive.jsonl", result.archive.entries)
    with open(out / "run_log.jsonl", "w", encoding="utf-8") as fh:
        for record in result.segments:
            fh.write(json.dumps(record) + "\n")
    manifest = {
        "instance": str(args.instance),
        "instance_name": inst.name,
        "instance_sha256": hashlib.sha256(Path(args.instance).read_bytes()).hexdigest(),
        "configuration": cfg.configuration,
        "time_limit": cfg.time_limit,
        "iterations": cfg.iterations,
        "seed": cfg.seed,
        "p_worst": cfg.p_worst,
        "p_related": cfg.p_related,
        "reaction": cfg.reaction,
        "segment_length": cfg.segment_length,
        "q_fraction": cfg.q_fraction,
        "started_at": started.isoformat(),
        "finished_at": finished.isoformat(),
        "iterations_run": result.iterations,
        "wall_time": result.wall_time,
        "archive": "archive.jsonl",
        "archive_size": len(result.archive),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    best = result.archive.best_duration()
    print(
        f"{inst.name}: {result.iterations} iterations, archive {len(result.archive)} entries, "
        f"best duration {best:.6f} -> {out}"
    )
    return 0


def cmd_oracle(args) -> int:
    inst = parse_instance(args.instance)
    limits = OracleLimits(args.max_sites, args.max_teams, args.node_budget)
    front = enumerate_pareto(inst, limits, maximal_only=args.maximal_only)
    space = "insertion-maximal" if args.maximal_only else "full"
    write_archive(args.out, front)
    print(f"{inst.name}: exact front ({space} space) has {len(front)} entries -> {args.out}")
    return 0


def cmd_oracle_verify(args) -> int:
    candidate = read_archive(args.candidate)
    exact = read_archive(args.exact)
    report = verify_front(candidate, exact)
    print(
        f"matched {report.matched}/{len(exact)} exact entries, "
        f"missing {report.missing}, extra dominated {report.extra_dominated}"
    )
    return 0 if report.clean else 1


def cmd_evaluate(args) -> int:
    paths = sorted(glob.glob(args.runs, recursive=True))
    if not paths:
        print(f"no runs match {args.runs!r}", file=sys.stderr)
        return 1
    runs = [load_run(p) for p in paths]
    reference = build_reference(runs)
    write_archive(args.reference_out, reference.entries)

    csv_dir = Path(args.csv)
    csv_dir.mkdir(parents=True, exist_ok=True)
    instance = reference.instance_name or "unknown"
    rows = []
    for run in runs:
        report = coverage_fractions(run.entries, reference.entries, args.alphas)
        for alpha, fraction in report.as_dict().items():
            rows.append({
                "instance": instance,
                "config": run.configuration or "",
                "time_limit": run.time_limit if run.time_limit is not None else "",
                "run": run.run_id,
                "alpha": alpha,
                "fraction": round(fraction, 6),
            })
    write_coverage_csv(csv_dir / "coverage_fractions.csv", rows)
    hist = maxmin_equivalence_histogram(reference.entries)
    write_histogram_csv(csv_dir / "maxmin_hist.csv", instance, hist)
    cmp = compare_to_published(reference.entries, args.published)
    write_published_csv(csv_dir / "published_cmp.csv", instance, args.published, cmp)
    print(
        f"{instance}: reference {len(reference.entries)} entries from {len(runs)} runs "
        f"-> {args.reference_out}, tables in {csv_dir}"
    )
    return 0


class UsageError(Exception):
    pass


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OracleLimitError as exc:
        print(f"limit exceeded ({exc.dimension}): {exc}", file=sys.stderr)
        return 3
    except (ParseError, ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
