"""Bi-objective solver for the selective assessment routing problem: total
route duration against the leximin-ordered vector of characteristic
coverage ratios."""

from .archive import InsertOutcome, ParetoArchive, nondominated_union, read_archive, write_archive
from .engine import MdlsResult, SearchConfig, alns_step, initial_solution, mdls_run
from .evaluation import (
    DistanceReport,
    PublishedComparison,
    ReferenceSet,
    RunRecord,
    build_reference,
    compare_to_published,
    coverage_fractions,
    lexicographic_maxmin_better,
    load_run,
    maxmin_equivalence_histogram,
    within_alpha,
)
from .instance import (
    Instance,
    ParseError,
    Site,
    ValidationError,
    generate_instance,
    parse_instance,
    parse_instance_text,
    write_instance,
)
from .operators import OperatorBank, draw_q, update_weight
from .oracle import OracleLimitError, OracleLimits, VerifyReport, enumerate_pareto, verify_front
from .solution import (
    CoverageVector,
    FrontEntry,
    LeximinOrder,
    Solution,
    dominates,
    entry_from_decimals,
    leximin_compare,
)

__version__ = "0.1.0"

__all__ = [
    "CoverageVector",
    "DistanceReport",
    "FrontEntry",
    "Instance",
    "InsertOutcome",
    "LeximinOrder",
    "MdlsResult",
    "OperatorBank",
    "OracleLimitError",
    "OracleLimits",
    "ParetoArchive",
    "ParseError",
    "PublishedComparison",
    "ReferenceSet",
    "RunRecord",
    "SearchConfig",
    "Site",
    "Solution",
    "ValidationError",
    "VerifyReport",
    "alns_step",
    "build_reference",
    "compare_to_published",
    "coverage_fractions",
    "dominates",
    "draw_q",
    "entry_from_decimals",
    "enumerate_pareto",
    "generate_instance",
    "initial_solution",
    "leximin_compare",
    "lexicographic_maxmin_better",
    "load_run",
    "maxmin_equivalence_histogram",
    "mdls_run",
    "nondominated_union",
    "parse_instance",
    "parse_instance_text",
    "read_archive",
    "update_weight",
    "verify_front",
    "within_alpha",
    "write_archive",
    "write_instance",
]
