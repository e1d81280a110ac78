"""
Counting commands: exhaustive counts, the HK table and random sampling.
"""

import argparse
import logging

from ..core.config import settings
from ..core.exactnum import format_rational, parse_vector
from ..services.oracle import count_good, hk_table, sample_min_fraction
from .router import DIMENSION, JOBS, REPORT, SUMMARY, Argument, CommandRouter, emit_json, emit_line

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["counting"])


@router.command(
    "count",
    help="count sign vectors with |εa| ≤ ‖a‖ (or < with --strict)",
    arguments=(
        Argument("a", help='vector such as "1/3,1/3,1/3"; sorted by absolute value first'),
        Argument("--strict", action="store_true", help="count |εa| < ‖a‖"),
        Argument("--json", action="store_true", help="print the full count record"),
    ),
)
def count(args: argparse.Namespace) -> int:
    a = parse_vector(args.a)
    normalized = sorted((abs(x) for x in a), reverse=True)
    if list(a) != normalized:
        logger.info("count: using the sorted absolute values of %s", a)
    result = count_good(normalized)
    if args.json:
        emit_json(
            {
                "a": result.a.to_strings(),
                "count_lt": result.count_lt,
                "count_le": result.count_le,
                "total": result.total,
            },
            args,
        )
    else:
        good = result.count_lt if args.strict else result.count_le
        emit_line(f"{good}/{result.total}")
    return 0


@router.command(
    "hk-table",
    help="fractions of strictly good sign vectors at the library vectors, next to the claimed constants",
    arguments=(Argument("--csv", action="store_true", help="print CSV rows"), REPORT, SUMMARY),
)
def hk(args: argparse.Namespace) -> int:
    table = hk_table()
    if args.csv:
        emit_line("k,vector,computed,paper_value,match")
        for entry in table.entries:
            claimed = format_rational(entry.claimed) if entry.claimed is not None else ""
            match = "" if entry.match is None else str(entry.match).lower()
            emit_line(f"{entry.k},{entry.label},{format_rational(entry.fraction)},{claimed},{match}")
        for claim in table.claims:
            emit_line(f"{claim.k},,,{format_rational(claim.claimed)},")
        return 0
    emit_json(table.model_dump(mode="json"), args)
    if args.summary:
        for entry in table.entries:
            flag = {True: "agrees", False: "DISAGREES", None: "no claim"}[entry.match]
            emit_line(f"k={entry.k} {entry.label}: {format_rational(entry.fraction)} ({flag})")
    return 0


@router.command(
    "sample",
    help="minimum good fraction over random a in Q (seed required)",
    arguments=(
        DIMENSION,
        Argument("--samples", type=int, default=10000),
        Argument("--seed", type=int, required=True),
        Argument("--strict", action="store_true"),
        JOBS,
        REPORT,
        SUMMARY,
    ),
)
def sample(args: argparse.Namespace) -> int:
    result = sample_min_fraction(
        args.n or settings.dimension, args.samples, args.seed, strict=args.strict, jobs=settings.jobs
    )
    emit_json(result.model_dump(mode="json"), args)
    if args.summary:
        emit_line(
            f"n={result.n} samples={result.samples} seed={result.seed}: "
            f"min fraction {format_rational(result.min_fraction)} at {result.worst}"
        )
    return 0
