"""
Proof commands: scheme verification, twin classification and solver searches.
"""

import argparse
import logging

from ..core.config import settings
from ..core.errors import InputError
from ..models.schemas import LegStatus, Outcome, TupleSpec, parse_signs
from ..services.classifier import classify_pairs
from ..services.ingestion_service import ingestion_service
from ..services.library import SEMI_EIGHT_SIGNS, SEMI_EIGHT_TUPLES
from ..services.scheme import q_star_legs, reduction_chain, special_twins
from ..services.solver import decide_leg
from ..services.verifier import rederive_scheme, search_tuple, verify_all
from .router import (
    DIMENSION,
    JOBS,
    REPORT,
    SIGNS,
    SUMMARY,
    Argument,
    CommandRouter,
    emit_json,
    emit_line,
    parse_pairs,
)

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["proof"])

SCHEME = Argument("--scheme", default=None, help="scheme file (JSON or row format); shipped main scheme by default")


@router.command(
    "verify",
    help="verify a proof scheme end to end (exit 0 on PASS, 1 on FAIL)",
    arguments=(
        SCHEME,
        Argument("--certs", action="append", default=None, help="certificate file; repeatable"),
        Argument("--witnesses", default=None, help="leg witness file; shipped witnesses by default"),
        Argument("--no-witnesses", action="store_true", help="skip witness checks"),
        Argument("--timing", action="store_true", help="include wall-clock timing in the report"),
        JOBS,
        REPORT,
        SUMMARY,
    ),
)
def verify(args: argparse.Namespace) -> int:
    scheme = ingestion_service.load_scheme(args.scheme)
    certificates = ingestion_service.load_certificates(args.certs)
    witnesses = [] if args.no_witnesses else ingestion_service.load_witnesses(args.witnesses)
    classification = classify_pairs(scheme.n, jobs=settings.jobs)

    report = verify_all(
        scheme,
        certificates,
        classification,
        witnesses=witnesses,
        jobs=settings.jobs,
        include_timing=args.timing,
    )
    emit_json(report.to_record(), args)
    if args.summary:
        covered = sum(1 for t in report.tuples for case in t.cases if case.certificate_id)
        total = sum(len(t.cases) for t in report.tuples)
        emit_line(f"scheme {report.scheme} (n={report.n}): {report.verdict.value}")
        emit_line(f"  tuples: {len(report.tuples)}, implied twins: {len(report.implied_twins)}")
        emit_line(f"  cases covered: {covered}/{total}")
        emit_line(f"  certificates accepted: {report.certificates_accepted}/{report.certificates_checked}")
        for failure in report.failures:
            emit_line(f"  FAIL [{failure.clause}] {failure.subject}: {failure.detail}")
    return 0 if report.verdict == Outcome.PASS else 1


@router.command(
    "classify",
    help="classify every conjugate pair as twin or non-twin",
    arguments=(DIMENSION, JOBS, REPORT, SUMMARY),
)
def classify(args: argparse.Namespace) -> int:
    classification = classify_pairs(args.n or settings.dimension, jobs=settings.jobs)
    record = classification.to_record()
    record["witnesses"] = [
        w.to_record() for entry in classification.non_twins for w in entry.witnesses
    ]
    emit_json(record, args)
    if args.summary:
        emit_line(
            f"n={classification.n}: {len(classification.twins)} twins, "
            f"{len(classification.non_twins)} non-twin pairs"
        )
        emit_line("non-twin j: " + " ".join(str(j) for j in record["non_twin_j"]))
    return 0


@router.command(
    "twin",
    help="decide the k = 1 condition at one leg",
    arguments=(Argument("leg", type=int, help="S⁺ index of the leg"), DIMENSION),
)
def twin(args: argparse.Namespace) -> int:
    decision = decide_leg(args.leg, args.n or settings.dimension)
    emit_json(decision.to_record(), args)
    verdict = "certified leg" if decision.status == LegStatus.CERT else "non-twin leg"
    emit_line(f"leg {decision.leg}: {verdict} (RR'={decision.to_record()['value']})")
    return 0


@router.command(
    "special-twins",
    help="list the legs that are good for every a in Q, and the Q*-legs of non-twin pairs",
    arguments=(REPORT, SUMMARY),
)
def special(args: argparse.Namespace) -> int:
    classification = classify_pairs(settings.dimension, jobs=settings.jobs)
    legs = special_twins(classification)
    q_star = q_star_legs(classification)
    emit_json(
        {
            "special_twins": legs,
            "q_star_legs": [{"pair": list(pair), "legs": found} for pair, found in q_star.items()],
        },
        args,
    )
    if args.summary:
        emit_line(f"{len(legs)} special twin legs: " + " ".join(map(str, legs)))
        single = all(len(found) == 1 for found in q_star.values())
        emit_line(f"every non-twin pair has exactly one Q*-leg: {single}")
    return 0


@router.command(
    "reduce-scheme",
    help="halve a row scheme repeatedly, checking each reduced scheme",
    arguments=(
        Argument("--scheme", default=None, help="row scheme file; shipped reducible scheme by default"),
        Argument("--levels", type=int, default=4, help="number of reductions (default 4)"),
        REPORT,
        SUMMARY,
    ),
)
def reduce_scheme(args: argparse.Namespace) -> int:
    path = args.scheme or settings.data_path(settings.row_scheme_file)
    scheme = ingestion_service.load_scheme(path)
    steps = reduction_chain(scheme, args.levels)
    emit_json([step.model_dump() for step in steps], args)
    if args.summary:
        for step in steps:
            status = "valid" if step.valid else "INVALID " + "; ".join(step.failures)
            emit_line(f"n={step.n}: {step.tuples} tuples, {status}")
    return 0 if all(step.valid for step in steps) else 1


@router.command(
    "search",
    help="solve every case of a tuple (or the semi-8-tuples) and certify what the solver finds",
    arguments=(
        Argument("--pairs", default=None, help='conjugate pairs, e.g. "7,248;20,235;33,222;77,178"'),
        SIGNS,
        Argument("--semi", action="store_true", help="run the semi-8-tuples under both sign conventions"),
        REPORT,
        SUMMARY,
    ),
)
def search(args: argparse.Namespace) -> int:
    runs = []
    if args.semi:
        for pairs in SEMI_EIGHT_TUPLES:
            t = TupleSpec(n=settings.dimension, pairs=pairs)
            runs.append(search_tuple(t))
            runs.append(search_tuple(t, SEMI_EIGHT_SIGNS))
    elif args.pairs:
        t = parse_pairs(args.pairs)
        signs = parse_signs(args.signs) if args.signs else None
        runs.append(search_tuple(t, signs))
    else:
        raise InputError("search needs --pairs or --semi")

    emit_json([run.to_record() for run in runs], args)
    if args.summary:
        for run in runs:
            worst = max(case.value for case in run.cases)
            emit_line(
                f"{run.tuple_spec.label()} signs {list(run.signs)}: "
                f"certified={run.certified}, largest minimum RR'={worst}"
            )
    return 0


@router.command(
    "rederive",
    help="re-derive certificates for every tuple of a scheme from the solver alone",
    arguments=(SCHEME, JOBS, REPORT, SUMMARY),
)
def rederive(args: argparse.Namespace) -> int:
    scheme = ingestion_service.load_scheme(args.scheme)
    runs = rederive_scheme(scheme, settings.jobs)
    emit_json([run.to_record() for run in runs], args)
    certified = sum(1 for run in runs if run.certified)
    if args.summary:
        emit_line(f"{certified}/{len(runs)} tuples certified by the solver")
        for run in runs:
            if not run.certified:
                emit_line(f"  not certified: {run.tuple_spec.label()}")
    return 0 if certified == len(runs) else 1
