"""
End-to-end verification of a proof scheme, and solver-driven tuple searches.

verify_all passes exactly when the scheme partitions S⁺, every pair after the
first in a tuple and every implied twin is a classified twin, every case of
every tuple is covered by an accepted certificate, and every certificate and
witness checks out.
"""

import logging
import time
from typing import Dict, List, Optional, Sequence, Tuple

from ..core.config import settings
from ..models.schemas import (
    CaseSearch,
    Certificate,
    Classification,
    Failure,
    LegStatus,
    Outcome,
    ProofScheme,
    TupleReport,
    TupleSearch,
    TupleSpec,
    Verdict,
    VerificationReport,
    Witness,
)
from .batch import run_batch
from .certify import check_lemma2, check_witness
from .scheme import check_coverage, check_structure, expand_cases
from .solver import certificate_from_result, qp_min_norm

logger = logging.getLogger(__name__)


def _check_certificate(cert: Certificate) -> Verdict:
    return check_lemma2(cert)


def check_certificates(
    certificates: Sequence[Tuple[str, Certificate]], jobs: int = 1
) -> List[Tuple[str, Certificate, Verdict]]:
    verdicts = run_batch(_check_certificate, [(cert,) for _, cert in certificates], jobs)
    return [(cid, cert, verdict) for (cid, cert), verdict in zip(certificates, verdicts)]


def _classification_failures(classification: Classification) -> List[Failure]:
    """Re-check the certificates and witnesses the classification rests on."""
    failures = []
    for decision in classification.decisions:
        if decision.status == LegStatus.CERT:
            verdict = check_lemma2(decision.certificate)
        else:
            verdict = check_witness(decision.witness)
        if not verdict.accepted:
            failures.append(
                Failure(
                    clause="classification-evidence",
                    subject=f"leg {decision.leg}",
                    detail=f"{verdict.clause}: {verdict.detail}",
                )
            )
    return failures


def verify_all(
    scheme: ProofScheme,
    certificates: Sequence[Tuple[str, Certificate]],
    classification: Classification,
    witnesses: Sequence[Tuple[str, Witness]] = (),
    jobs: int = 1,
    include_timing: bool = False,
) -> VerificationReport:
    """Verify a scheme against certificates and a twin classification.

    Args:
        scheme: The proof scheme
        certificates: (id, certificate) pairs
        classification: Twin classification of the scheme's dimension
        witnesses: Optional (id, witness) pairs for refuted legs
        jobs: Worker processes for certificate checks
        include_timing: Add wall-clock timings to the report

    Returns:
        VerificationReport listing every failure
    """
    started = time.perf_counter()
    failures: List[Failure] = []

    # (a) partition
    for detail in check_structure(scheme):
        failures.append(Failure(clause="partition", subject=scheme.name, detail=detail))
    if classification.n != scheme.n:
        failures.append(
            Failure(
                clause="classification",
                subject=scheme.name,
                detail=f"classification is for n={classification.n}, scheme for n={scheme.n}",
            )
        )

    # (b) inner pairs and (c) implied twins are classified twins
    for t in scheme.tuples:
        for pair in t.pairs[1:]:
            if not classification.is_twin(pair):
                failures.append(
                    Failure(clause="classification", subject=t.label(), detail=f"pair {pair} is not a twin")
                )
    implied = scheme.implied_twins
    for pair in implied:
        if not classification.is_twin(pair):
            failures.append(Failure(clause="implied-twin", subject=str(pair), detail="not a classified twin"))
    failures.extend(_classification_failures(classification))

    classified_at = time.perf_counter()

    # (e) certificates
    checked = check_certificates(certificates, jobs)
    accepted = [(cid, cert) for cid, cert, verdict in checked if verdict.accepted]
    for cid, cert, verdict in checked:
        if not verdict.accepted:
            logger.warning("certificate %s rejected: %s %s", cid, verdict.clause, verdict.detail)
            failures.append(
                Failure(clause=f"certificate:{verdict.clause}", subject=cid, detail=verdict.detail)
            )

    for wid, witness in witnesses:
        verdict = check_witness(witness)
        if not verdict.accepted:
            failures.append(Failure(clause=f"witness:{verdict.clause}", subject=wid, detail=verdict.detail))
        elif not any(witness.leg in entry.pair for entry in classification.non_twins):
            failures.append(Failure(clause="witness", subject=wid, detail=f"leg {witness.leg} is in a twin pair"))

    certified_at = time.perf_counter()

    # (d) coverage
    tuple_reports = []
    for t in scheme.tuples:
        coverage = check_coverage(t, accepted)
        tuple_reports.append(TupleReport(pairs=list(t.pairs), cases=coverage.cases))
        if not coverage.covered:
            failures.append(
                Failure(
                    clause="coverage",
                    subject=t.label(),
                    detail="uncovered cases " + " ".join(coverage.uncovered),
                )
            )

    for failure in failures:
        logger.warning("verification failure [%s] %s: %s", failure.clause, failure.subject, failure.detail)

    timing: Optional[Dict[str, float]] = None
    if include_timing:
        finished = time.perf_counter()
        timing = {
            "structure_seconds": round(classified_at - started, 3),
            "certificates_seconds": round(certified_at - classified_at, 3),
            "coverage_seconds": round(finished - certified_at, 3),
        }

    return VerificationReport(
        verdict=Outcome.FAIL if failures else Outcome.PASS,
        n=scheme.n,
        scheme=scheme.name,
        tuples=tuple_reports,
        implied_twins=implied,
        classification=classification.to_record(),
        certificates_checked=len(checked),
        certificates_accepted=len(accepted),
        failures=failures,
        timing=timing,
    )


def search_tuple(t: TupleSpec, signs: Optional[Sequence[int]] = None) -> TupleSearch:
    """Solve every concrete case of t and certify each case with RR' ≤ 1."""
    cases = []
    for case in expand_cases(t, signs):
        result = qp_min_norm(t, case)
        certificate, verdict = None, None
        if result.status == LegStatus.CERT:
            certificate = certificate_from_result(result)
            verdict = check_lemma2(certificate)
        cases.append(
            CaseSearch(
                pattern=str(case),
                status=result.status,
                value=result.value,
                certificate=certificate,
                verdict=verdict,
            )
        )
    resolved = tuple(signs) if signs is not None else expand_cases(t)[0].resolved_signs()
    search = TupleSearch(tuple_spec=t, signs=resolved, cases=cases)
    logger.info("search %s signs %s: certified=%s", t.label(), resolved, search.certified)
    return search


def rederive_scheme(scheme: ProofScheme, jobs: Optional[int] = None) -> List[TupleSearch]:
    """Search every tuple of a scheme with the standard sign convention."""
    return run_batch(search_tuple, [(t,) for t in scheme.tuples], jobs or settings.jobs)
