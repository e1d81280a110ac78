"""
Pydantic models for every record the library reads, produces or reports.
Exact values travel as Fraction / RowVector and serialize as "p/q" strings.
"""

from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, model_validator

from ..core.errors import InputError, SchemeError
from ..core.exactnum import RowVector, format_rational, parse_rational, parse_vector


def _to_vector(value: Any) -> RowVector:
    if isinstance(value, RowVector):
        return value
    return parse_vector(value)


ExactRational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]

ExactVector = Annotated[
    RowVector,
    PlainValidator(_to_vector),
    PlainSerializer(lambda v: v.to_strings(), return_type=list),
]


class ExactModel(BaseModel):
    """Base for all records: immutable, exact-typed."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True, populate_by_name=True)


class LegStatus(str, Enum):
    CERT = "CERT"
    REFUTE = "REFUTE"


class Outcome(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"


# ---------------------------------------------------------------------------
# Tuples, cases and certificates
# ---------------------------------------------------------------------------


def conjugate_of(index: int, n: int) -> int:
    return (1 << (n - 1)) - 1 - index


class TupleSpec(ExactModel):
    """An ordered list of conjugate pairs (i_ℓ, j_ℓ) of S⁺ indices."""

    n: int = Field(default=9, ge=1, description="Dimension of the sign space")
    pairs: Tuple[Tuple[int, int], ...] = Field(..., description="Conjugate pairs, outer pair first")
    unneeded: Tuple[int, ...] = Field(
        default=(), description="0-based positions of twins the case analysis does not need"
    )

    @model_validator(mode="after")
    def _check_pairs(self) -> "TupleSpec":
        if not self.pairs:
            raise SchemeError("a tuple needs at least one pair")
        half = 1 << (self.n - 1)
        seen = set()
        for i, j in self.pairs:
            for index in (i, j):
                if not 0 <= index < half:
                    raise SchemeError(f"index {index} out of range for n={self.n} in {self.label()}")
                if index in seen:
                    raise SchemeError(f"duplicate {index} in {self.label()}")
                seen.add(index)
            if i + j != half - 1:
                raise SchemeError(f"pair ({i}, {j}) is not conjugate in {self.label()}")
        for position in self.unneeded:
            if not 1 <= position < len(self.pairs):
                raise SchemeError(f"unneeded marker on position {position} of {self.label()}")
        return self

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def indices(self) -> List[int]:
        return [index for pair in self.pairs for index in pair]

    def position(self, slot: int) -> int:
        """Index at 1-based position s ∈ {1, …, 2k} of the flattened tuple."""
        return self.pairs[(slot - 1) // 2][(slot - 1) % 2]

    def label(self) -> str:
        return "(" + ";".join(f"{i},{j}" for i, j in self.pairs) + ")"

    def to_record(self) -> List[List[int]]:
        return [list(pair) for pair in self.pairs]


class CasePattern(ExactModel):
    """One slot per pair: a position in {2ℓ-1, 2ℓ} or None for a wildcard."""

    slots: Tuple[Optional[int], ...] = Field(..., description="Chosen positions, None for '*'")
    signs: Optional[Tuple[int, ...]] = Field(
        default=None, description="σ per slot; defaults to (-1, +1, ..., +1)"
    )

    @model_validator(mode="after")
    def _check_slots(self) -> "CasePattern":
        if not self.slots:
            raise InputError("a case pattern needs at least one slot")
        for number, slot in enumerate(self.slots, start=1):
            if slot is not None and slot not in (2 * number - 1, 2 * number):
                raise InputError(
                    f"slot {number} of {self} must be {2 * number - 1}, {2 * number} or '*'"
                )
        if self.signs is not None:
            if len(self.signs) != len(self.slots):
                raise InputError(f"{len(self.signs)} signs for {len(self.slots)} slots")
            if any(s not in (-1, 1) for s in self.signs):
                raise InputError(f"signs must be ±1, got {self.signs}")
        return self

    @classmethod
    def parse(cls, tokens, signs=None) -> "CasePattern":
        """Build a pattern from tokens such as ["2", "*", "*", "7"] or "2,*,*,7"."""
        if isinstance(tokens, str):
            tokens = [t for t in tokens.strip().strip("[]").split(",")]
        slots = []
        for token in tokens:
            text = str(token).strip()
            if text == "*":
                slots.append(None)
            elif text.isdigit():
                slots.append(int(text))
            else:
                raise InputError(f"malformed case token {token!r}")
        if isinstance(signs, str):
            signs = parse_signs(signs)
        return cls(slots=tuple(slots), signs=tuple(signs) if signs is not None else None)

    @property
    def k(self) -> int:
        return len(self.slots)

    @property
    def is_concrete(self) -> bool:
        return all(slot is not None for slot in self.slots)

    @property
    def has_standard_signs(self) -> bool:
        return self.signs is None or tuple(self.signs) == standard_signs(self.k)

    def resolved_signs(self) -> Tuple[int, ...]:
        return tuple(self.signs) if self.signs is not None else standard_signs(self.k)

    def covers(self, concrete: "CasePattern") -> bool:
        """True when this pattern (wildcards allowed) matches a concrete case."""
        if concrete.k != self.k or self.resolved_signs() != concrete.resolved_signs():
            return False
        return all(mine is None or mine == theirs for mine, theirs in zip(self.slots, concrete.slots))

    def tokens(self) -> List[str]:
        return ["*" if slot is None else str(slot) for slot in self.slots]

    def __str__(self) -> str:
        return "[" + ",".join(self.tokens()) + "]"


def standard_signs(k: int) -> Tuple[int, ...]:
    return (-1,) + (1,) * (k - 1)


def parse_signs(text: str) -> Tuple[int, ...]:
    """Parse "-1,1,1" into a sign tuple."""
    signs = []
    for token in text.strip().strip("[]").split(","):
        try:
            signs.append(int(token.strip()))
        except ValueError:
            raise InputError(f"malformed sign token {token!r}; expected -1 or 1") from None
    return tuple(signs)


class Certificate(ExactModel):
    """A certificate (R, λ) covering one case pattern of a tuple."""

    tuple_spec: TupleSpec = Field(..., alias="tuple")
    pattern: CasePattern = Field(..., alias="case")
    R: ExactVector
    lam: Tuple[ExactRational, ...] = Field(..., alias="lambda")
    label: Optional[str] = Field(None, description="Name of the certificate vector, e.g. R3")

    @model_validator(mode="before")
    @classmethod
    def _from_record(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        vector = data.get("R")
        n = len(_to_vector(vector)) if vector is not None else 9
        raw_tuple = data.get("tuple", data.get("tuple_spec"))
        if isinstance(raw_tuple, (list, tuple)):
            data["tuple"] = {"n": n, "pairs": [tuple(p) for p in raw_tuple]}
            data.pop("tuple_spec", None)
        raw_case = data.get("case", data.get("pattern"))
        if isinstance(raw_case, (list, tuple, str)):
            data["case"] = CasePattern.parse(raw_case, data.pop("signs", None))
            data.pop("pattern", None)
        return data

    @model_validator(mode="after")
    def _check_shape(self) -> "Certificate":
        if self.pattern.k != self.tuple_spec.k:
            raise InputError(f"case {self.pattern} does not fit tuple {self.tuple_spec.label()}")
        if len(self.lam) != self.tuple_spec.k:
            raise InputError(f"{len(self.lam)} multipliers for a tuple of {self.tuple_spec.k} pairs")
        if len(self.R) != self.tuple_spec.n:
            raise InputError(f"R has length {len(self.R)}, expected n={self.tuple_spec.n}")
        return self

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "tuple": self.tuple_spec.to_record(),
            "case": self.pattern.tokens(),
            "R": self.R.to_strings(),
            "lambda": [format_rational(x) for x in self.lam],
        }
        if not self.pattern.has_standard_signs:
            record["signs"] = list(self.pattern.resolved_signs())
        if self.label:
            record["label"] = self.label
        return record


class Witness(ExactModel):
    """Refutation of the sufficient condition at one leg."""

    leg: int = Field(..., ge=0)
    R: ExactVector

    def to_record(self) -> Dict[str, Any]:
        return {"leg": self.leg, "R": self.R.to_strings()}


class DualWitness(ExactModel):
    """Dual variables: u = -QR', v, w with complementary slackness."""

    u: Tuple[ExactRational, ...]
    v: Tuple[ExactRational, ...]
    w: ExactRational


class Verdict(ExactModel):
    """Accept, or reject naming the first violated clause."""

    accepted: bool
    clause: Optional[str] = None
    detail: str = ""

    @classmethod
    def accept(cls) -> "Verdict":
        return cls(accepted=True)

    @classmethod
    def reject(cls, clause: str, detail: str = "") -> "Verdict":
        return cls(accepted=False, clause=clause, detail=detail)


# ---------------------------------------------------------------------------
# Solver results
# ---------------------------------------------------------------------------


class LPResult(ExactModel):
    tuple_spec: TupleSpec
    pattern: CasePattern
    R: ExactVector
    lam: Tuple[ExactRational, ...]
    margin: ExactRational = Field(..., description="min_j cum(R - L)_j at the optimal λ")

    @property
    def feasible(self) -> bool:
        return self.margin >= 0

    def to_record(self) -> Dict[str, Any]:
        return {
            "tuple": self.tuple_spec.to_record(),
            "case": self.pattern.tokens(),
            "R": self.R.to_strings(),
            "lambda": [format_rational(x) for x in self.lam],
            "margin": format_rational(self.margin),
            "feasible": self.feasible,
        }


class QPResult(ExactModel):
    """Exact minimum-norm solution of one case, validated by its dual."""

    tuple_spec: TupleSpec
    pattern: CasePattern
    R: ExactVector
    lam: Tuple[ExactRational, ...]
    value: ExactRational = Field(..., description="RR' at the optimum")
    dual: DualWitness

    @property
    def status(self) -> LegStatus:
        return LegStatus.CERT if self.value <= 1 else LegStatus.REFUTE

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "tuple": self.tuple_spec.to_record(),
            "case": self.pattern.tokens(),
            "R": self.R.to_strings(),
            "lambda": [format_rational(x) for x in self.lam],
        }
        if not self.pattern.has_standard_signs:
            record["signs"] = list(self.pattern.resolved_signs())
        record["value"] = format_rational(self.value)
        record["status"] = self.status.value
        record["dual"] = self.dual.model_dump()
        return record


class TwinLegDecision(ExactModel):
    leg: int
    status: LegStatus
    value: ExactRational
    R: ExactVector
    certificate: Optional[Certificate] = None
    witness: Optional[Witness] = None

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "leg": self.leg,
            "status": self.status.value,
            "value": format_rational(self.value),
        }
        if self.certificate is not None:
            record["certificate"] = self.certificate.to_record()
        if self.witness is not None:
            record["witness"] = self.witness.to_record()
        return record


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------


class CountResult(ExactModel):
    a: ExactVector
    count_lt: int
    count_le: int
    total: int

    @property
    def fraction_lt(self) -> Fraction:
        return Fraction(self.count_lt, self.total)

    @property
    def fraction_le(self) -> Fraction:
        return Fraction(self.count_le, self.total)


class CkEntry(ExactModel):
    """One row of the HK table: the fraction at a named vector."""

    k: int
    label: str
    a: ExactVector
    fraction: ExactRational
    claimed: Optional[ExactRational] = None
    match: Optional[bool] = None


class HkClaim(ExactModel):
    """A constant claimed without an attaining vector; reported, not evaluated."""

    k: int
    claimed: ExactRational
    note: str = ""


class HkTable(ExactModel):
    entries: List[CkEntry]
    claims: List[HkClaim]


class SampleResult(ExactModel):
    n: int
    samples: int
    seed: int
    strict: bool
    min_fraction: ExactRational
    worst: ExactVector


class SpotCheck(ExactModel):
    """Sampled soundness check of one certificate."""

    tested: int
    skipped: int
    violations: List[ExactVector] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# Schemes, classification and reports
# ---------------------------------------------------------------------------


class ProofScheme(ExactModel):
    """Rows of tuples; indices not mentioned are implied twins."""

    name: str = "scheme"
    n: int = 9
    rows: Tuple[Tuple[TupleSpec, ...], ...]

    @property
    def tuples(self) -> List[TupleSpec]:
        return [t for row in self.rows for t in row]

    @property
    def implied_twins(self) -> List[Tuple[int, int]]:
        mentioned = {index for t in self.tuples for index in t.indices}
        half = 1 << (self.n - 1)
        return [
            (i, half - 1 - i)
            for i in range(half // 2)
            if i not in mentioned and half - 1 - i not in mentioned
        ]


class CaseCoverage(ExactModel):
    pattern: str
    certificate_id: Optional[str] = None
    verdict: str


class CoverageResult(ExactModel):
    tuple_spec: TupleSpec
    cases: List[CaseCoverage]

    @property
    def covered(self) -> bool:
        return all(case.certificate_id is not None for case in self.cases)

    @property
    def uncovered(self) -> List[str]:
        return [case.pattern for case in self.cases if case.certificate_id is None]


class NonTwinPair(ExactModel):
    pair: Tuple[int, int]
    witnesses: List[Witness]


class Classification(ExactModel):
    n: int
    twins: List[Tuple[int, int]]
    non_twins: List[NonTwinPair]
    decisions: List[TwinLegDecision] = Field(default_factory=list)

    def is_twin(self, pair: Tuple[int, int]) -> bool:
        return tuple(sorted(pair)) in set(self.twins)

    @property
    def non_twin_pairs(self) -> List[Tuple[int, int]]:
        return [entry.pair for entry in self.non_twins]

    def to_record(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "twins": [list(p) for p in self.twins],
            "non_twins": [list(p) for p in self.non_twin_pairs],
            "non_twin_j": sorted(max(p) for p in self.non_twin_pairs),
        }


class Failure(ExactModel):
    clause: str
    subject: str
    detail: str = ""


class TupleReport(ExactModel):
    pairs: List[Tuple[int, int]]
    cases: List[CaseCoverage]


class VerificationReport(ExactModel):
    verdict: Outcome
    n: int
    scheme: str
    tuples: List[TupleReport]
    implied_twins: List[Tuple[int, int]]
    classification: Dict[str, Any]
    certificates_checked: int
    certificates_accepted: int
    failures: List[Failure]
    timing: Optional[Dict[str, float]] = None

    def to_record(self) -> Dict[str, Any]:
        record = self.model_dump(mode="json", exclude_none=True)
        return record


class CaseSearch(ExactModel):
    pattern: str
    status: LegStatus
    value: ExactRational
    certificate: Optional[Certificate] = None
    verdict: Optional[Verdict] = None


class TupleSearch(ExactModel):
    """Solver run over all concrete cases of one tuple."""

    tuple_spec: TupleSpec
    signs: Tuple[int, ...]
    cases: List[CaseSearch]

    @property
    def certified(self) -> bool:
        return all(
            case.status == LegStatus.CERT and case.verdict is not None and case.verdict.accepted
            for case in self.cases
        )

    def to_record(self) -> Dict[str, Any]:
        return {
            "tuple": self.tuple_spec.to_record(),
            "signs": list(self.signs),
            "certified": self.certified,
            "cases": [
                {
                    "case": case.pattern,
                    "status": case.status.value,
                    "value": format_rational(case.value),
                    "certificate": case.certificate.to_record() if case.certificate else None,
                }
                for case in self.cases
            ],
        }


class ReductionStep(ExactModel):
    n: int
    tuples: int
    valid: bool
    failures: List[str] = Field(default_factory=list)
