"""
Proof schemes: parsing, structure checks, case expansion, coverage and the
halving reduction of row schemes.

Text schemes use the parenthesized row format: each non-empty line is a row,
each top-level group a tuple. Inside a group the two bare numbers form the
outer pair, every nested group is a twin pair, and a '-' right after a
nested group marks a twin the case analysis does not need.
"""

import json
import logging
import re
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..core.config import settings
from ..core.errors import SchemeError
from ..models.schemas import (
    CaseCoverage,
    CasePattern,
    Certificate,
    Classification,
    CoverageResult,
    ProofScheme,
    ReductionStep,
    TupleSpec,
)
from .cone import in_Qstar
from .library import vector
from .signspace import positive_half, signvec

logger = logging.getLogger(__name__)

MAX_ARITY = 4

_TOKENS = re.compile(r"\(|\)|-|\d+|\S")


def _parse_group(tokens: List[str], start: int, n: int, where: str) -> Tuple[TupleSpec, int]:
    """Parse one top-level group starting after its '('; returns (tuple, next position)."""
    outer: List[int] = []
    inner: List[Tuple[int, int]] = []
    unneeded: List[int] = []
    position = start
    while position < len(tokens):
        token = tokens[position]
        if token == ")":
            break
        if token == "(":
            numbers = []
            position += 1
            while position < len(tokens) and tokens[position].isdigit():
                numbers.append(int(tokens[position]))
                position += 1
            if position >= len(tokens) or tokens[position] != ")" or len(numbers) != 2:
                raise SchemeError(f"{where}: a twin group needs exactly two numbers")
            inner.append((numbers[0], numbers[1]))
            if position + 1 < len(tokens) and tokens[position + 1] == "-":
                unneeded.append(len(inner))
                position += 1
        elif token.isdigit():
            outer.append(int(token))
        else:
            raise SchemeError(f"{where}: unexpected token {token!r}")
        position += 1
    else:
        raise SchemeError(f"{where}: unbalanced parentheses")

    if len(outer) != 2:
        raise SchemeError(f"{where}: a tuple needs exactly two bare numbers, got {outer}")
    pairs = ((outer[0], outer[1]),) + tuple(inner)
    label = "(" + ";".join(f"{i},{j}" for i, j in pairs) + ")"
    if len(pairs) > MAX_ARITY:
        raise SchemeError(f"{where}: tuple {label} has arity {len(pairs)} > {MAX_ARITY}")
    return TupleSpec(n=n, pairs=pairs, unneeded=tuple(unneeded)), position + 1


def parse_scheme_text(text: str, n: Optional[int] = None, name: str = "scheme") -> ProofScheme:
    """Parse the parenthesized row format into a ProofScheme."""
    n = n or settings.dimension
    rows: List[Tuple[TupleSpec, ...]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = _TOKENS.findall(line)
        row: List[TupleSpec] = []
        position = 0
        while position < len(tokens):
            if tokens[position] != "(":
                raise SchemeError(f"line {number}: expected '(' but found {tokens[position]!r}")
            spec, position = _parse_group(tokens, position + 1, n, f"line {number}")
            row.append(spec)
        rows.append(tuple(row))
    return build_scheme(rows, n=n, name=name)


def parse_scheme_json(data: Dict, name: Optional[str] = None) -> ProofScheme:
    """Parse {"n", "rows": [[{"pairs": …, "unneeded": …}, …], …]}; a flat "tuples" list is one row each."""
    n = int(data.get("n", settings.dimension))
    raw_rows = data.get("rows")
    if raw_rows is None:
        raw_rows = [[t] for t in data.get("tuples", [])]
    rows = []
    for raw_row in raw_rows:
        row = []
        for raw in raw_row:
            pairs = raw["pairs"] if isinstance(raw, dict) else raw
            unneeded = raw.get("unneeded", []) if isinstance(raw, dict) else []
            spec = TupleSpec(n=n, pairs=tuple(tuple(p) for p in pairs), unneeded=tuple(unneeded))
            if spec.k > MAX_ARITY:
                raise SchemeError(f"tuple {spec.label()} has arity {spec.k} > {MAX_ARITY}")
            row.append(spec)
        rows.append(tuple(row))
    return build_scheme(rows, n=n, name=name or data.get("name", "scheme"))


def parse_scheme(source: Union[str, Path], text: Optional[str] = None) -> ProofScheme:
    """Parse a scheme file: JSON by suffix or content, else the row format."""
    path = Path(source)
    if text is None:
        text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemeError(f"{path.name}: invalid JSON ({e.msg} at line {e.lineno})")
        return parse_scheme_json(data, name=data.get("name", path.stem))
    return parse_scheme_text(text, name=path.stem)


def structure_failures(rows: Sequence[Sequence[TupleSpec]], n: int) -> List[str]:
    """Partition failures: indices appearing twice or dimension mismatches."""
    failures = []
    owner: Dict[int, str] = {}
    for row in rows:
        for spec in row:
            if spec.n != n:
                failures.append(f"tuple {spec.label()} has n={spec.n}, scheme has n={n}")
            for index in spec.indices:
                if index in owner:
                    failures.append(f"duplicate {index} in {owner[index]} and {spec.label()}")
                else:
                    owner[index] = spec.label()
    return failures


def build_scheme(rows: Sequence[Sequence[TupleSpec]], n: int, name: str = "scheme") -> ProofScheme:
    """Assemble a scheme, raising on the first structural failure."""
    failures = structure_failures(rows, n)
    if failures:
        raise SchemeError(failures[0])
    scheme = ProofScheme(name=name, n=n, rows=tuple(tuple(row) for row in rows))
    logger.debug(
        "scheme %s: %d tuples, %d implied twins", name, len(scheme.tuples), len(scheme.implied_twins)
    )
    return scheme


def check_structure(scheme: ProofScheme) -> List[str]:
    return structure_failures(scheme.rows, scheme.n)


def expand_cases(t: TupleSpec, signs: Optional[Sequence[int]] = None) -> List[CasePattern]:
    """All 2^k concrete case patterns of a tuple, in lexicographic order."""
    choices = [(2 * l - 1, 2 * l) for l in range(1, t.k + 1)]
    resolved = tuple(signs) if signs is not None else None
    return [CasePattern(slots=slots, signs=resolved) for slots in product(*choices)]


def check_coverage(
    t: TupleSpec, certificates: Sequence[Tuple[str, Certificate]], signs: Optional[Sequence[int]] = None
) -> CoverageResult:
    """Match every concrete case of t against the certificates' patterns.

    Args:
        t: The tuple
        certificates: (id, certificate) pairs; only those for t are considered
        signs: Sign convention of the cases, standard when None

    Returns:
        CoverageResult with the first covering certificate per case
    """
    relevant = [(cid, c) for cid, c in certificates if c.tuple_spec.pairs == t.pairs]
    cases = []
    for case in expand_cases(t, signs):
        match = next((cid for cid, c in relevant if c.pattern.covers(case)), None)
        cases.append(
            CaseCoverage(pattern=str(case), certificate_id=match, verdict="PASS" if match else "UNCOVERED")
        )
    return CoverageResult(tuple_spec=t, cases=cases)


def _leading_index(row: Sequence[TupleSpec]) -> int:
    return row[0].pairs[0][0]


def reduce_even_rows(scheme: ProofScheme) -> ProofScheme:
    """Keep rows with an odd leading index and halve every index: a scheme for n - 1.

    Raises:
        SchemeError: If the halved rows do not form a valid scheme
    """
    if scheme.n < 2:
        raise SchemeError("cannot reduce a scheme below n = 1")
    n = scheme.n - 1
    rows = []
    for row in scheme.rows:
        if _leading_index(row) % 2 == 0:
            continue
        rows.append(
            tuple(
                TupleSpec(
                    n=n,
                    pairs=tuple((i // 2, j // 2) for i, j in spec.pairs),
                    unneeded=spec.unneeded,
                )
                for spec in row
            )
        )
    if not rows:
        raise SchemeError(f"scheme {scheme.name} has no row with an odd leading index")
    return build_scheme(rows, n=n, name=f"{scheme.name}/n={n}")


def reduction_chain(scheme: ProofScheme, levels: int) -> List[ReductionStep]:
    """Apply reduce_even_rows repeatedly, recording each level's verdict."""
    steps = [ReductionStep(n=scheme.n, tuples=len(scheme.tuples), valid=not check_structure(scheme))]
    current = scheme
    for _ in range(levels):
        try:
            current = reduce_even_rows(current)
        except SchemeError as e:
            steps.append(ReductionStep(n=current.n - 1, tuples=0, valid=False, failures=[e.detail]))
            break
        failures = check_structure(current)
        steps.append(
            ReductionStep(n=current.n, tuples=len(current.tuples), valid=not failures, failures=failures)
        )
    return steps


def special_twins(classification: Classification) -> List[int]:
    """Legs ε_j with R1 - ε_j ∈ Q* and (R2 + ε_j ∈ Q* or R3 + ε_j ∈ Q*).

    Such a leg satisfies |ε_j a| ≤ ‖a‖ for every a ∈ Q, so its pair is a twin.

    Raises:
        SchemeError: If a special leg belongs to a pair classified non-twin
    """
    n = classification.n
    R1, R2, R3 = vector("R1"), vector("R2"), vector("R3")
    if n != len(R1):
        raise SchemeError(f"special twins are defined for n={len(R1)}, not n={n}")
    found = []
    for j in positive_half(n):
        leg = signvec(n, j).as_row()
        if in_Qstar(R1 - leg) and (in_Qstar(R2 + leg) or in_Qstar(R3 + leg)):
            found.append(j)
    for j in found:
        if not classification.is_twin((j, (1 << (n - 1)) - 1 - j)):
            raise SchemeError(f"special leg {j} lies in a pair classified non-twin")
    return found


def q_star_legs(classification: Classification) -> Dict[Tuple[int, int], List[int]]:
    """For every non-twin pair, the legs ε with ε ∈ Q*."""
    n = classification.n
    return {
        pair: [index for index in pair if in_Qstar(signvec(n, index).coords)]
        for pair in classification.non_twin_pairs
    }
