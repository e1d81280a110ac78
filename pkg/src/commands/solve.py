"""
Solver and lattice commands.
"""

import argparse

from ..core.config import settings
from ..services.cone import join_signs, meet_signs
from ..services.signspace import signvec
from ..services.solver import lp_max_margin, qp_min_norm
from .router import CASE, DIMENSION, PAIRS, SIGNS, Argument, CommandRouter, emit_json, emit_line, parse_case, parse_row

router = CommandRouter(tags=["solve"])


@router.command(
    "solve-qp",
    help="exact minimum-norm R and λ for one concrete case, with its dual witness",
    arguments=(PAIRS, CASE, SIGNS, DIMENSION),
)
def solve_qp(args: argparse.Namespace) -> int:
    tuple_spec, pattern = parse_case(args)
    result = qp_min_norm(tuple_spec, pattern)
    emit_json(result.to_record(), args)
    return 0


@router.command(
    "solve-lambda",
    help="for a fixed R, the λ maximizing the smallest slack of R - L",
    arguments=(PAIRS, CASE, SIGNS, Argument("--R", dest="R", required=True, help="R as p/q entries"), DIMENSION),
)
def solve_lambda(args: argparse.Namespace) -> int:
    tuple_spec, pattern = parse_case(args)
    R = parse_row(args.R, tuple_spec.n)
    result = lp_max_margin(R, tuple_spec, pattern)
    emit_json(result.to_record(), args)
    return 0


@router.command(
    "lattice",
    help="join or meet of two sign vectors in the cumulative order",
    arguments=(
        Argument("operation", choices=["join", "meet"]),
        Argument("i", type=int),
        Argument("j", type=int),
        DIMENSION,
    ),
)
def lattice(args: argparse.Namespace) -> int:
    n = args.n or settings.dimension
    x, y = signvec(n, args.i), signvec(n, args.j)
    result = join_signs(x, y) if args.operation == "join" else meet_signs(x, y)
    emit_json(
        {
            "operation": args.operation,
            "operands": [x.index, y.index],
            "result": result.index,
            "coords": list(result.coords),
        },
        args,
    )
    emit_line(str(result))
    return 0
