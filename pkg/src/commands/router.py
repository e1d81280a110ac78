"""
Command routing for the CLI: routers collect decorated handlers and the
application includes them as argparse subcommands.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, List, NamedTuple, Optional, Tuple

from ..core.config import settings
from ..core.errors import InputError
from ..core.exactnum import RowVector, parse_vector
from ..models.schemas import CasePattern, TupleSpec

Handler = Callable[[argparse.Namespace], int]


class Argument:
    """Deferred argparse.add_argument call."""

    def __init__(self, *flags: str, **options: Any):
        self.flags = flags
        self.options = options


class Command(NamedTuple):
    name: str
    help: str
    arguments: Tuple[Argument, ...]
    handler: Handler


class CommandRouter:
    """Groups related commands under a tag."""

    def __init__(self, tags: Optional[List[str]] = None):
        self.tags = tags or []
        self.commands: List[Command] = []

    def command(self, name: str, help: str, arguments: Tuple[Argument, ...] = ()):
        def register(handler: Handler) -> Handler:
            self.commands.append(Command(name, help, tuple(arguments), handler))
            return handler

        return register


def include_router(subparsers, router: CommandRouter) -> None:
    for command in router.commands:
        parser = subparsers.add_parser(command.name, help=command.help, description=command.help)
        for argument in command.arguments:
            parser.add_argument(*argument.flags, **argument.options)
        parser.set_defaults(handler=command.handler)


# Shared argument definitions
JOBS = Argument("--jobs", type=int, default=None, help="worker processes (default 1)")
REPORT = Argument("--report", type=Path, default=None, help="also write the JSON result to this path")
SUMMARY = Argument("--summary", action="store_true", help="print a human-readable summary instead of JSON")
PAIRS = Argument("--pairs", required=True, help='conjugate pairs, e.g. "5,250;90,165"')
CASE = Argument("--case", required=True, help='case pattern, e.g. "2,3" ("*" for wildcards)')
SIGNS = Argument("--signs", default=None, help='signs per slot, e.g. --signs=-1,1 (default -1,+1,…)')
DIMENSION = Argument("--n", type=int, default=None, help="dimension (default 9)")


def parse_pairs(text: str, n: Optional[int] = None) -> TupleSpec:
    """Parse "i1,j1;i2,j2;…" into a TupleSpec."""
    pairs = []
    for chunk in text.split(";"):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise InputError(f"malformed pair {chunk!r}; expected i,j")
        pairs.append((int(parts[0]), int(parts[1])))
    return TupleSpec(n=n or settings.dimension, pairs=tuple(pairs))


def parse_case(args: argparse.Namespace) -> Tuple[TupleSpec, CasePattern]:
    tuple_spec = parse_pairs(args.pairs, getattr(args, "n", None))
    pattern = CasePattern.parse(args.case, args.signs)
    if pattern.k != tuple_spec.k:
        raise InputError(f"case {pattern} has {pattern.k} slots for {tuple_spec.k} pairs")
    return tuple_spec, pattern


def parse_row(text: str, n: Optional[int] = None) -> RowVector:
    return parse_vector(text, n or settings.dimension)


def emit_json(record: Any, args: argparse.Namespace) -> None:
    """Print a JSON record to stdout and optionally write it to --report."""
    text = json.dumps(record, indent=settings.report_indent, ensure_ascii=False)
    report = getattr(args, "report", None)
    if report is not None:
        Path(report).write_text(text + "\n", encoding="utf-8")
    if not getattr(args, "summary", False):
        sys.stdout.write(text + "\n")


def emit_line(text: str) -> None:
    sys.stdout.write(text + "\n")
