"""
Main command-line application with logging setup and command routing.
"""

import argparse
import logging
import re
import sys
from typing import List, Optional

from pydantic import ValidationError

from .commands import counting, proof, solve
from .commands.router import include_router
from .core.config import apply_overrides, settings
from .core.errors import SignBoundError

logger = logging.getLogger(__name__)

# A vector or sign list whose first entry is negative, e.g. "-1/3,1/3"
NEGATIVE_LEADING = re.compile(r"^-\d[\d/,-]*$")


def create_app() -> argparse.ArgumentParser:
    """Build the argument parser with every command router included."""
    app = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Exact certificates for the bound |εa| ≤ ‖a‖ on at least half of all sign vectors (n ≤ 9)",
    )
    app.add_argument("--version", action="version", version=f"%(prog)s {settings.version}")
    app.add_argument("--debug", action="store_true", default=None, help="debug logging and tracebacks")
    app.add_argument("--log-level", default=None, help="log level for stderr (default WARNING)")

    subparsers = app.add_subparsers(dest="command", metavar="command")
    subparsers.required = True

    # Include command routers
    include_router(subparsers, proof.router)
    include_router(subparsers, solve.router)
    include_router(subparsers, counting.router)
    return app


def configure_logging() -> None:
    level = logging.DEBUG if settings.debug else getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def protect_negative_values(argv: List[str]) -> List[str]:
    """Mark negative-leading values as positional.

    argparse reads "-1/3,1/3" as an unknown option; any token containing a
    space is taken as a value, and the parsers strip surrounding whitespace.
    """
    return [f"{token} " if NEGATIVE_LEADING.match(token) else token for token in argv]


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, dispatch to the command handler and map errors to exit codes."""
    app = create_app()
    args = app.parse_args(protect_negative_values(sys.argv[1:] if argv is None else argv))

    try:
        apply_overrides(debug=args.debug, log_level=args.log_level, jobs=getattr(args, "jobs", None))
        configure_logging()
        return args.handler(args)
    except SignBoundError as exc:
        if settings.debug:
            logger.exception("command %s failed", args.command)
        sys.stderr.write(f"error: {exc.detail}\n")
        return exc.exit_code
    except ValidationError as exc:
        first = exc.errors()[0]
        sys.stderr.write(f"error: invalid input: {first['msg']}\n")
        return 2
    except Exception as exc:
        # Global handler for unexpected errors
        logger.exception("unexpected error in command %s", args.command)
        detail = str(exc) if settings.debug else "an unexpected error occurred"
        sys.stderr.write(f"internal error: {detail}\n")
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
