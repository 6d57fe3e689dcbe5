# bsa.py
import argparse
import importlib
import logging
import sys
from typing import List, Optional

from core.config import settings
from core.errors import BSAError

logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL),
    format='[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)
log = logging.getLogger("bsa")

COMMANDS = [
    "commands.validate",
    "commands.algebra",
    "commands.analyze",
    "commands.monoid",
    "commands.ibn",
]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("graph", help="graph JSON document")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="bsa",
        description="Computer algebra for Cohn-Leavitt path algebras of bi-separated graphs.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for ext in COMMANDS:
        try:
            importlib.import_module(ext).setup(subparsers, common)
            log.debug("Loaded command module: %s", ext)
        except Exception as e:
            log.exception("Failed to load %s: %s", ext, e)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        return args.func(args)
    except BSAError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.code
    except KeyboardInterrupt:
        log.warning("Interrupted")
        return 130


if __name__ == "__main__":
    sys.exit(main())
