#!/usr/bin/env python3
"""
Command line for the nested graph engine.

Usage:
    python cli.py validate graph.json               # Validate any document
    python cli.py info graph.json                   # Grading, vertices, irreducible flags
    python cli.py decompose functor.json            # Canonical merger and contraction
    python cli.py compose first.json second.json    # second after first, canonical
    python cli.py equal first.json second.json
    python cli.py restrict morphism.json dep.json   # Square over a dependency
    python cli.py glue diagram.json
    python cli.py export-dot graph.json --out graph.dot
    python cli.py gen-random --kind morphism --seed 7

Exit status: 0 on success, 1 when a document fails validation (the error
report is printed as JSON on stderr), 2 on usage errors.
"""

# Load environment variables first
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from services import commands
from services.errors import MalformedDocument, NestedGraphError, UsageError
from services.random_generator import KINDS, RandomSpec
from services.serialization import dumps, loads

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2

ARITY = {
    "validate": 1,
    "info": 1,
    "decompose": 1,
    "compose": 2,
    "equal": 2,
    "restrict": 2,
    "glue": 1,
    "export-dot": 1,
    "gen-random": 0,
}


@dataclass
class Command:
    name: str
    inputs: List[str] = field(default_factory=list)
    out: Optional[str] = None
    options: Dict[str, Any] = field(default_factory=dict)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cli.py", description="Nested graph engine")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    helps = {
        "validate": "Validate a document of any kind",
        "info": "Describe a document",
        "decompose": "Decompose an admissible epi-functor",
        "compose": "Compose two morphisms (second after first)",
        "equal": "Compare two morphisms",
        "restrict": "Restrict a morphism along a dependency into its target",
        "glue": "Glue a diagram of graphs or of morphisms",
        "export-dot": "Export a graph as DOT",
        "gen-random": "Generate a random value",
    }
    names = {1: ["file"], 2: ["first", "second"]}
    for name, text in helps.items():
        command = sub.add_parser(name, help=text)
        for arg in names.get(ARITY[name], []):
            command.add_argument(arg)
        command.add_argument("--out", help="Write output here instead of stdout")
        if name == "gen-random":
            command.add_argument("--kind", choices=KINDS, default="graph")
            command.add_argument("--seed", type=int, default=0)
            command.add_argument("--max-nodes", type=int, default=RandomSpec.max_nodes)
            command.add_argument("--max-flags", type=int, default=RandomSpec.max_flags)
            command.add_argument("--max-grade", type=int, default=RandomSpec.max_grade)
    return parser


def parse_command(argv: Optional[Sequence[str]] = None) -> Command:
    args = build_parser().parse_args(argv)
    inputs = [getattr(args, a) for a in ("file", "first", "second") if getattr(args, a, None) is not None]
    options: Dict[str, Any] = {"verbose": args.verbose}
    if args.command == "gen-random":
        options.update(kind=args.kind, seed=args.seed, max_nodes=args.max_nodes,
                       max_flags=args.max_flags, max_grade=args.max_grade)
    return Command(args.command, inputs, args.out, options)


def _read(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as handle:
            return loads(handle.read())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")
    except UnicodeDecodeError as e:
        raise MalformedDocument(f"{path} is not UTF-8 text: {e.reason} at byte {e.start}")


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as e:
        raise UsageError(f"cannot write {out}: {e.strerror}")


def execute(command: Command) -> str:
    """Output text of a command; raises NestedGraphError on failure"""
    if command.name not in ARITY:
        raise UsageError(f"unknown subcommand {command.name!r}")
    if len(command.inputs) != ARITY[command.name]:
        raise UsageError(f"{command.name} takes {ARITY[command.name]} input files")

    if command.name == "gen-random":
        spec = RandomSpec.from_dict(command.options)
        _, doc = commands.gen_random(spec)
        return dumps(doc)

    docs = [_read(path) for path in command.inputs]
    if command.name == "export-dot":
        return commands.export_dot(*docs)
    handlers = {
        "validate": commands.validate,
        "info": commands.info,
        "decompose": commands.decompose,
        "compose": commands.compose,
        "equal": commands.equal,
        "restrict": commands.restrict,
        "glue": commands.glue_diagram,
    }
    return dumps(handlers[command.name](*docs))


def run(command: Command) -> int:
    """Run a command, writing its output; returns the exit status"""
    try:
        _write(execute(command), command.out)
    except UsageError as e:
        sys.stderr.write(dumps(e.to_dict()))
        return EXIT_USAGE
    except NestedGraphError as e:
        logger.warning(f"{command.name} failed: {e}")
        sys.stderr.write(dumps(e.to_dict()))
        return EXIT_INVALID
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        command = parse_command(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    level = "DEBUG" if command.options.get("verbose") else os.getenv("NGR_LOG_LEVEL", "WARNING")
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s")
    return run(command)


if __name__ == "__main__":
    sys.exit(main())
