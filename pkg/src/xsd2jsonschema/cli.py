"""Command-line front end.

Wires the whole pipeline end to end: stdout carries only the produced
JSON document, every diagnostic goes to stderr. Exit codes: 0 success
(possibly with warnings), 1 input or parse error, 2 translation error
(including warnings upgraded by --strict), 3 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, translate
from .defaults import inject_defaults
from .errors import InputError, StrictModeViolation, TranslationError
from .facts import dump_facts, flatten
from .schema_ast import serialize
from .xmlingest import parse_document


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; this tool reserves 2 for
    # translation errors and uses 3 for usage problems
    def error(self, message):
        self.exit(3, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="xsd2jsonschema",
        description="Translate an XML Schema (XSD 1.0) document into a"
        " JSON Schema Draft-04 document.",
    )
    parser.add_argument(
        "input",
        nargs="?",
        default="-",
        help="path to the XSD file, or '-' for standard input (default)",
    )
    parser.add_argument(
        "--compact",
        action="store_true",
        help="emit compact JSON instead of pretty-printed",
    )
    parser.add_argument(
        "--indent",
        type=int,
        default=2,
        metavar="N",
        help="indent width for pretty output, 1..8 (default 2)",
    )
    parser.add_argument(
        "--always-array",
        action="store_true",
        help="wrap every sequence element in an array schema, even for"
        " maxOccurs=1",
    )
    parser.add_argument(
        "--keep-at-prefix",
        action="store_true",
        help="keep the @ marker on attribute-derived property names",
    )
    parser.add_argument(
        "--strict",
        action="store_true",
        help="treat warnings (unsupported constructs) as errors",
    )
    parser.add_argument(
        "--emit-schema-key",
        action="store_true",
        help='add a "$schema" key referencing JSON Schema Draft-04',
    )
    parser.add_argument(
        "--dump-facts",
        action="store_true",
        help="print the fact store after the defaults stage and exit"
        " without translating",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    return parser


def _read_input(source: str) -> bytes:
    if source == "-":
        return sys.stdin.buffer.read()
    return Path(source).read_bytes()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not 1 <= args.indent <= 8:
        parser.error(f"--indent must be between 1 and 8, got {args.indent}")

    try:
        data = _read_input(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 1

    if args.dump_facts:
        try:
            store = inject_defaults(flatten(parse_document(data)))
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(dump_facts(store))
        return 0

    try:
        report = translate(
            data,
            always_array=args.always_array,
            keep_at_prefix=args.keep_at_prefix,
            emit_schema_key=args.emit_schema_key,
            strict=args.strict,
        )
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StrictModeViolation as exc:
        for warning in exc.warnings:
            print(f"error: {warning}", file=sys.stderr)
        return 2
    except TranslationError as exc:
        rule = f" [{exc.rule}]" if exc.rule else ""
        print(f"error: {exc}{rule}", file=sys.stderr)
        return 2

    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)

    text = serialize(report.schema, pretty=not args.compact, indent=args.indent)
    sys.stdout.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
