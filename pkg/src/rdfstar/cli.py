"""Command-line interface: ``rdfstar validate|unfold|query|stats``.

Exit codes: 0 success, 1 invalid input (syntax, scope, unsupported
feature), 2 I/O problems such as unreadable files.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from .errors import RdfStarError
from .graph import StarGraph
from .reification import unfold_graph
from .sparql import run_query
from .terms import BlankNode, Iri, Literal, Triple, nesting_depth
from .turtle import (
    TermFormatter,
    parse_turtlestar,
    serialize_ntriples,
    serialize_turtlestar,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_IO = 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise CliError(f"{path}: not valid UTF-8 ({e.reason})", EXIT_INPUT) from None
    except OSError as e:
        raise CliError(f"{path}: {e.strerror or e}", EXIT_IO) from None


def _default_base(path: str) -> str | None:
    if path == "-":
        return None
    return Path(path).resolve().as_uri()


def _load_graph(path: str, args) -> tuple[StarGraph, dict[str, str]]:
    text = _read(path)
    base = args.base if args.base is not None else _default_base(path)
    try:
        res = parse_turtlestar(text, base=base, max_nesting=args.max_nesting)
    except RdfStarError as e:
        raise CliError(f"{path}: data parse error: {e}", EXIT_INPUT) from None
    return res.graph, res.prefixes


def _write(text: str, args) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(args.output).write_text(text, encoding="utf-8")
    except OSError as e:
        raise CliError(f"{args.output}: {e.strerror or e}", EXIT_IO) from None


def _info(args, text: str) -> None:
    if not args.quiet:
        print(text)


# -- commands ------------------------------------------------------------


def cmd_validate(args) -> int:
    g, _ = _load_graph(args.data, args)
    depth = max((t.depth for t in g), default=0)
    n = len(g)
    if n == 0:
        _info(args, "0 triples")
    else:
        noun = "triple" if n == 1 else "triples"
        _info(args, f"{n} {noun}, {len(g.embedded)} embedded, max depth {depth}")
    return EXIT_OK


def cmd_unfold(args) -> int:
    g, prefixes = _load_graph(args.data, args)
    unfolded, _ = unfold_graph(g)
    if args.format == "turtle-star":
        _write(serialize_turtlestar(unfolded, prefixes), args)
    else:
        _write(serialize_ntriples(unfolded), args)
    return EXIT_OK


def cmd_stats(args) -> int:
    g, _ = _load_graph(args.data, args)
    hist = Counter(nesting_depth(t) for t in g)
    lines = [
        f"asserted triples: {len(g)}",
        f"metadata triples: {sum(1 for t in g if t.depth)}",
        f"embedded distinct: {len(g.embedded)}",
        "depth histogram: " + (", ".join(f"{d}:{hist[d]}" for d in sorted(hist)) or "(empty)"),
    ]
    _write("\n".join(lines) + "\n", args)
    return EXIT_OK


def _json_term(x) -> dict:
    tp = type(x)
    if tp is Iri:
        return {"type": "uri", "value": x.value}
    if tp is BlankNode:
        return {"type": "bnode", "value": x.label}
    if tp is Literal:
        out = {"type": "literal", "value": x.lexical}
        if x.language is not None:
            out["xml:lang"] = x.language
        else:
            out["datatype"] = x.datatype.value
        return out
    if tp is Triple:
        return {
            "type": "triple",
            "value": {
                "subject": _json_term(x.subject),
                "predicate": _json_term(x.predicate),
                "object": _json_term(x.object),
            },
        }
    raise TypeError(f"cannot encode {x!r}")


def format_tsv(result) -> str:
    fmt = TermFormatter(result.prefixes)
    variables = result.variables
    lines = ["\t".join(str(v) for v in variables)]
    rows = sorted(result.solutions.items(), key=lambda kv: kv[0].sort_key())
    for eta, n in rows:
        line = "\t".join(fmt.term(eta[v]) if v in eta else "" for v in variables)
        lines.extend([line] * n)
    return "\n".join(lines) + "\n"


def format_json(result) -> str:
    bindings = []
    rows = sorted(result.solutions.items(), key=lambda kv: kv[0].sort_key())
    for eta, n in rows:
        b = {v.name: _json_term(eta[v]) for v in result.variables if v in eta}
        bindings.extend([b] * n)
    doc = {"head": {"vars": [v.name for v in result.variables]}, "results": {"bindings": bindings}}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def cmd_query(args) -> int:
    g, _ = _load_graph(args.data, args)
    text = _read(args.query)
    try:
        result = run_query(text, g)
    except RdfStarError as e:
        stage = getattr(e, "stage", "query")
        raise CliError(f"{args.query}: query {stage} error: {e}", EXIT_INPUT) from None
    _write(format_tsv(result) if args.format == "tsv" else format_json(result), args)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------


def _positive_int(s: str) -> int:
    try:
        n = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--base", metavar="IRI", help="base IRI for relative IRIs (default: the file's URI)")
    common.add_argument("--max-nesting", type=_positive_int, metavar="N", help="maximum embedded-triple depth")
    common.add_argument("--quiet", action="store_true", help="suppress informational output")

    parser = argparse.ArgumentParser(prog="rdfstar", description="RDF* and SPARQL* toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="parse a Turtle* file and report counts")
    p.add_argument("data")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("unfold", parents=[common], help="rewrite embedded triples as standard reification")
    p.add_argument("data")
    p.add_argument("--format", choices=["ntriples", "turtle-star"], default="ntriples")
    p.set_defaults(func=cmd_unfold)

    p = sub.add_parser("query", parents=[common], help="evaluate a SPARQL* SELECT query")
    p.add_argument("data")
    p.add_argument("query")
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("stats", parents=[common], help="print graph statistics")
    p.add_argument("data")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse uses 2 for usage errors, which is our I/O code; map to 1
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except CliError as e:
        print(f"rdfstar: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
