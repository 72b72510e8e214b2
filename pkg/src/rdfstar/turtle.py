"""Turtle* parsing and serialization, plus N-Triples output.

The parser is a recursive-descent parser over the token list produced by
:mod:`rdfstar.lexer`. Embedded triples are written ``<< s p o >>`` and may
appear in subject and object position; inside them only IRIs, blank nodes,
literals (object only) and further embedded triples are allowed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import count
from urllib.parse import urljoin

from . import lexer as lx
from .errors import (
    NestingDepthError,
    SourcePosition,
    TokenizeError,
    TurtleSyntaxError,
    UnknownPrefixError,
)
from .graph import StarGraph
from .terms import (
    RDF_FIRST,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    BlankNode,
    Iri,
    Literal,
    Triple,
    get_max_nesting,
    sort_key,
)
from .terms import _PN_CHARS, _PN_CHARS_BASE, _PN_CHARS_U

_SCHEME_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")
_NUMERIC = {lx.INTEGER: XSD_INTEGER, lx.DECIMAL: XSD_DECIMAL, lx.DOUBLE: XSD_DOUBLE}


@dataclass
class ParseResult:
    graph: StarGraph
    prefixes: dict[str, str] = field(default_factory=dict)
    base: str | None = None
    diagnostics: list[tuple[int, int, str]] = field(default_factory=list)


def resolve_iri(value: str, base: str | None) -> str:
    if _SCHEME_RE.match(value):
        return value
    if base is None:
        raise ValueError(f"relative IRI <{value}> but no base IRI is set")
    return urljoin(base, value)


class _TokenStream:
    """Cursor over a token list with position reporting."""

    error_class = TurtleSyntaxError

    def __init__(self, text: str):
        self.text = text
        try:
            self.tokens = lx.tokenize(text)
        except TokenizeError as e:
            raise self.error_class(e.message, SourcePosition.from_offset(text, e.offset)) from None
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def peek(self, k: int = 1):
        j = min(self.i + k, len(self.tokens) - 1)
        return self.tokens[j]

    def advance(self):
        t = self.tokens[self.i]
        if t[0] != lx.EOF:
            self.i += 1
        return t

    def position(self, tok=None) -> SourcePosition:
        if tok is None:
            tok = self.tok
        return SourcePosition.from_offset(self.text, tok[2])

    def error(self, message: str, tok=None, cls=None):
        return (cls or self.error_class)(message, self.position(tok))

    def is_punct(self, value: str, tok=None) -> bool:
        t = self.tok if tok is None else tok
        return t[0] == lx.PUNCT and t[1] == value

    def expect_punct(self, value: str, what: str | None = None):
        if not self.is_punct(value):
            raise self.error(f"expected {what or repr(value)}, found {lx.describe(self.tok)}")
        return self.advance()


class TurtleStarParser(_TokenStream):
    def __init__(
        self,
        text: str,
        base: str | None = None,
        prefixes: dict[str, str] | None = None,
        max_nesting: int | None = None,
    ):
        super().__init__(text)
        self.base = base
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self.max_nesting = get_max_nesting() if max_nesting is None else max_nesting
        self.graph = StarGraph()
        self.diagnostics: list[tuple[int, int, str]] = []
        used = {t[1] for t in self.tokens if t[0] == lx.BNODE}
        self._fresh_ids = (f"genid{n}" for n in count(1) if f"genid{n}" not in used)

    def fresh_bnode(self) -> BlankNode:
        return BlankNode(next(self._fresh_ids))

    def parse(self) -> ParseResult:
        while self.tok[0] != lx.EOF:
            self.statement()
        return ParseResult(self.graph, self.prefixes, self.base, self.diagnostics)

    # -- directives -----------------------------------------------------

    def statement(self):
        tok = self.tok
        if tok[0] == lx.LANGTAG and tok[1] in ("prefix", "base"):
            self.advance()
            self.directive(tok[1])
            self.expect_punct(".", "'.' after directive")
            return
        if tok[0] == lx.NAME and tok[1].upper() in ("PREFIX", "BASE"):
            self.advance()
            self.directive(tok[1].lower())
            return
        self.triples()
        self.expect_punct(".", "'.' at end of statement")

    def directive(self, kind: str):
        if kind == "prefix":
            name = self.tok
            if name[0] != lx.PNAME_NS:
                raise self.error(f"expected prefix name, found {lx.describe(name)}")
            self.advance()
            iri_tok = self.tok
            if iri_tok[0] != lx.IRIREF:
                raise self.error(f"expected IRI, found {lx.describe(iri_tok)}")
            self.advance()
            prefix = name[1][:-1]
            ns = self._resolve(iri_tok)
            if prefix in self.prefixes and self.prefixes[prefix] != ns:
                p = self.position(name)
                self.diagnostics.append((p.line, p.column, f"prefix '{prefix}:' redefined"))
            self.prefixes[prefix] = ns
        else:
            iri_tok = self.tok
            if iri_tok[0] != lx.IRIREF:
                raise self.error(f"expected IRI, found {lx.describe(iri_tok)}")
            self.advance()
            self.base = self._resolve(iri_tok)

    # -- triples --------------------------------------------------------

    def triples(self):
        if self.is_punct("["):
            subject = self.blank_node_property_list()
            if self.is_punct("."):
                return
            self.predicate_object_list(subject)
            return
        subject = self.subject()
        self.predicate_object_list(subject)

    def emit(self, s, p, o, tok=None):
        self.graph.add(Triple(s, p, o))

    def predicate_object_list(self, subject):
        while True:
            pred = self.verb()
            self.object_list(subject, pred)
            if not self.is_punct(";"):
                return
            while self.is_punct(";"):
                self.advance()
            if self.is_punct(".") or self.is_punct("]") or self.tok[0] == lx.EOF:
                return

    def object_list(self, subject, pred):
        while True:
            obj = self.object()
            self.emit(subject, pred, obj)
            if not self.is_punct(","):
                return
            self.advance()

    def verb(self) -> Iri:
        tok = self.tok
        if tok[0] == lx.NAME and tok[1] == "a":
            self.advance()
            return RDF_TYPE
        if tok[0] in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
            return self.iri()
        if self.is_punct("<<"):
            raise self.error("an embedded triple cannot be used as a predicate")
        raise self.error(f"expected predicate, found {lx.describe(tok)}")

    def subject(self):
        tok = self.tok
        kind = tok[0]
        if kind in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
            return self.iri()
        if kind == lx.BNODE:
            self.advance()
            return BlankNode(tok[1])
        if kind == lx.PUNCT:
            if tok[1] == "<<":
                return self.triple_x(1)
            if tok[1] == "[":
                return self.anon()
            if tok[1] == "(":
                return self.collection()
        if kind in (lx.STRING, lx.INTEGER, lx.DECIMAL, lx.DOUBLE) or (
            kind == lx.NAME and tok[1] in ("true", "false")
        ):
            raise self.error("a literal cannot be used as a subject")
        raise self.error(f"expected subject, found {lx.describe(tok)}")

    def object(self):
        tok = self.tok
        kind = tok[0]
        if kind in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
            return self.iri()
        if kind == lx.BNODE:
            self.advance()
            return BlankNode(tok[1])
        if kind == lx.PUNCT:
            if tok[1] == "<<":
                return self.triple_x(1)
            if tok[1] == "[":
                if self.is_punct("]", self.peek()):
                    return self.anon()
                return self.blank_node_property_list()
            if tok[1] == "(":
                return self.collection()
        lit = self.literal()
        if lit is not None:
            return lit
        raise self.error(f"expected object, found {lx.describe(tok)}")

    def triple_x(self, level: int) -> Triple:
        open_tok = self.tok
        if level > self.max_nesting:
            raise NestingDepthError(level, self.max_nesting, self.position(open_tok))
        self.advance()
        s = self.subject_x(level)
        p = self.verb()
        o = self.object_x(level)
        if not self.is_punct(">>"):
            if self.tok[0] == lx.EOF:
                raise self.error("unclosed '<<' (missing '>>')", open_tok)
            raise self.error(f"expected '>>', found {lx.describe(self.tok)}")
        self.advance()
        try:
            return Triple(s, p, o)
        except NestingDepthError as e:
            raise NestingDepthError(e.depth, e.limit, self.position(open_tok)) from None

    def subject_x(self, level: int):
        tok = self.tok
        kind = tok[0]
        if kind in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
            return self.iri()
        if kind == lx.BNODE:
            self.advance()
            return BlankNode(tok[1])
        if self.is_punct("<<"):
            return self.triple_x(level + 1)
        if self.is_punct("["):
            if self.is_punct("]", self.peek()):
                return self.anon()
            raise self.error("blank node property lists are not allowed inside '<< >>'")
        if self.is_punct("("):
            raise self.error("collections are not allowed inside '<< >>'")
        if kind in (lx.STRING, lx.INTEGER, lx.DECIMAL, lx.DOUBLE) or (
            kind == lx.NAME and tok[1] in ("true", "false")
        ):
            raise self.error("a literal cannot be the subject of an embedded triple")
        if tok[0] == lx.EOF:
            raise self.error("unclosed '<<' (missing '>>')")
        raise self.error(f"expected embedded subject, found {lx.describe(tok)}")

    def object_x(self, level: int):
        tok = self.tok
        kind = tok[0]
        if kind in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
            return self.iri()
        if kind == lx.BNODE:
            self.advance()
            return BlankNode(tok[1])
        if self.is_punct("<<"):
            return self.triple_x(level + 1)
        if self.is_punct("["):
            if self.is_punct("]", self.peek()):
                return self.anon()
            raise self.error("blank node property lists are not allowed inside '<< >>'")
        if self.is_punct("("):
            raise self.error("collections are not allowed inside '<< >>'")
        lit = self.literal()
        if lit is not None:
            return lit
        if tok[0] == lx.EOF:
            raise self.error("unclosed '<<' (missing '>>')")
        raise self.error(f"expected embedded object, found {lx.describe(tok)}")

    def anon(self) -> BlankNode:
        self.advance()
        self.expect_punct("]")
        return self.fresh_bnode()

    def blank_node_property_list(self) -> BlankNode:
        self.advance()
        if self.is_punct("]"):
            self.advance()
            return self.fresh_bnode()
        node = self.fresh_bnode()
        self.predicate_object_list(node)
        self.expect_punct("]", "']' to close blank node property list")
        return node

    def collection(self):
        self.advance()
        items = []
        while not self.is_punct(")"):
            if self.tok[0] == lx.EOF:
                raise self.error("unclosed collection (missing ')')")
            items.append(self.object())
        self.advance()
        if not items:
            return RDF_NIL
        head = self.fresh_bnode()
        node = head
        for k, item in enumerate(items):
            self.emit(node, RDF_FIRST, item)
            nxt = self.fresh_bnode() if k + 1 < len(items) else RDF_NIL
            self.emit(node, RDF_REST, nxt)
            node = nxt
        return head

    # -- terms ----------------------------------------------------------

    def _resolve(self, tok) -> str:
        try:
            return resolve_iri(tok[1], self.base)
        except ValueError as e:
            raise self.error(str(e), tok) from None

    def iri(self) -> Iri:
        tok = self.advance()
        if tok[0] == lx.IRIREF:
            value = self._resolve(tok)
        else:
            prefix, _, local = tok[1].partition(":")
            ns = self.prefixes.get(prefix)
            if ns is None:
                raise self.error(f"undeclared prefix '{prefix}:'", tok, UnknownPrefixError)
            value = ns + local
        try:
            return Iri(value)
        except ValueError as e:
            raise self.error(str(e), tok) from None

    def literal(self) -> Literal | None:
        tok = self.tok
        kind = tok[0]
        if kind == lx.STRING:
            self.advance()
            if self.tok[0] == lx.LANGTAG:
                lang = self.advance()
                try:
                    return Literal(tok[1], language=lang[1])
                except ValueError as e:
                    raise self.error(str(e), lang) from None
            if self.is_punct("^^"):
                self.advance()
                if self.tok[0] not in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
                    raise self.error(f"expected datatype IRI, found {lx.describe(self.tok)}")
                dt_tok = self.tok
                dt = self.iri()
                try:
                    return Literal(tok[1], dt)
                except ValueError as e:
                    raise self.error(str(e), dt_tok) from None
            return Literal(tok[1])
        if kind in _NUMERIC:
            self.advance()
            return Literal(tok[1], _NUMERIC[kind])
        if kind == lx.NAME and tok[1] in ("true", "false"):
            self.advance()
            return Literal(tok[1], XSD_BOOLEAN)
        return None


def parse_turtlestar(
    text: str,
    base: str | None = None,
    prefixes: dict[str, str] | None = None,
    max_nesting: int | None = None,
) -> ParseResult:
    """Parse a Turtle* document. The returned graph is frozen."""
    result = TurtleStarParser(text, base, prefixes, max_nesting).parse()
    result.graph.freeze()
    return result


# -- serialization -------------------------------------------------------

_PN_PREFIX_RE = re.compile(f"(?:[{_PN_CHARS_BASE}](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)?")
_PN_LOCAL_RE = re.compile(f"(?:[{_PN_CHARS_U}:0-9](?:[{_PN_CHARS}.:]*[{_PN_CHARS}:])?)?")
_BARE_LITERAL = {
    XSD_INTEGER: re.compile(r"[+-]?[0-9]+"),
    XSD_DECIMAL: re.compile(r"[+-]?[0-9]*\.[0-9]+"),
    XSD_DOUBLE: re.compile(
        r"[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+)"
    ),
    XSD_BOOLEAN: re.compile(r"true|false"),
}
_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t", "\b": "\\b", "\f": "\\f"}
_NEEDS_ESCAPE = re.compile(r'[\\"\x00-\x1f\x7f]')
_IRI_ESCAPE = re.compile(r'[\x00-\x20<>"{}|^`\\]')


def _escape_char(m: re.Match) -> str:
    c = m.group(0)
    return _STRING_ESCAPES.get(c) or f"\\u{ord(c):04X}"


def quote_string(s: str) -> str:
    return '"' + _NEEDS_ESCAPE.sub(_escape_char, s) + '"'


def format_iri(value: str) -> str:
    return "<" + _IRI_ESCAPE.sub(lambda m: f"\\u{ord(m.group(0)):04X}", value) + ">"


class TermFormatter:
    """Renders terms in Turtle* syntax, compacting IRIs with a prefix map."""

    def __init__(self, prefixes: dict[str, str] | None = None):
        self.prefixes = {}
        for p, ns in (prefixes or {}).items():
            if not _PN_PREFIX_RE.fullmatch(p):
                raise ValueError(f"invalid prefix name: {p!r}")
            self.prefixes[p] = ns
        # longest namespace first so compaction is greedy
        self._by_ns = sorted(self.prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0]))

    def iri(self, value: str) -> str:
        for prefix, ns in self._by_ns:
            if ns and value.startswith(ns) and _PN_LOCAL_RE.fullmatch(value, len(ns)):
                return f"{prefix}:{value[len(ns):]}"
        return format_iri(value)

    def literal(self, lit: Literal) -> str:
        if lit.language is not None:
            return f"{quote_string(lit.lexical)}@{lit.language}"
        if lit.datatype == XSD_STRING:
            return quote_string(lit.lexical)
        bare = _BARE_LITERAL.get(lit.datatype)
        if bare is not None and bare.fullmatch(lit.lexical):
            return lit.lexical
        return f"{quote_string(lit.lexical)}^^{self.iri(lit.datatype.value)}"

    def term(self, x) -> str:
        tp = type(x)
        if tp is Iri:
            return self.iri(x.value)
        if tp is BlankNode:
            return f"_:{x.label}"
        if tp is Literal:
            return self.literal(x)
        if tp is Triple:
            return f"<<{self.term(x.subject)} {self.predicate(x.predicate)} {self.term(x.object)}>>"
        raise TypeError(f"not an RDF term: {x!r}")

    def predicate(self, p: Iri) -> str:
        return "a" if p == RDF_TYPE else self.iri(p.value)

    def triple(self, t: Triple) -> str:
        return f"{self.term(t.subject)} {self.predicate(t.predicate)} {self.term(t.object)} ."


def serialize_turtlestar(g, prefixes: dict[str, str] | None = None) -> str:
    """One statement per asserted triple, in canonical term order."""
    fmt = TermFormatter(prefixes)
    lines = [f"@prefix {p}: {format_iri(ns)} ." for p, ns in sorted(fmt.prefixes.items())]
    body = [fmt.triple(t) for t in sorted(g, key=sort_key)]
    if lines and body:
        lines.append("")
    lines.extend(body)
    return "\n".join(lines) + "\n" if lines else ""


def _nt_term(x) -> str:
    tp = type(x)
    if tp is Iri:
        return format_iri(x.value)
    if tp is BlankNode:
        return f"_:{x.label}"
    if tp is Literal:
        if x.language is not None:
            return f"{quote_string(x.lexical)}@{x.language}"
        if x.datatype == XSD_STRING:
            return quote_string(x.lexical)
        return f"{quote_string(x.lexical)}^^{format_iri(x.datatype.value)}"
    raise ValueError(f"N-Triples cannot represent {x!r}")


def serialize_ntriples(g) -> str:
    """N-Triples for a graph without embedded triples."""
    lines = []
    for t in sorted(g, key=sort_key):
        if t.depth:
            raise ValueError(f"N-Triples cannot represent the nested triple {t!r}")
        lines.append(f"{_nt_term(t.subject)} {_nt_term(t.predicate)} {_nt_term(t.object)} .")
    return "".join(line + "\n" for line in lines)
