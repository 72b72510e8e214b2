"""RDF terms and nested (RDF*) triples.

All values are immutable and hashable. Equality is structural: two triples
are equal when their positions are equal, recursively through nesting.
"""
from __future__ import annotations

import re
from typing import Iterator, Union

from .errors import NestingDepthError

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

DEFAULT_MAX_NESTING = 128
_max_nesting = DEFAULT_MAX_NESTING


def get_max_nesting() -> int:
    return _max_nesting


def set_max_nesting(limit: int) -> int:
    """Set the process-wide nesting limit enforced by :class:`Triple`. Returns the old value."""
    global _max_nesting
    if limit < 0:
        raise ValueError("nesting limit must be non-negative")
    old, _max_nesting = _max_nesting, limit
    return old


_PN_CHARS_BASE = (
    "A-Za-z\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF"
    "\u200C-\u200D\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF\uFDF0-\uFFFD"
    "\U00010000-\U000EFFFF"
)
_PN_CHARS_U = _PN_CHARS_BASE + "_"
_PN_CHARS = _PN_CHARS_U + "\\-0-9\u00B7\u0300-\u036F\u203F-\u2040"
BNODE_LABEL_RE = re.compile(f"[{_PN_CHARS_U}0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?")
LANGTAG_RE = re.compile(r"[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")
_BAD_IRI_CHARS = re.compile(r"[\x00-\x20<>]")


class Iri:
    __slots__ = ("value", "_hash")

    def __init__(self, value: str):
        if not value or _BAD_IRI_CHARS.search(value):
            raise ValueError(f"invalid IRI: {value!r}")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "_hash", hash((Iri, value)))

    def __setattr__(self, name, value):
        raise AttributeError("Iri is immutable")

    def __eq__(self, other):
        return type(other) is Iri and other.value == self.value

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Iri({self.value!r})"

    def __str__(self):
        return f"<{self.value}>"

    def __reduce__(self):
        return (Iri, (self.value,))


class BlankNode:
    __slots__ = ("label", "_hash")

    def __init__(self, label: str):
        if not BNODE_LABEL_RE.fullmatch(label):
            raise ValueError(f"invalid blank node label: {label!r}")
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "_hash", hash((BlankNode, label)))

    def __setattr__(self, name, value):
        raise AttributeError("BlankNode is immutable")

    def __eq__(self, other):
        return type(other) is BlankNode and other.label == self.label

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"BlankNode({self.label!r})"

    def __str__(self):
        return f"_:{self.label}"

    def __reduce__(self):
        return (BlankNode, (self.label,))


XSD_STRING = Iri(XSD + "string")
XSD_INTEGER = Iri(XSD + "integer")
XSD_DECIMAL = Iri(XSD + "decimal")
XSD_DOUBLE = Iri(XSD + "double")
XSD_BOOLEAN = Iri(XSD + "boolean")
RDF_LANGSTRING = Iri(RDF + "langString")
RDF_TYPE = Iri(RDF + "type")
RDF_STATEMENT = Iri(RDF + "Statement")
RDF_SUBJECT = Iri(RDF + "subject")
RDF_PREDICATE = Iri(RDF + "predicate")
RDF_OBJECT = Iri(RDF + "object")
RDF_FIRST = Iri(RDF + "first")
RDF_REST = Iri(RDF + "rest")
RDF_NIL = Iri(RDF + "nil")


class Literal:
    """A literal. The datatype is always stored; plain literals get xsd:string."""

    __slots__ = ("lexical", "datatype", "language", "_hash")

    def __init__(self, lexical: str, datatype: Iri | None = None, language: str | None = None):
        if language is not None:
            if not LANGTAG_RE.fullmatch(language):
                raise ValueError(f"invalid language tag: {language!r}")
            language = language.lower()
            if datatype is not None and datatype != RDF_LANGSTRING:
                raise ValueError("a language-tagged literal must have datatype rdf:langString")
            datatype = RDF_LANGSTRING
        elif datatype is None:
            datatype = XSD_STRING
        elif datatype == RDF_LANGSTRING:
            raise ValueError("rdf:langString literal requires a language tag")
        object.__setattr__(self, "lexical", lexical)
        object.__setattr__(self, "datatype", datatype)
        object.__setattr__(self, "language", language)
        object.__setattr__(self, "_hash", hash((Literal, lexical, datatype, language)))

    def __setattr__(self, name, value):
        raise AttributeError("Literal is immutable")

    def __eq__(self, other):
        return (
            type(other) is Literal
            and other.lexical == self.lexical
            and other.datatype == self.datatype
            and other.language == self.language
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.language is not None:
            return f"Literal({self.lexical!r}, language={self.language!r})"
        if self.datatype == XSD_STRING:
            return f"Literal({self.lexical!r})"
        return f"Literal({self.lexical!r}, {self.datatype!r})"

    def __reduce__(self):
        if self.language is not None:
            return (Literal, (self.lexical, None, self.language))
        return (Literal, (self.lexical, self.datatype))


class Triple:
    """An RDF* triple whose subject and object may themselves be triples."""

    __slots__ = ("subject", "predicate", "object", "depth", "_hash")

    def __init__(self, subject: "Subject", predicate: Iri, object: "Term"):
        if type(subject) not in (Iri, BlankNode, Triple):
            raise TypeError(f"invalid subject: {subject!r}")
        if type(predicate) is not Iri:
            raise TypeError(f"predicate must be an IRI, got {predicate!r}")
        if type(object) not in (Iri, BlankNode, Literal, Triple):
            raise TypeError(f"invalid object: {object!r}")
        depth = 0
        if type(subject) is Triple:
            depth = subject.depth + 1
        if type(object) is Triple and object.depth + 1 > depth:
            depth = object.depth + 1
        if depth > _max_nesting:
            raise NestingDepthError(depth, _max_nesting)
        object_ = object
        set_ = super().__setattr__
        set_("subject", subject)
        set_("predicate", predicate)
        set_("object", object_)
        set_("depth", depth)
        set_("_hash", hash((Triple, subject, predicate, object_)))

    def __setattr__(self, name, value):
        raise AttributeError("Triple is immutable")

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Triple
            and other._hash == self._hash
            and other.predicate == self.predicate
            and other.subject == self.subject
            and other.object == self.object
        )

    def __hash__(self):
        return self._hash

    def __iter__(self):
        yield self.subject
        yield self.predicate
        yield self.object

    def __repr__(self):
        return f"Triple({self.subject!r}, {self.predicate!r}, {self.object!r})"

    def __reduce__(self):
        return (Triple, (self.subject, self.predicate, self.object))

    @property
    def is_metadata(self) -> bool:
        return self.depth > 0


Subject = Union[Iri, BlankNode, Triple]
Term = Union[Iri, BlankNode, Literal, Triple]


def nesting_depth(t: Triple) -> int:
    """The smallest k such that ``t`` is k-nested."""
    return t.depth


def terms_plus_triple(t: Triple) -> set:
    """All terms and embedded triples mentioned in ``t``, at any depth."""
    out: set = set()
    stack = [t]
    while stack:
        s, p, o = stack.pop()
        out.add(s)
        out.add(p)
        out.add(o)
        if type(s) is Triple:
            stack.append(s)
        if type(o) is Triple:
            stack.append(o)
    return out


def embedded_triples(t: Triple) -> Iterator[Triple]:
    """Yield every triple embedded in ``t`` (not ``t`` itself), possibly with repeats."""
    stack = [x for x in (t.subject, t.object) if type(x) is Triple]
    while stack:
        e = stack.pop()
        yield e
        if type(e.subject) is Triple:
            stack.append(e.subject)
        if type(e.object) is Triple:
            stack.append(e.object)


def sort_key(term) -> tuple:
    """Total order on terms: IRIs < blank nodes < literals < triples."""
    tp = type(term)
    if tp is Iri:
        return (0, term.value)
    if tp is BlankNode:
        return (1, term.label)
    if tp is Literal:
        return (2, term.datatype.value, term.lexical, term.language or "")
    if tp is Triple:
        return (3, sort_key(term.subject), sort_key(term.predicate), sort_key(term.object))
    raise TypeError(f"not an RDF term: {term!r}")
