"""Query-side values: variables, triple* patterns, solution* mappings, filters."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .errors import IncompatibleMappingsError, PatternError
from .terms import _PN_CHARS_U, BlankNode, Iri, Literal, Triple, sort_key

_VARNAME_RE = re.compile(
    f"[{_PN_CHARS_U}0-9][{_PN_CHARS_U}0-9\u00B7\u0300-\u036F\u203F-\u2040]*"
)


class Variable:
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        if not _VARNAME_RE.fullmatch(name):
            raise ValueError(f"invalid variable name: {name!r}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash((Variable, name)))

    def __setattr__(self, name, value):
        raise AttributeError("Variable is immutable")

    def __eq__(self, other):
        return type(other) is Variable and other.name == self.name

    def __lt__(self, other):
        return self.name < other.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Variable({self.name!r})"

    def __str__(self):
        return f"?{self.name}"

    def __reduce__(self):
        return (Variable, (self.name,))


_POSITION_TYPES = (Variable, Iri, BlankNode, Literal, Triple)


class TriplePattern:
    """A triple* pattern. Subject and object may be nested patterns.

    Nested patterns must be free of blank nodes at every depth; the outermost
    pattern may use blank nodes in subject and object position. A nested
    pattern without variables is stored as the :class:`Triple` it denotes (if any), so
    ground patterns have one canonical form. Positions may also hold triples
    directly, which is what substituting a triple-valued variable produces.
    """

    __slots__ = ("subject", "predicate", "object", "_hash")

    def __init__(self, subject, predicate, object):
        for role, x in (("subject", subject), ("object", object)):
            tp = type(x)
            if tp is TriplePattern:
                if type(x.subject) is BlankNode or type(x.object) is BlankNode:
                    raise PatternError(f"embedded triple pattern in {role} position contains a blank node")
                if x.is_ground() and _triple_like(x):
                    x = x.to_triple()
                    if role == "subject":
                        subject = x
                    else:
                        object = x
            elif tp not in _POSITION_TYPES:
                raise PatternError(f"invalid {role}: {x!r}")
        if type(predicate) not in (Variable, Iri):
            raise PatternError(f"predicate must be a variable or IRI, got {predicate!r}")
        set_ = super().__setattr__
        set_("subject", subject)
        set_("predicate", predicate)
        set_("object", object)
        set_("_hash", hash((TriplePattern, subject, predicate, object)))

    def __setattr__(self, name, value):
        raise AttributeError("TriplePattern is immutable")

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is TriplePattern
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
        return f"TriplePattern({self.subject!r}, {self.predicate!r}, {self.object!r})"

    def variables(self) -> set[Variable]:
        out: set[Variable] = set()
        for x in self:
            if type(x) is Variable:
                out.add(x)
            elif type(x) is TriplePattern:
                out |= x.variables()
        return out

    def blank_nodes(self) -> set[BlankNode]:
        return {x for x in (self.subject, self.object) if type(x) is BlankNode}

    def is_ground(self) -> bool:
        return not self.variables()

    def to_triple(self) -> Triple:
        """Convert a pattern without variables into the triple it denotes."""
        s, p, o = self.subject, self.predicate, self.object
        if type(s) is TriplePattern:
            s = s.to_triple()
        if type(o) is TriplePattern:
            o = o.to_triple()
        if type(s) is Variable or type(p) is Variable or type(o) is Variable:
            raise PatternError(f"pattern still contains variables: {self!r}")
        if type(s) is Literal:
            raise PatternError(f"a literal cannot be the subject of a triple: {self!r}")
        return Triple(s, p, o)


def _triple_like(tp: TriplePattern) -> bool:
    # a ground pattern with a literal subject somewhere denotes no triple
    s, o = tp.subject, tp.object
    if type(s) is Literal:
        return False
    if type(s) is TriplePattern and not _triple_like(s):
        return False
    return type(o) is not TriplePattern or _triple_like(o)


PatternTerm = Union[Variable, Iri, BlankNode, Literal, TriplePattern]


class Solution(Mapping):
    """A solution* mapping: a finite partial map from variables to terms or triples."""

    __slots__ = ("_d", "_hash")

    def __init__(self, bindings: Mapping | None = None):
        d = dict(bindings) if bindings else {}
        for k, v in d.items():
            if type(k) is not Variable:
                raise TypeError(f"not a variable: {k!r}")
            if type(v) not in (Iri, BlankNode, Literal, Triple):
                raise TypeError(f"cannot bind {k} to {v!r}")
        self._d = d
        self._hash = None

    @classmethod
    def _trusted(cls, d: dict) -> "Solution":
        s = cls.__new__(cls)
        s._d = d
        s._hash = None
        return s

    def __getitem__(self, v):
        return self._d[v]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __contains__(self, v):
        return v in self._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Solution):
            return self._d == other._d
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{k}: {v!r}" for k, v in sorted(self._d.items()))
        return "{" + inner + "}"

    def sort_key(self):
        return tuple((k.name, sort_key(v)) for k, v in sorted(self._d.items()))

    def restrict(self, variables) -> "Solution":
        d = self._d
        return Solution._trusted({v: d[v] for v in variables if v in d})

    def extend(self, v: Variable, value) -> "Solution":
        d = dict(self._d)
        d[v] = value
        return Solution._trusted(d)


def compatible(a: Mapping, b: Mapping) -> bool:
    if len(a) > len(b):
        a, b = b, a
    for v, x in a.items():
        y = b.get(v)
        if y is not None and y != x:
            return False
    return True


def merge(a: Solution, b: Solution) -> Solution:
    if not compatible(a, b):
        raise IncompatibleMappingsError("cannot merge incompatible solution mappings")
    d = dict(b._d)
    d.update(a._d)
    return Solution._trusted(d)


def apply(eta: Mapping, tp: TriplePattern) -> TriplePattern:
    """Replace the variables of ``tp`` bound in ``eta``; unbound ones stay."""

    def sub(x):
        tx = type(x)
        if tx is Variable:
            val = eta.get(x)
            if val is None:
                return x
            return val
        if tx is TriplePattern:
            return apply(eta, x)
        return x

    p = tp.predicate
    if type(p) is Variable:
        bound = eta.get(p)
        if bound is not None:
            if type(bound) is not Iri:
                raise PatternError(f"{p} is bound to a non-IRI and cannot be a predicate")
            p = bound
    return TriplePattern(sub(tp.subject), p, sub(tp.object))


# -- filter conditions ---------------------------------------------------


class FilterCondition:
    __slots__ = ()

    def satisfied_by(self, eta: Mapping) -> bool:
        raise NotImplementedError

    def variables(self) -> set[Variable]:
        raise NotImplementedError


@dataclass(frozen=True)
class Bound(FilterCondition):
    var: Variable

    def satisfied_by(self, eta):
        return self.var in eta

    def variables(self):
        return {self.var}


@dataclass(frozen=True)
class EqualsConst(FilterCondition):
    var: Variable
    const: Iri | Literal

    def __post_init__(self):
        if type(self.const) not in (Iri, Literal):
            raise PatternError("filter constants must be IRIs or literals")

    def satisfied_by(self, eta):
        val = eta.get(self.var)
        return val is not None and val == self.const

    def variables(self):
        return {self.var}


@dataclass(frozen=True)
class EqualsVars(FilterCondition):
    left: Variable
    right: Variable

    def satisfied_by(self, eta):
        a = eta.get(self.left)
        b = eta.get(self.right)
        return a is not None and b is not None and a == b

    def variables(self):
        return {self.left, self.right}


@dataclass(frozen=True)
class Not(FilterCondition):
    cond: FilterCondition

    def satisfied_by(self, eta):
        return not self.cond.satisfied_by(eta)

    def variables(self):
        return self.cond.variables()


@dataclass(frozen=True)
class Or(FilterCondition):
    left: FilterCondition
    right: FilterCondition

    def satisfied_by(self, eta):
        return self.left.satisfied_by(eta) or self.right.satisfied_by(eta)

    def variables(self):
        return self.left.variables() | self.right.variables()


@dataclass(frozen=True)
class And(FilterCondition):
    left: FilterCondition
    right: FilterCondition

    def satisfied_by(self, eta):
        return self.left.satisfied_by(eta) and self.right.satisfied_by(eta)

    def variables(self):
        return self.left.variables() | self.right.variables()


def iter_variables(x) -> Iterator[Variable]:
    if type(x) is Variable:
        yield x
    elif type(x) is TriplePattern:
        for y in x:
            yield from iter_variables(y)
