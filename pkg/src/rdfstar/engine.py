"""Multiset algebra over solution* mappings and evaluation of algebra expressions."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import PatternError
from .graph import StarGraph, TripleIndex
from .patterns import (
    FilterCondition,
    Solution,
    TriplePattern,
    Variable,
    apply,
    compatible,
)
from .terms import BlankNode, Iri, Literal, Triple, sort_key


class SolutionMultiset:
    """A multiset of solution* mappings: underlying set plus positive cardinalities."""

    __slots__ = ("_card",)

    def __init__(self, entries: Mapping[Solution, int] | Iterable[tuple[Solution, int]] = ()):
        card: dict[Solution, int] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for eta, n in items:
            if not isinstance(eta, Solution):
                eta = Solution(eta)
            if n < 0:
                raise ValueError("cardinalities must be positive")
            if n:
                card[eta] = card.get(eta, 0) + n
        self._card = card

    @classmethod
    def _trusted(cls, card: dict) -> "SolutionMultiset":
        m = cls.__new__(cls)
        m._card = card
        return m

    @classmethod
    def unit(cls) -> "SolutionMultiset":
        """The multiset holding only the empty mapping, once."""
        return cls._trusted({Solution(): 1})

    def card(self, eta) -> int:
        if not isinstance(eta, Solution):
            eta = Solution(eta)
        return self._card.get(eta, 0)

    def items(self):
        return self._card.items()

    def solutions(self):
        return self._card.keys()

    def total(self) -> int:
        return sum(self._card.values())

    def __len__(self) -> int:
        return len(self._card)

    def __iter__(self):
        return iter(self._card)

    def __contains__(self, eta) -> bool:
        return eta in self._card

    def __eq__(self, other) -> bool:
        if isinstance(other, SolutionMultiset):
            return self._card == other._card
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def canonical(self) -> list[tuple[tuple, int]]:
        """Sorted dump used to compare multisets in a stable, printable way."""
        return sorted((eta.sort_key(), n) for eta, n in self._card.items())

    def rows(self) -> list[Solution]:
        """Solutions in canonical order, each repeated by its cardinality."""
        out = []
        for eta, n in sorted(self._card.items(), key=lambda kv: kv[0].sort_key()):
            out.extend([eta] * n)
        return out

    def __repr__(self) -> str:
        inner = ", ".join(f"{eta!r}: {n}" for eta, n in sorted(self._card.items(), key=lambda kv: kv[0].sort_key()))
        return f"SolutionMultiset({{{inner}}})"


# -- algebra operators ---------------------------------------------------


def _certain_vars(m: SolutionMultiset) -> set[Variable]:
    it = iter(m.solutions())
    try:
        out = set(next(it))
    except StopIteration:
        return set()
    for eta in it:
        out &= eta.keys()
        if not out:
            break
    return out


def _buckets(m: SolutionMultiset, key_vars: list[Variable]) -> dict:
    buckets: dict = {}
    for eta, n in m.items():
        buckets.setdefault(tuple(eta[v] for v in key_vars), []).append((eta, n))
    return buckets


def _partners(m1: SolutionMultiset, m2: SolutionMultiset):
    """Yield (eta1, card1, candidates) where candidates cover every compatible eta2."""
    key_vars = sorted(_certain_vars(m1) & _certain_vars(m2))
    if key_vars:
        buckets = _buckets(m2, key_vars)
        for eta1, n1 in m1.items():
            yield eta1, n1, buckets.get(tuple(eta1[v] for v in key_vars), ())
    else:
        everything = list(m2.items())
        for eta1, n1 in m1.items():
            yield eta1, n1, everything


def _merge_dicts(a: Solution, b: Solution) -> Solution:
    d = dict(b._d)
    d.update(a._d)
    return Solution._trusted(d)


def join(m1: SolutionMultiset, m2: SolutionMultiset) -> SolutionMultiset:
    out: dict[Solution, int] = {}
    if not len(m1) or not len(m2):
        return SolutionMultiset._trusted(out)
    for eta1, n1, cands in _partners(m1, m2):
        for eta2, n2 in cands:
            if compatible(eta1, eta2):
                eta = _merge_dicts(eta1, eta2)
                out[eta] = out.get(eta, 0) + n1 * n2
    return SolutionMultiset._trusted(out)


def union(m1: SolutionMultiset, m2: SolutionMultiset) -> SolutionMultiset:
    # cardinalities add on the overlap of the two underlying sets
    out = dict(m1.items())
    for eta, n in m2.items():
        out[eta] = out.get(eta, 0) + n
    return SolutionMultiset._trusted(out)


def difference(m1: SolutionMultiset, m2: SolutionMultiset) -> SolutionMultiset:
    """Mappings of ``m1`` that are compatible with no mapping of ``m2``."""
    out: dict[Solution, int] = {}
    if not len(m2):
        return SolutionMultiset._trusted(dict(m1.items()))
    for eta1, n1, cands in _partners(m1, m2):
        if not any(compatible(eta1, eta2) for eta2, _ in cands):
            out[eta1] = n1
    return SolutionMultiset._trusted(out)


def left_outer_join(m1: SolutionMultiset, m2: SolutionMultiset) -> SolutionMultiset:
    """Single-pass equivalent of ``union(join(m1, m2), difference(m1, m2))``."""
    out: dict[Solution, int] = {}
    if not len(m2):
        return SolutionMultiset._trusted(dict(m1.items()))
    for eta1, n1, cands in _partners(m1, m2):
        matched = False
        for eta2, n2 in cands:
            if compatible(eta1, eta2):
                matched = True
                eta = _merge_dicts(eta1, eta2)
                out[eta] = out.get(eta, 0) + n1 * n2
        if not matched:
            out[eta1] = out.get(eta1, 0) + n1
    return SolutionMultiset._trusted(out)


def selection(m: SolutionMultiset, cond: FilterCondition) -> SolutionMultiset:
    return SolutionMultiset._trusted({eta: n for eta, n in m.items() if cond.satisfied_by(eta)})


def project(m: SolutionMultiset, variables: Iterable[Variable]) -> SolutionMultiset:
    variables = list(variables)
    out: dict[Solution, int] = {}
    for eta, n in m.items():
        r = eta.restrict(variables)
        out[r] = out.get(r, 0) + n
    return SolutionMultiset._trusted(out)


# -- algebra expressions -------------------------------------------------


class Expression:
    __slots__ = ()


@dataclass(frozen=True)
class BGPStar(Expression):
    patterns: frozenset

    def __init__(self, patterns: Iterable[TriplePattern] = ()):
        object.__setattr__(self, "patterns", frozenset(patterns))


@dataclass(frozen=True)
class TR(Expression):
    """``(tp AS ?v)``: bind each match of ``tp`` to ``?v`` as a triple."""

    pattern: TriplePattern
    var: Variable


@dataclass(frozen=True)
class Join(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Union(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Opt(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Filter(Expression):
    expr: Expression
    cond: FilterCondition


@dataclass(frozen=True)
class Extend(Expression):
    """Plain ``BIND(value AS ?var)`` where value is a constant or a variable."""

    expr: Expression
    var: Variable
    value: Variable | Iri | Literal


# -- evaluation ----------------------------------------------------------

_NO_MATCH = object()


def _ground(x, binding: dict):
    """Concrete value of a pattern position under ``binding``; None if open."""
    tx = type(x)
    if tx is Variable or tx is BlankNode:
        return binding.get(x)
    if tx is TriplePattern:
        s = _ground(x.subject, binding)
        p = _ground(x.predicate, binding)
        o = _ground(x.object, binding)
        if s is None or p is None or o is None:
            return None
        if s is _NO_MATCH or o is _NO_MATCH:
            return _NO_MATCH
        try:
            return Triple(s, p, o)
        except TypeError:
            return _NO_MATCH
    return x


def _unify(x, value, binding: dict) -> bool:
    """Extend ``binding`` in place so that ``x`` matches ``value``."""
    tx = type(x)
    if tx is Variable or tx is BlankNode:
        cur = binding.get(x)
        if cur is None:
            binding[x] = value
            return True
        return cur == value
    if tx is TriplePattern:
        if type(value) is not Triple:
            return False
        return (
            _unify(x.predicate, value.predicate, binding)
            and _unify(x.subject, value.subject, binding)
            and _unify(x.object, value.object, binding)
        )
    return x == value


def _unknowns(x) -> set:
    tx = type(x)
    if tx is Variable or tx is BlankNode:
        return {x}
    if tx is TriplePattern:
        return _unknowns(x.subject) | _unknowns(x.predicate) | _unknowns(x.object)
    return set()


def _pattern_key(tp: TriplePattern) -> tuple:
    def k(x):
        tx = type(x)
        if tx is Variable:
            return (10, x.name)
        if tx is TriplePattern:
            return (11, k(x.subject), k(x.predicate), k(x.object))
        return sort_key(x)

    return (k(tp.subject), k(tp.predicate), k(tp.object))


def plan_bgp(patterns: Iterable[TriplePattern], index: TripleIndex) -> list[TriplePattern]:
    """Greedy order: most bound positions first, then smallest index estimate."""
    remaining = sorted(patterns, key=_pattern_key)
    unknowns = {id(tp): [_unknowns(x) for x in tp] for tp in remaining}
    bound: set = set()
    order = []
    while remaining:
        best = None
        best_score = None
        for pos, tp in enumerate(remaining):
            open_sets = unknowns[id(tp)]
            n_bound = sum(1 for u in open_sets if u <= bound)
            keys = [
                _ground(x, {}) if not u else None
                for x, u in zip(tp, open_sets)
            ]
            keys = [None if k is _NO_MATCH else k for k in keys]
            score = (-n_bound, index.estimate(*keys), pos)
            if best_score is None or score < best_score:
                best, best_score = tp, score
        order.append(best)
        remaining.remove(best)
        for u in unknowns[id(best)]:
            bound |= u
    return order


def eval_bgp(patterns: Iterable[TriplePattern], g: StarGraph) -> SolutionMultiset:
    """Solutions of a BGP* over ``G ∪ trefs(G)``.

    Blank nodes of the BGP act as existential variables; the cardinality of
    a solution counts the distinct blank-node assignments that witness it.
    """
    patterns = list(set(patterns))
    variables: set[Variable] = set()
    for tp in patterns:
        if type(tp) is not TriplePattern:
            raise PatternError(f"not a triple pattern: {tp!r}")
        variables |= tp.variables()
    if not patterns:
        return SolutionMultiset.unit()
    index = g.index()
    order = plan_bgp(patterns, index)
    variables_list = sorted(variables)
    out: dict[Solution, int] = {}
    last = len(order)

    def solve(k: int, binding: dict) -> None:
        if k == last:
            eta = Solution._trusted({v: binding[v] for v in variables_list})
            out[eta] = out.get(eta, 0) + 1
            return
        tp = order[k]
        s = _ground(tp.subject, binding)
        p = _ground(tp.predicate, binding)
        o = _ground(tp.object, binding)
        if s is _NO_MATCH or o is _NO_MATCH:
            return
        for t in index.match(s, p, o):
            b = dict(binding)
            if _unify(tp, t, b):
                solve(k + 1, b)

    solve(0, {})
    return SolutionMultiset._trusted(out)


def eval_tr(tp: TriplePattern, v: Variable, g: StarGraph) -> SolutionMultiset:
    """Evaluate ``(tp AS ?v)``."""
    if v in tp.variables():
        raise PatternError(f"{v} occurs in the pattern it is bound to")
    if tp.blank_nodes():
        raise PatternError("a pattern bound with AS must not contain blank nodes")
    out: dict[Solution, int] = {}
    for eta, n in eval_bgp([tp], g).items():
        ext = eta.extend(v, apply(eta, tp).to_triple())
        out[ext] = out.get(ext, 0) + n
    return SolutionMultiset._trusted(out)


def _eval_extend(m: SolutionMultiset, var: Variable, value) -> SolutionMultiset:
    out: dict[Solution, int] = {}
    for eta, n in m.items():
        if var in eta:
            new = eta
        elif type(value) is Variable:
            val = eta.get(value)
            new = eta if val is None else eta.extend(var, val)
        else:
            new = eta.extend(var, value)
        out[new] = out.get(new, 0) + n
    return SolutionMultiset._trusted(out)


def evaluate(e: Expression, g: StarGraph) -> SolutionMultiset:
    te = type(e)
    if te is BGPStar:
        return eval_bgp(e.patterns, g)
    if te is TR:
        return eval_tr(e.pattern, e.var, g)
    if te is Join:
        return join(evaluate(e.left, g), evaluate(e.right, g))
    if te is Union:
        return union(evaluate(e.left, g), evaluate(e.right, g))
    if te is Opt:
        return left_outer_join(evaluate(e.left, g), evaluate(e.right, g))
    if te is Filter:
        return selection(evaluate(e.expr, g), e.cond)
    if te is Extend:
        return _eval_extend(evaluate(e.expr, g), e.var, e.value)
    raise TypeError(f"not an algebra expression: {e!r}")
