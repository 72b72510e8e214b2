"""Unfolding of RDF* graphs into plain RDF using the rdf:Statement vocabulary."""
from __future__ import annotations

from typing import Mapping

from .errors import AssignmentError
from .graph import StarGraph
from .terms import (
    RDF_OBJECT,
    RDF_PREDICATE,
    RDF_STATEMENT,
    RDF_SUBJECT,
    RDF_TYPE,
    BlankNode,
    Triple,
    sort_key,
)


class BnodeAssignment(Mapping):
    """Bijection from the embedded triples of a graph to fresh blank nodes."""

    def __init__(self, mapping: dict[Triple, BlankNode], graph: StarGraph | None = None):
        self._map = dict(mapping)
        self.graph = graph
        if len(set(self._map.values())) != len(self._map):
            raise ValueError("bnode assignment is not injective")

    def __getitem__(self, t: Triple) -> BlankNode:
        try:
            return self._map[t]
        except KeyError:
            raise AssignmentError(f"no blank node assigned to {t!r}") from None

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def inverse(self) -> dict[BlankNode, Triple]:
        return {b: t for t, b in self._map.items()}

    def star(self, x):
        """Blank node for an embedded triple; any other term is returned unchanged."""
        if type(x) is Triple:
            return self[x]
        return x

    def __repr__(self):
        return f"BnodeAssignment({self._map!r})"


def make_bnode_assignment(g: StarGraph, prefix: str = "t") -> BnodeAssignment:
    """Assign ``_:t1``, ``_:t2``, ... to trefs(g) in canonical term order.

    Labels already used by blank nodes in ``g`` are skipped.
    """
    taken = {b.label for b in g.blank_nodes()}
    mapping: dict[Triple, BlankNode] = {}
    n = 0
    for t in sorted(g.embedded, key=sort_key):
        n += 1
        while f"{prefix}{n}" in taken:
            n += 1
        mapping[t] = BlankNode(f"{prefix}{n}")
    return BnodeAssignment(mapping, g)


def reify(t: Triple, id: BnodeAssignment) -> set[Triple]:
    """The four rdf:Statement triples describing the embedded triple ``t``."""
    b = id[t]
    return {
        Triple(b, RDF_TYPE, RDF_STATEMENT),
        Triple(b, RDF_SUBJECT, id.star(t.subject)),
        Triple(b, RDF_PREDICATE, t.predicate),
        Triple(b, RDF_OBJECT, id.star(t.object)),
    }


def _unfold_into(t: Triple, id: BnodeAssignment, out: set[Triple]) -> None:
    stack = [t]
    while stack:
        cur = stack.pop()
        s, p, o = cur.subject, cur.predicate, cur.object
        s_nested = type(s) is Triple
        o_nested = type(o) is Triple
        if not (s_nested or o_nested):
            out.add(cur)
            continue
        out.add(Triple(id[s] if s_nested else s, p, id[o] if o_nested else o))
        if s_nested:
            out |= reify(s, id)
            stack.append(s)
        if o_nested:
            out |= reify(o, id)
            stack.append(o)


def unfold_triple(t: Triple, id: BnodeAssignment) -> set[Triple]:
    out: set[Triple] = set()
    _unfold_into(t, id, out)
    return out


def unfold_graph(
    g: StarGraph, id: BnodeAssignment | None = None
) -> tuple[StarGraph, BnodeAssignment]:
    """Unfold every asserted triple of ``g`` with one shared assignment."""
    if id is None:
        id = make_bnode_assignment(g)
    out: set[Triple] = set()
    for t in g:
        _unfold_into(t, id, out)
    return StarGraph(out).freeze(), id

