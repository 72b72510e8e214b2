"""RDF* graphs and the lookup index used by the query engine."""
from __future__ import annotations

from typing import Iterable, Iterator

from .terms import BlankNode, Triple, embedded_triples, sort_key, terms_plus_triple


class StarGraph:
    """A set of asserted RDF* triples plus the derived set of embedded triples.

    A graph is mutable until :meth:`freeze` is called. Frozen graphs reject
    :meth:`add`; use :func:`graph_insert` to derive a new graph instead.
    """

    __slots__ = ("_triples", "_embedded", "_frozen", "_index")

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        # embedded triple -> number of asserted triples that mention it
        self._embedded: dict[Triple, int] = {}
        self._frozen = False
        self._index: TripleIndex | None = None
        for t in triples:
            self.add(t)

    def add(self, t: Triple) -> None:
        if self._frozen:
            raise TypeError("graph is frozen")
        if type(t) is not Triple:
            raise TypeError(f"not a triple: {t!r}")
        if t in self._triples:
            return
        self._triples.add(t)
        if t.depth:
            emb = self._embedded
            for e in set(embedded_triples(t)):
                emb[e] = emb.get(e, 0) + 1

    def freeze(self) -> "StarGraph":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    @property
    def embedded(self) -> frozenset[Triple]:
        """trefs(G): every triple embedded at any depth in an asserted triple."""
        return frozenset(self._embedded)

    def copy(self) -> "StarGraph":
        g = StarGraph()
        g._triples = set(self._triples)
        g._embedded = dict(self._embedded)
        return g

    def index(self) -> "TripleIndex":
        """Index over asserted and embedded triples. Only available once frozen."""
        if not self._frozen:
            raise TypeError("freeze the graph before indexing it")
        if self._index is None:
            self._index = TripleIndex(self._triples, self._embedded)
        return self._index

    def sorted(self) -> list[Triple]:
        return sorted(self._triples, key=sort_key)

    def blank_nodes(self) -> set[BlankNode]:
        return {x for x in terms_plus_graph(self) if type(x) is BlankNode}

    def __contains__(self, t) -> bool:
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __eq__(self, other) -> bool:
        if isinstance(other, StarGraph):
            return self._triples == other._triples
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<StarGraph {len(self._triples)} triples, {len(self._embedded)} embedded>"


def terms_plus_graph(g: Iterable[Triple]) -> set:
    out: set = set()
    for t in g:
        out |= terms_plus_triple(t)
    return out


def trefs(g: StarGraph) -> frozenset[Triple]:
    return g.embedded


def graph_insert(g: StarGraph, t: Triple) -> StarGraph:
    """Return ``g`` with ``t`` added, leaving ``g`` itself untouched."""
    if t in g:
        return g
    out = g.copy()
    out.add(t)
    if g.frozen:
        out.freeze()
    return out


class TripleIndex:
    """SPO/POS/OSP index over ``G ∪ trefs(G)``.

    Leaves hold the triple objects themselves, so lookups never rebuild
    triples. ``asserted`` tells whether a matched triple is in G proper.
    """

    __slots__ = ("spo", "pos", "osp", "triples", "asserted")

    def __init__(self, asserted: Iterable[Triple], embedded: Iterable[Triple]):
        self.asserted = frozenset(asserted)
        self.triples = self.asserted | frozenset(embedded)
        spo: dict = {}
        pos: dict = {}
        osp: dict = {}
        for t in self.triples:
            s, p, o = t.subject, t.predicate, t.object
            spo.setdefault(s, {}).setdefault(p, {})[o] = t
            pos.setdefault(p, {}).setdefault(o, {})[s] = t
            osp.setdefault(o, {}).setdefault(s, {})[p] = t
        self.spo, self.pos, self.osp = spo, pos, osp

    def __len__(self) -> int:
        return len(self.triples)

    def match(self, s=None, p=None, o=None) -> Iterable[Triple]:
        """Triples matching the given positions; ``None`` is a wildcard."""
        if s is not None:
            by_p = self.spo.get(s)
            if by_p is None:
                return ()
            if p is not None:
                by_o = by_p.get(p)
                if by_o is None:
                    return ()
                if o is not None:
                    t = by_o.get(o)
                    return () if t is None else (t,)
                return by_o.values()
            if o is not None:
                by_p2 = self.osp.get(o, {}).get(s)
                return () if by_p2 is None else by_p2.values()
            return [t for by_o in by_p.values() for t in by_o.values()]
        if p is not None:
            by_o = self.pos.get(p)
            if by_o is None:
                return ()
            if o is not None:
                by_s = by_o.get(o)
                return () if by_s is None else by_s.values()
            return [t for by_s in by_o.values() for t in by_s.values()]
        if o is not None:
            by_s = self.osp.get(o)
            if by_s is None:
                return ()
            return [t for by_p in by_s.values() for t in by_p.values()]
        return self.triples

    def estimate(self, s=None, p=None, o=None) -> int:
        """Cheap upper bound on the number of matches."""
        if s is not None:
            by_p = self.spo.get(s)
            if by_p is None:
                return 0
            if p is not None:
                return len(by_p.get(p, ()))
            return sum(len(x) for x in by_p.values())
        if p is not None:
            by_o = self.pos.get(p)
            if by_o is None:
                return 0
            if o is not None:
                return len(by_o.get(o, ()))
            return sum(len(x) for x in by_o.values())
        if o is not None:
            return sum(len(x) for x in self.osp.get(o, {}).values())
        return len(self.triples)
