"""SPARQL* surface syntax: parsing, scope checking, expansion and translation.

Supported fragment: PREFIX/BASE, SELECT (variables or ``*``) with a WHERE
group made of triple blocks (with ``;`` and ``,``), embedded triple patterns
``<< s p o >>`` in subject/object position, BIND, FILTER with ``bound``,
``=``, ``!``, ``&&`` and ``||``, OPTIONAL, UNION and nested groups.
Anything else is rejected with :class:`UnsupportedFeatureError`.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import count
from typing import Union as TUnion

from . import lexer as lx
from .engine import (
    TR,
    BGPStar,
    Expression,
    Extend,
    Filter,
    Join,
    Opt,
    SolutionMultiset,
    Union,
    evaluate,
    project,
)
from .errors import (
    ParseError,
    PatternError,
    QuerySyntaxError,
    RdfStarError,
    ScopeError,
    ScopeViolation,
    SourcePosition,
    UnknownPrefixError,
    UnsupportedFeatureError,
)
from .graph import StarGraph
from .patterns import (
    And,
    Bound,
    EqualsConst,
    EqualsVars,
    FilterCondition,
    Not,
    Or,
    TriplePattern,
    Variable,
)
from .terms import (
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    BlankNode,
    Iri,
    Literal,
)
from .turtle import TermFormatter, _TokenStream, resolve_iri

# -- AST -----------------------------------------------------------------


def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VarNode:
    name: str
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class IriNode:
    value: str
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class PNameNode:
    prefix: str
    local: str
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class AKeyword:
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class LiteralNode:
    lexical: str
    language: str | None = None
    datatype: "IriNode | PNameNode | TermNode | None" = None
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class BNodeNode:
    label: str
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class TermNode:
    """An already expanded IRI or literal."""

    term: Iri | Literal
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class EmbTPNode:
    subject: "Node"
    predicate: "Node"
    object: "Node"
    pos: SourcePosition | None = _pos()


Node = TUnion[VarNode, IriNode, PNameNode, AKeyword, LiteralNode, BNodeNode, TermNode, EmbTPNode]


@dataclass(frozen=True)
class SubjectGroup:
    """``subject verb obj, obj ; verb obj ...`` before expansion, one triple after."""

    subject: Node
    properties: tuple  # tuple[(verb, tuple[objects])]
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class TriplesBlock:
    groups: tuple


@dataclass(frozen=True)
class BindNode:
    expr: Node
    var: VarNode
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class FBound:
    var: VarNode


@dataclass(frozen=True)
class FEquals:
    left: Node
    right: Node
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class FNot:
    cond: object


@dataclass(frozen=True)
class FOr:
    left: object
    right: object


@dataclass(frozen=True)
class FAnd:
    left: object
    right: object


@dataclass(frozen=True)
class FilterNode:
    cond: object
    pos: SourcePosition | None = _pos()


@dataclass(frozen=True)
class OptionalNode:
    group: "GroupNode"


@dataclass(frozen=True)
class UnionNode:
    groups: tuple


@dataclass(frozen=True)
class GroupNode:
    elements: tuple


@dataclass(frozen=True)
class QueryAst:
    select: tuple | None  # None means SELECT *
    where: GroupNode
    prefixes: dict = field(default_factory=dict, compare=False, hash=False)
    base: str | None = None


@dataclass
class ScopeReport:
    in_scope: list  # [(GroupNode, frozenset[str])]
    violations: list[ScopeViolation]


# -- parser --------------------------------------------------------------

_UNSUPPORTED_KEYWORDS = {
    "CONSTRUCT": "CONSTRUCT queries",
    "ASK": "ASK queries",
    "DESCRIBE": "DESCRIBE queries",
    "DISTINCT": "DISTINCT",
    "REDUCED": "REDUCED",
    "FROM": "FROM clauses (named graphs)",
    "GRAPH": "GRAPH patterns (named graphs)",
    "SERVICE": "SERVICE (federation)",
    "MINUS": "MINUS",
    "VALUES": "VALUES",
    "ORDER": "ORDER BY",
    "GROUP": "GROUP BY",
    "HAVING": "HAVING",
    "LIMIT": "LIMIT",
    "OFFSET": "OFFSET",
    "EXISTS": "EXISTS",
    "NOT": "NOT EXISTS",
    "INSERT": "SPARQL Update",
    "DELETE": "SPARQL Update",
}
_PATH_OPERATORS = {"/", "|", "*", "+", "?", "^", "!", "("}
_NUMERIC = {lx.INTEGER: XSD_INTEGER, lx.DECIMAL: XSD_DECIMAL, lx.DOUBLE: XSD_DOUBLE}


class QueryParser(_TokenStream):
    error_class = QuerySyntaxError

    def __init__(self, text: str):
        super().__init__(text)
        used = {t[1] for t in self.tokens if t[0] == lx.BNODE}
        self._fresh = (f"anon{n}" for n in count(1) if f"anon{n}" not in used)

    def keyword(self, tok=None) -> str | None:
        t = self.tok if tok is None else tok
        return t[1].upper() if t[0] == lx.NAME else None

    def unsupported(self, what: str, tok=None):
        return self.error(f"unsupported feature: {what}", tok, UnsupportedFeatureError)

    def expect_keyword(self, kw: str):
        if self.keyword() != kw:
            raise self.error(f"expected {kw}, found {lx.describe(self.tok)}")
        return self.advance()

    def parse(self) -> QueryAst:
        prefixes: dict[str, str] = {}
        base = None
        while True:
            kw = self.keyword()
            if kw == "PREFIX":
                self.advance()
                name = self.tok
                if name[0] != lx.PNAME_NS:
                    raise self.error(f"expected prefix name, found {lx.describe(name)}")
                self.advance()
                iri_tok = self.tok
                if iri_tok[0] != lx.IRIREF:
                    raise self.error(f"expected IRI, found {lx.describe(iri_tok)}")
                self.advance()
                prefixes[name[1][:-1]] = self._resolve(iri_tok, base)
            elif kw == "BASE":
                self.advance()
                iri_tok = self.tok
                if iri_tok[0] != lx.IRIREF:
                    raise self.error(f"expected IRI, found {lx.describe(iri_tok)}")
                self.advance()
                base = self._resolve(iri_tok, base)
            else:
                break
        kw = self.keyword()
        if kw in _UNSUPPORTED_KEYWORDS:
            raise self.unsupported(_UNSUPPORTED_KEYWORDS[kw])
        self.expect_keyword("SELECT")
        kw = self.keyword()
        if kw in ("DISTINCT", "REDUCED"):
            raise self.unsupported(kw)
        select: tuple | None
        if self.is_punct("*"):
            self.advance()
            select = None
        else:
            names = []
            while self.tok[0] == lx.VAR:
                t = self.advance()
                names.append(VarNode(t[1], self.position(t)))
            if self.is_punct("("):
                raise self.unsupported("SELECT expressions")
            if not names:
                raise self.error(f"expected variables or '*' after SELECT, found {lx.describe(self.tok)}")
            select = tuple(names)
        kw = self.keyword()
        if kw == "FROM":
            raise self.unsupported(_UNSUPPORTED_KEYWORDS[kw])
        if kw == "WHERE":
            self.advance()
        where = self.group()
        kw = self.keyword()
        if kw in _UNSUPPORTED_KEYWORDS:
            raise self.unsupported(_UNSUPPORTED_KEYWORDS[kw])
        if self.tok[0] != lx.EOF:
            raise self.error(f"unexpected {lx.describe(self.tok)} after the query")
        return QueryAst(select, where, prefixes, base)

    def _resolve(self, tok, base) -> str:
        try:
            return resolve_iri(tok[1], base)
        except ValueError as e:
            raise self.error(str(e), tok) from None

    # -- group graph patterns -------------------------------------------

    def group(self) -> GroupNode:
        open_tok = self.tok
        self.expect_punct("{", "'{'")
        if self.keyword() == "SELECT":
            raise self.unsupported("subqueries")
        elements: list = []
        while True:
            tok = self.tok
            if self.is_punct("}"):
                self.advance()
                return GroupNode(tuple(elements))
            if tok[0] == lx.EOF:
                raise self.error("unclosed '{' (missing '}')", open_tok)
            kw = self.keyword()
            if self.is_punct("{"):
                elements.append(self.group_or_union())
            elif kw == "OPTIONAL":
                self.advance()
                elements.append(OptionalNode(self.group()))
            elif kw == "FILTER":
                self.advance()
                elements.append(FilterNode(self.constraint(), self.position(tok)))
            elif kw == "BIND":
                self.advance()
                elements.append(self.bind(tok))
            elif kw in _UNSUPPORTED_KEYWORDS:
                raise self.unsupported(_UNSUPPORTED_KEYWORDS[kw])
            else:
                block = self.triples_block()
                if elements and isinstance(elements[-1], TriplesBlock):
                    elements[-1] = TriplesBlock(elements[-1].groups + block.groups)
                else:
                    elements.append(block)
                continue
            if self.is_punct("."):
                self.advance()

    def group_or_union(self):
        first = self.group()
        if self.keyword() != "UNION":
            return first
        groups = [first]
        while self.keyword() == "UNION":
            self.advance()
            groups.append(self.group())
        return UnionNode(tuple(groups))

    def triples_block(self) -> TriplesBlock:
        groups: list[SubjectGroup] = []
        while True:
            self.triples_same_subject(groups)
            if not self.is_punct("."):
                break
            self.advance()
            if not self._starts_triples():
                break
        return TriplesBlock(tuple(groups))

    def _starts_triples(self) -> bool:
        tok = self.tok
        if tok[0] in (lx.VAR, lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS, lx.BNODE, lx.STRING,
                      lx.INTEGER, lx.DECIMAL, lx.DOUBLE):
            return True
        if tok[0] == lx.NAME:
            return tok[1] in ("true", "false")
        return tok[0] == lx.PUNCT and tok[1] in ("<<", "[", "(")

    def triples_same_subject(self, out: list) -> None:
        tok = self.tok
        extra: list = []
        if self.is_punct("["):
            subject = self.bnode_property_list(extra)
            if not self._starts_verb():
                out.extend(extra)
                return
        else:
            subject = self.var_or_term(extra, "subject")
        props = self.property_list(extra)
        out.append(SubjectGroup(subject, props, self.position(tok)))
        out.extend(extra)

    def _starts_verb(self) -> bool:
        tok = self.tok
        return tok[0] in (lx.VAR, lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS) or (
            tok[0] == lx.NAME and tok[1] == "a"
        )

    def property_list(self, extra: list) -> tuple:
        props = []
        while True:
            verb = self.verb()
            objects = [self.object(extra)]
            while self.is_punct(","):
                self.advance()
                objects.append(self.object(extra))
            props.append((verb, tuple(objects)))
            if not self.is_punct(";"):
                break
            while self.is_punct(";"):
                self.advance()
            if not self._starts_verb():
                break
        return tuple(props)

    def verb(self):
        tok = self.tok
        if tok[0] == lx.PUNCT and tok[1] in _PATH_OPERATORS:
            raise self.unsupported("property paths", tok)
        if tok[0] == lx.VAR:
            self.advance()
            node = VarNode(tok[1], self.position(tok))
        elif tok[0] == lx.NAME and tok[1] == "a":
            self.advance()
            node = AKeyword(self.position(tok))
        elif tok[0] in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
            node = self.iri()
        elif self.is_punct("<<"):
            raise self.error("an embedded triple pattern cannot be used as a predicate")
        else:
            raise self.error(f"expected predicate, found {lx.describe(tok)}")
        nxt = self.tok
        if nxt[0] == lx.PUNCT and nxt[1] in _PATH_OPERATORS:
            raise self.unsupported("property paths (only a single IRI or variable predicate is allowed)", nxt)
        return node

    def object(self, extra: list):
        if self.is_punct("["):
            return self.bnode_property_list(extra)
        return self.var_or_term(extra, "object")

    def bnode_property_list(self, extra: list) -> BNodeNode:
        tok = self.advance()
        node = BNodeNode(next(self._fresh), self.position(tok))
        if self.is_punct("]"):
            self.advance()
            return node
        props = self.property_list(extra)
        self.expect_punct("]", "']'")
        extra.append(SubjectGroup(node, props, self.position(tok)))
        return node

    def var_or_term(self, extra: list, role: str):
        tok = self.tok
        kind = tok[0]
        if kind == lx.VAR:
            self.advance()
            return VarNode(tok[1], self.position(tok))
        if kind in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
            return self.iri()
        if kind == lx.BNODE:
            self.advance()
            return BNodeNode(tok[1], self.position(tok))
        if self.is_punct("<<"):
            return self.emb_tp()
        if self.is_punct("("):
            raise self.unsupported("collections in queries")
        lit = self.literal()
        if lit is not None:
            return lit
        raise self.error(f"expected {role}, found {lx.describe(tok)}")

    def emb_tp(self) -> EmbTPNode:
        open_tok = self.advance()
        s = self.emb_position("subject")
        p = self.verb()
        o = self.emb_position("object")
        if not self.is_punct(">>"):
            if self.tok[0] == lx.EOF:
                raise self.error("unclosed '<<' (missing '>>')", open_tok)
            raise self.error(f"expected '>>', found {lx.describe(self.tok)}")
        self.advance()
        return EmbTPNode(s, p, o, self.position(open_tok))

    def emb_position(self, role: str):
        tok = self.tok
        kind = tok[0]
        if kind == lx.VAR:
            self.advance()
            return VarNode(tok[1], self.position(tok))
        if kind in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
            return self.iri()
        if self.is_punct("<<"):
            return self.emb_tp()
        if kind == lx.BNODE or self.is_punct("["):
            raise self.error(f"blank nodes are not allowed inside embedded triple patterns ({role})")
        if self.is_punct("("):
            raise self.error("collections are not allowed inside embedded triple patterns")
        lit = self.literal()
        if lit is not None:
            return lit
        if kind == lx.EOF:
            raise self.error("unclosed '<<' (missing '>>')")
        raise self.error(f"expected embedded {role}, found {lx.describe(tok)}")

    def iri(self):
        tok = self.advance()
        pos = self.position(tok)
        if tok[0] == lx.IRIREF:
            return IriNode(tok[1], pos)
        prefix, _, local = tok[1].partition(":")
        return PNameNode(prefix, local, pos)

    def literal(self):
        tok = self.tok
        kind = tok[0]
        pos = self.position(tok)
        if kind == lx.STRING:
            self.advance()
            if self.tok[0] == lx.LANGTAG:
                lang = self.advance()
                return LiteralNode(tok[1], lang[1], None, pos)
            if self.is_punct("^^"):
                self.advance()
                if self.tok[0] not in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
                    raise self.error(f"expected datatype IRI, found {lx.describe(self.tok)}")
                return LiteralNode(tok[1], None, self.iri(), pos)
            return LiteralNode(tok[1], None, None, pos)
        if kind in _NUMERIC:
            self.advance()
            return LiteralNode(tok[1], None, TermNode(_NUMERIC[kind]), pos)
        if kind == lx.NAME and tok[1] in ("true", "false"):
            self.advance()
            return LiteralNode(tok[1], None, TermNode(XSD_BOOLEAN), pos)
        return None

    # -- BIND and FILTER ------------------------------------------------

    def bind(self, bind_tok) -> BindNode:
        self.expect_punct("(", "'(' after BIND")
        tok = self.tok
        if self.is_punct("<<"):
            expr = self.emb_tp()
        elif tok[0] == lx.VAR:
            self.advance()
            expr = VarNode(tok[1], self.position(tok))
        elif tok[0] in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
            expr = self.iri()
        else:
            expr = self.literal()
            if expr is None:
                raise self.unsupported("BIND expressions other than constants, variables and embedded triple patterns", tok)
        if self.keyword() != "AS":
            if self.tok[0] == lx.PUNCT or self.tok[0] == lx.NAME:
                raise self.unsupported("BIND expressions other than constants, variables and embedded triple patterns")
            raise self.error(f"expected AS, found {lx.describe(self.tok)}")
        self.advance()
        var_tok = self.tok
        if var_tok[0] != lx.VAR:
            raise self.error(f"expected variable after AS, found {lx.describe(var_tok)}")
        self.advance()
        self.expect_punct(")", "')' to close BIND")
        return BindNode(expr, VarNode(var_tok[1], self.position(var_tok)), self.position(bind_tok))

    def constraint(self):
        if self.is_punct("("):
            self.advance()
            cond = self.or_expr()
            self.expect_punct(")", "')' to close FILTER")
            return cond
        if self.keyword() == "BOUND":
            return self.primary()
        if self.tok[0] == lx.NAME:
            raise self.unsupported(f"function {self.tok[1]}()")
        raise self.error(f"expected '(' after FILTER, found {lx.describe(self.tok)}")

    def or_expr(self):
        cond = self.and_expr()
        while self.is_punct("||"):
            self.advance()
            cond = FOr(cond, self.and_expr())
        return cond

    def and_expr(self):
        cond = self.unary()
        while self.is_punct("&&"):
            self.advance()
            cond = FAnd(cond, self.unary())
        return cond

    def unary(self):
        if self.is_punct("!"):
            self.advance()
            return FNot(self.unary())
        return self.primary()

    def primary(self):
        tok = self.tok
        if self.is_punct("("):
            self.advance()
            cond = self.or_expr()
            self.expect_punct(")")
            return cond
        if self.keyword() == "BOUND":
            self.advance()
            self.expect_punct("(", "'(' after BOUND")
            var_tok = self.tok
            if var_tok[0] != lx.VAR:
                raise self.error(f"BOUND takes a variable, found {lx.describe(var_tok)}")
            self.advance()
            self.expect_punct(")")
            return FBound(VarNode(var_tok[1], self.position(var_tok)))
        left = self.operand()
        op = self.tok
        if self.is_punct("="):
            self.advance()
            right = self.operand()
            return FEquals(left, right, self.position(op))
        if op[0] == lx.PUNCT and op[1] in ("!=", "<", ">", "<=", ">=", "+", "-", "*", "/"):
            raise self.unsupported(f"operator {op[1]!r} in FILTER (use '=' with '!')", op)
        raise self.unsupported("FILTER expressions other than bound(), '=', '!', '&&' and '||'", tok)

    def operand(self):
        tok = self.tok
        if tok[0] == lx.VAR:
            self.advance()
            return VarNode(tok[1], self.position(tok))
        if tok[0] in (lx.IRIREF, lx.PNAME_LN, lx.PNAME_NS):
            return self.iri()
        lit = self.literal()
        if lit is not None:
            return lit
        if tok[0] == lx.NAME:
            raise self.unsupported(f"function {tok[1]}()", tok)
        if self.is_punct("<<"):
            raise self.unsupported("embedded triple patterns in FILTER", tok)
        raise self.error(f"expected variable or constant, found {lx.describe(tok)}")


def parse_query(text: str) -> QueryAst:
    return QueryParser(text).parse()


# -- scope ---------------------------------------------------------------


def node_variables(node) -> list[str]:
    """Variable names in a syntax node, including inside embedded patterns."""
    if isinstance(node, VarNode):
        return [node.name]
    if isinstance(node, EmbTPNode):
        return node_variables(node.subject) + node_variables(node.predicate) + node_variables(node.object)
    return []


def _element_variables(el) -> list[str]:
    out: list[str] = []
    if isinstance(el, TriplesBlock):
        for sg in el.groups:
            out += node_variables(sg.subject)
            for verb, objects in sg.properties:
                out += node_variables(verb)
                for o in objects:
                    out += node_variables(o)
    elif isinstance(el, BindNode):
        out += node_variables(el.expr)
        out.append(el.var.name)
    elif isinstance(el, OptionalNode):
        out += group_variables(el.group)
    elif isinstance(el, UnionNode):
        for g in el.groups:
            out += group_variables(g)
    elif isinstance(el, GroupNode):
        out += group_variables(el)
    return out


def group_variables(group: GroupNode) -> list[str]:
    """In-scope variables of a group in order of first occurrence."""
    seen: dict[str, None] = {}
    for el in group.elements:
        for v in _element_variables(el):
            seen.setdefault(v)
    return list(seen)


def check_scope(ast: QueryAst, raise_errors: bool = True) -> ScopeReport:
    """Check that no BIND target is already in scope where the BIND occurs."""
    report = ScopeReport([], [])

    def visit(group: GroupNode):
        in_scope: set[str] = set()
        for el in group.elements:
            if isinstance(el, BindNode) and el.var.name in in_scope:
                report.violations.append(
                    ScopeViolation(
                        el.var.name,
                        el.var.pos,
                        f"BIND target ?{el.var.name} is already in scope",
                    )
                )
            in_scope.update(_element_variables(el))
            if isinstance(el, OptionalNode):
                visit(el.group)
            elif isinstance(el, UnionNode):
                for g in el.groups:
                    visit(g)
            elif isinstance(el, GroupNode):
                visit(el)
        report.in_scope.append((group, frozenset(in_scope)))

    visit(ast.where)
    if raise_errors and report.violations:
        raise ScopeError(report.violations)
    return report


# -- expansion -----------------------------------------------------------


def expand_syntax(ast: QueryAst) -> QueryAst:
    """Expand prefixed names, 'a', relative IRIs and property/object lists."""
    prefixes, base = ast.prefixes, ast.base

    def iri_value(node) -> Iri:
        if isinstance(node, TermNode):
            return node.term
        if isinstance(node, PNameNode):
            ns = prefixes.get(node.prefix)
            if ns is None:
                raise UnknownPrefixError(f"undeclared prefix '{node.prefix}:'", node.pos)
            value = ns + node.local
        else:
            try:
                value = resolve_iri(node.value, base)
            except ValueError as e:
                raise QuerySyntaxError(str(e), node.pos) from None
        try:
            return Iri(value)
        except ValueError as e:
            raise QuerySyntaxError(str(e), node.pos) from None

    def term(node):
        if isinstance(node, (IriNode, PNameNode)):
            return TermNode(iri_value(node), node.pos)
        if isinstance(node, AKeyword):
            return TermNode(RDF_TYPE, node.pos)
        if isinstance(node, LiteralNode):
            try:
                if node.language is not None:
                    lit = Literal(node.lexical, language=node.language)
                elif node.datatype is not None:
                    lit = Literal(node.lexical, iri_value(node.datatype))
                else:
                    lit = Literal(node.lexical)
            except ValueError as e:
                raise QuerySyntaxError(str(e), node.pos) from None
            return TermNode(lit, node.pos)
        if isinstance(node, EmbTPNode):
            return EmbTPNode(term(node.subject), term(node.predicate), term(node.object), node.pos)
        return node

    def cond(c):
        if isinstance(c, FEquals):
            return FEquals(term(c.left), term(c.right), c.pos)
        if isinstance(c, FNot):
            return FNot(cond(c.cond))
        if isinstance(c, FOr):
            return FOr(cond(c.left), cond(c.right))
        if isinstance(c, FAnd):
            return FAnd(cond(c.left), cond(c.right))
        return c

    def element(el):
        if isinstance(el, TriplesBlock):
            flat = []
            for sg in el.groups:
                s = term(sg.subject)
                for verb, objects in sg.properties:
                    p = term(verb)
                    for o in objects:
                        flat.append(SubjectGroup(s, ((p, (term(o),)),), sg.pos))
            return TriplesBlock(tuple(flat))
        if isinstance(el, BindNode):
            return BindNode(term(el.expr), el.var, el.pos)
        if isinstance(el, FilterNode):
            return FilterNode(cond(el.cond), el.pos)
        if isinstance(el, OptionalNode):
            return OptionalNode(group(el.group))
        if isinstance(el, UnionNode):
            return UnionNode(tuple(group(g) for g in el.groups))
        if isinstance(el, GroupNode):
            return group(el)
        raise TypeError(f"unknown group element: {el!r}")

    def group(g: GroupNode) -> GroupNode:
        return GroupNode(tuple(element(el) for el in g.elements))

    return replace(ast, where=group(ast.where))


# -- translation ---------------------------------------------------------


def lift(node):
    """Convert a syntax node to a pattern term; embedded patterns become nested patterns."""
    if isinstance(node, EmbTPNode):
        try:
            return TriplePattern(lift(node.subject), lift(node.predicate), lift(node.object))
        except PatternError as e:
            raise QuerySyntaxError(str(e), node.pos) from None
    if isinstance(node, VarNode):
        return Variable(node.name)
    if isinstance(node, TermNode):
        return node.term
    if isinstance(node, BNodeNode):
        return BlankNode(node.label)
    raise QuerySyntaxError(f"cannot lift unexpanded syntax {node!r}; expand the query first", getattr(node, "pos", None))


def format_pattern_term(x, formatter: TermFormatter | None = None) -> str:
    """Render a pattern term in query syntax; nested patterns use ``<< >>``."""
    fmt = formatter or TermFormatter()
    if type(x) is Variable:
        return str(x)
    if type(x) is TriplePattern:
        return (
            f"<<{format_pattern_term(x.subject, fmt)} "
            f"{format_pattern_term(x.predicate, fmt)} {format_pattern_term(x.object, fmt)}>>"
        )
    return fmt.term(x)


def _condition(c) -> FilterCondition:
    if isinstance(c, FBound):
        return Bound(Variable(c.var.name))
    if isinstance(c, FNot):
        return Not(_condition(c.cond))
    if isinstance(c, FOr):
        return Or(_condition(c.left), _condition(c.right))
    if isinstance(c, FAnd):
        return And(_condition(c.left), _condition(c.right))
    if isinstance(c, FEquals):
        left, right = lift(c.left), lift(c.right)
        if type(left) is Variable and type(right) is Variable:
            return EqualsVars(left, right)
        if type(left) is Variable:
            return EqualsConst(left, right)
        if type(right) is Variable:
            return EqualsConst(right, left)
        raise UnsupportedFeatureError("unsupported feature: comparing two constants in FILTER", c.pos)
    raise TypeError(f"unknown filter condition: {c!r}")


def _join(a: Expression | None, b: Expression) -> Expression:
    return b if a is None else Join(a, b)


def translate_group(group: GroupNode) -> Expression:
    """Left-fold a group into an algebra expression.

    Consecutive triple blocks and BIND(<<...>> AS ?v) clauses only ever join,
    so each such run becomes the TR expressions joined with one BGP*.
    """
    acc: Expression | None = None
    filters: list[FilterCondition] = []
    run_patterns: list[TriplePattern] = []
    run_trs: list[Expression] = []

    def flush():
        nonlocal acc
        for tr in run_trs:
            acc = _join(acc, tr)
        if run_patterns:
            acc = _join(acc, BGPStar(run_patterns))
        run_trs.clear()
        run_patterns.clear()

    for el in group.elements:
        if isinstance(el, TriplesBlock):
            for sg in el.groups:
                s = lift(sg.subject)
                for verb, objects in sg.properties:
                    p = lift(verb)
                    for o in objects:
                        try:
                            run_patterns.append(TriplePattern(s, p, lift(o)))
                        except PatternError as e:
                            raise QuerySyntaxError(str(e), sg.pos) from None
        elif isinstance(el, BindNode) and isinstance(el.expr, EmbTPNode):
            run_trs.append(TR(lift(el.expr), Variable(el.var.name)))
        elif isinstance(el, FilterNode):
            filters.append(_condition(el.cond))
        elif isinstance(el, BindNode):
            flush()
            acc = Extend(acc if acc is not None else BGPStar(), Variable(el.var.name), lift(el.expr))
        elif isinstance(el, OptionalNode):
            flush()
            acc = Opt(acc if acc is not None else BGPStar(), translate_group(el.group))
        elif isinstance(el, UnionNode):
            flush()
            u = translate_group(el.groups[0])
            for g in el.groups[1:]:
                u = Union(u, translate_group(g))
            acc = _join(acc, u)
        elif isinstance(el, GroupNode):
            flush()
            acc = _join(acc, translate_group(el))
        else:
            raise TypeError(f"unknown group element: {el!r}")
    flush()
    if acc is None:
        acc = BGPStar()
    if filters:
        cond = filters[0]
        for f in filters[1:]:
            cond = And(cond, f)
        acc = Filter(acc, cond)
    return acc


def translate(ast: QueryAst) -> tuple[Expression, list[Variable]]:
    expr = translate_group(ast.where)
    if ast.select is None:
        names = group_variables(ast.where)
    else:
        names = list(dict.fromkeys(v.name for v in ast.select))
    return expr, [Variable(n) for n in names]


# -- pipeline ------------------------------------------------------------


@dataclass
class QueryResult:
    variables: list[Variable]
    solutions: SolutionMultiset
    prefixes: dict[str, str]


def _staged(stage: str, fn, *args):
    try:
        return fn(*args)
    except RdfStarError as e:
        if not hasattr(e, "stage"):
            e.stage = stage
        raise


def run_query(text: str, g: StarGraph) -> QueryResult:
    """Parse, scope-check, expand, translate, evaluate and project a query.

    Errors carry a ``stage`` attribute naming the step that failed.
    """
    ast = _staged("parse", parse_query, text)
    _staged("scope", check_scope, ast)
    ast = _staged("expand", expand_syntax, ast)
    expr, variables = _staged("translate", translate, ast)
    solutions = _staged("evaluate", evaluate, expr, g)
    return QueryResult(variables, project(solutions, variables), dict(ast.prefixes))


def execute_query(text: str, g: StarGraph) -> SolutionMultiset:
    return run_query(text, g).solutions


__all__ = [
    "QueryAst",
    "ScopeReport",
    "parse_query",
    "check_scope",
    "expand_syntax",
    "lift",
    "translate",
    "translate_group",
    "run_query",
    "execute_query",
    "ParseError",
]
