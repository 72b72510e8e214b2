import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import EX, FOAF
from rdfstar.errors import IncompatibleMappingsError, PatternError
from rdfstar.patterns import (
    And,
    Bound,
    EqualsConst,
    EqualsVars,
    Not,
    Or,
    Solution,
    TriplePattern,
    Variable,
    apply,
    compatible,
    merge,
)
from rdfstar.terms import XSD_INTEGER, BlankNode, Iri, Literal, Triple
from strategies import NODES, VARIABLES, patterns

a, b, c = (Iri(EX + x) for x in "abc")
p, q = Iri(EX + "p"), Iri(EX + "q")
x, y, t = Variable("x"), Variable("y"), Variable("t")
bob, age = Iri(EX + "bob"), Iri(FOAF + "age")
n23 = Literal("23", XSD_INTEGER)

values = st.sampled_from(NODES + [Literal("1", XSD_INTEGER), Triple(a, p, b), Triple(a, p, c)])
solutions = st.dictionaries(st.sampled_from(VARIABLES), values, max_size=3).map(Solution)


class TestVariable:
    @pytest.mark.parametrize("name", ["", "a b", "?x", "-x"])
    def test_invalid(self, name):
        with pytest.raises(ValueError):
            Variable(name)

    def test_valid(self):
        assert str(Variable("_1é")) == "?_1é"


class TestTriplePattern:
    def test_bnode_in_nested_rejected(self):
        with pytest.raises(PatternError):
            TriplePattern(TriplePattern(BlankNode("b"), p, x), q, y)
        with pytest.raises(PatternError):
            TriplePattern(a, q, TriplePattern(x, p, BlankNode("b")))

    def test_top_level_bnode_allowed(self):
        tp = TriplePattern(BlankNode("b"), p, x)
        assert tp.blank_nodes() == {BlankNode("b")}

    def test_ground_nested_normalized(self):
        tp = TriplePattern(TriplePattern(a, p, b), q, x)
        assert tp.subject == Triple(a, p, b)

    def test_predicate_restricted(self):
        with pytest.raises(PatternError):
            TriplePattern(a, BlankNode("b"), c)
        with pytest.raises(PatternError):
            TriplePattern(a, Literal("x"), c)

    def test_literal_subject_admitted(self):
        TriplePattern(Literal("x"), p, a)

    def test_variables_at_all_levels(self):
        tp = TriplePattern(TriplePattern(TriplePattern(x, p, a), q, y), p, t)
        assert tp.variables() == {x, y, t}

    def test_to_triple(self):
        with pytest.raises(PatternError):
            TriplePattern(x, p, a).to_triple()
        assert TriplePattern(a, p, b).to_triple() == Triple(a, p, b)


class TestMappings:
    def test_compatible_examples(self):
        assert compatible(Solution({x: a}), Solution({y: b}))
        assert compatible(Solution({x: a}), Solution({x: a, y: b}))
        assert not compatible(Solution({t: Triple(a, p, b)}), Solution({t: Triple(a, p, c)}))

    def test_merge_examples(self):
        assert merge(Solution({x: a}), Solution()) == Solution({x: a})
        m = merge(Solution({x: a}), Solution({y: Triple(a, p, Literal("1", XSD_INTEGER))}))
        assert len(m) == 2

    def test_merge_incompatible(self):
        with pytest.raises(IncompatibleMappingsError):
            merge(Solution({x: a}), Solution({x: b}))

    def test_solution_rejects_bad_values(self):
        with pytest.raises(TypeError):
            Solution({x: "plain string"})

    @given(solutions, solutions)
    def test_compatible_symmetric(self, m1, m2):
        assert compatible(m1, m2) == compatible(m2, m1)
        assert compatible(m1, m1) and compatible(m1, Solution())

    @given(solutions, solutions)
    def test_merge_commutative(self, m1, m2):
        if compatible(m1, m2):
            assert merge(m1, m2) == merge(m2, m1)

    @given(solutions, solutions, solutions)
    def test_merge_associative(self, m1, m2, m3):
        if compatible(m1, m2) and compatible(m2, m3) and compatible(m1, m3):
            assert merge(merge(m1, m2), m3) == merge(m1, merge(m2, m3))


class TestApply:
    def test_example(self):
        eta = Solution({Variable("bob"): bob, Variable("age"): n23})
        got = apply(eta, TriplePattern(Variable("bob"), age, Variable("age")))
        assert got.to_triple() == Triple(bob, age, n23)

    def test_empty(self):
        tp = TriplePattern(x, p, y)
        assert apply(Solution(), tp) == tp

    def test_nested_positions(self):
        tp = TriplePattern(TriplePattern(x, p, b), q, y)
        got = apply(Solution({x: a, y: c}), tp)
        assert got == TriplePattern(Triple(a, p, b), q, c)

    def test_triple_value_substituted(self):
        got = apply(Solution({t: Triple(a, p, b)}), TriplePattern(t, q, y))
        assert got.subject == Triple(a, p, b)

    @given(solutions, patterns())
    def test_idempotent(self, eta, tp):
        eta = Solution({k: v for k, v in eta.items() if not (k in _predicate_vars(tp) and type(v) is not Iri)})
        once = apply(eta, tp)
        assert apply(eta, once) == once


def _predicate_vars(tp):
    out = set()
    if type(tp) is TriplePattern:
        if type(tp.predicate) is Variable:
            out.add(tp.predicate)
        out |= _predicate_vars(tp.subject) | _predicate_vars(tp.object)
    return out


class TestFilters:
    eta = Solution({x: a, y: a, t: n23})

    def test_six_forms(self):
        assert Bound(x).satisfied_by(self.eta)
        assert not Bound(Variable("z")).satisfied_by(self.eta)
        assert EqualsConst(t, n23).satisfied_by(self.eta)
        assert EqualsVars(x, y).satisfied_by(self.eta)
        assert Not(Bound(Variable("z"))).satisfied_by(self.eta)
        assert Or(Bound(Variable("z")), Bound(x)).satisfied_by(self.eta)
        assert not And(Bound(Variable("z")), Bound(x)).satisfied_by(self.eta)

    def test_unbound_comparisons_are_false(self):
        z = Variable("z")
        assert not EqualsConst(z, a).satisfied_by(self.eta)
        assert not EqualsVars(x, z).satisfied_by(self.eta)

    def test_constant_kind(self):
        with pytest.raises(PatternError):
            EqualsConst(x, BlankNode("b"))
