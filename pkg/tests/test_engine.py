import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BOB_DATA, DCT, EX, FOAF
from rdfstar.engine import (
    TR,
    BGPStar,
    Extend,
    Filter,
    Join,
    Opt,
    SolutionMultiset,
    Union,
    difference,
    eval_bgp,
    eval_tr,
    evaluate,
    join,
    left_outer_join,
    plan_bgp,
    project,
    selection,
    union,
)
from rdfstar.errors import PatternError
from rdfstar.graph import StarGraph
from rdfstar.patterns import (
    Bound,
    EqualsConst,
    Not,
    Solution,
    TriplePattern,
    Variable,
)
from rdfstar.terms import XSD_INTEGER, BlankNode, Iri, Literal, Triple
from rdfstar.turtle import parse_turtlestar
from strategies import NODES, VARIABLES, bgps, brute_force_bgp, graphs, naive_join

a, b, c, d = (Iri(EX + x) for x in "abcd")
p, q = Iri(EX + "p"), Iri(EX + "q")
x, y, z, t = (Variable(n) for n in ("x", "y", "z", "t"))
v_bob, v_age, v_src = Variable("bob"), Variable("age"), Variable("src")
bob, name, age = Iri(EX + "bob"), Iri(FOAF + "name"), Iri(FOAF + "age")
source = Iri(DCT + "source")
listing = Iri("http://example.net/homepage-listing.html")
n23 = Literal("23", XSD_INTEGER)

B_EX = [
    TriplePattern(v_bob, name, Literal("Bob")),
    TriplePattern(TriplePattern(v_bob, age, v_age), source, v_src),
]
ETA1 = Solution({v_bob: bob, v_age: n23, v_src: listing})


def G():
    return parse_turtlestar(BOB_DATA).graph


def ms(*pairs):
    return SolutionMultiset([(Solution(m), n) for m, n in pairs])


values = st.sampled_from(NODES[:3] + [Triple(a, p, b)])
mappings = st.dictionaries(st.sampled_from(VARIABLES), values, max_size=3).map(Solution)
multisets = st.dictionaries(mappings, st.integers(1, 3), max_size=5).map(SolutionMultiset)


class TestMultisetOps:
    def test_join_identity_and_zero(self):
        m = ms(({x: a}, 2), ({y: b}, 1))
        assert join(m, SolutionMultiset.unit()) == m
        assert join(m, SolutionMultiset()) == SolutionMultiset()

    def test_join_products(self):
        assert join(ms(({x: a}, 2)), ms(({y: b}, 3))) == ms(({x: a, y: b}, 6))

    def test_union(self):
        m1 = ms(({x: a}, 1))
        assert union(m1, SolutionMultiset()) == m1
        assert union(m1, ms(({x: a}, 2))) == ms(({x: a}, 3))
        assert union(m1, ms(({x: b}, 1))) == ms(({x: a}, 1), ({x: b}, 1))

    def test_difference(self):
        m1 = ms(({x: a}, 2), ({x: b}, 1))
        assert difference(m1, SolutionMultiset()) == m1
        assert difference(m1, SolutionMultiset.unit()) == SolutionMultiset()
        assert difference(ms(({x: a}, 2)), ms(({x: a}, 1))) == SolutionMultiset()
        assert difference(m1, ms(({x: a}, 5))) == ms(({x: b}, 1))

    def test_left_outer_join_examples(self):
        m1 = ms(({x: a}, 2))
        assert left_outer_join(m1, SolutionMultiset()) == m1
        m2 = ms(({x: a, y: b}, 1))
        assert left_outer_join(m1, m2) == join(m1, m2)

    def test_selection(self):
        m = SolutionMultiset({ETA1: 1})
        assert selection(m, Bound(v_age)) == m
        assert selection(m, EqualsConst(v_age, n23)) == m
        assert selection(m, Not(Bound(v_bob))) == SolutionMultiset()

    def test_project(self):
        m = ms(({x: a, y: b}, 1), ({x: a, y: c}, 1))
        assert project(m, [x]) == ms(({x: a}, 2))
        assert project(m, [x, y]) == m

    def test_negative_cardinality_rejected(self):
        with pytest.raises(ValueError):
            ms(({x: a}, -1))

    def test_rows_expand_cardinality(self):
        assert len(ms(({x: a}, 3)).rows()) == 3


class TestAlgebraProperties:
    @given(multisets, multisets)
    def test_join_matches_definition(self, m1, m2):
        assert dict(join(m1, m2).items()) == naive_join(dict(m1.items()), dict(m2.items()))

    @given(multisets, multisets)
    def test_commutative(self, m1, m2):
        assert join(m1, m2) == join(m2, m1)
        assert union(m1, m2) == union(m2, m1)

    @given(multisets, multisets, multisets)
    def test_associative(self, m1, m2, m3):
        assert join(join(m1, m2), m3) == join(m1, join(m2, m3))
        assert union(union(m1, m2), m3) == union(m1, union(m2, m3))

    @given(multisets, multisets)
    def test_left_outer_join_identity(self, m1, m2):
        assert left_outer_join(m1, m2) == union(join(m1, m2), difference(m1, m2))

    @given(multisets, multisets)
    def test_difference_definition(self, m1, m2):
        from rdfstar.patterns import compatible

        want = {e: n for e, n in m1.items() if not any(compatible(e, f) for f in m2)}
        assert dict(difference(m1, m2).items()) == want


class TestBGP:
    def test_bob_query_bgp(self):
        assert evaluate(BGPStar(B_EX), G()) == SolutionMultiset({ETA1: 1})

    def test_empty_bgp(self):
        assert eval_bgp([], G()) == SolutionMultiset.unit()

    def test_matches_embedded_only_triple(self):
        got = eval_bgp([TriplePattern(x, age, y)], G())
        assert got == ms(({x: bob, y: n23}, 1))

    def test_bnode_cardinality_counts_witnesses(self):
        g = StarGraph([Triple(a, p, b), Triple(a, p, c), Triple(d, p, b)]).freeze()
        got = eval_bgp([TriplePattern(x, p, BlankNode("w"))], g)
        assert got == ms(({x: a}, 2), ({x: d}, 1))

    def test_variable_matches_triple_value(self):
        g = StarGraph([Triple(Triple(a, p, b), q, c)]).freeze()
        assert eval_bgp([TriplePattern(x, q, c)], g) == ms(({x: Triple(a, p, b)}, 1))

    def test_literal_subject_never_matches(self):
        assert eval_bgp([TriplePattern(Literal("Bob"), name, x)], G()) == SolutionMultiset()

    def test_plan_prefers_bound_positions(self):
        g = G()
        order = plan_bgp(B_EX, g.index())
        assert set(order) == set(B_EX)

    @settings(max_examples=250)
    @given(graphs(), bgps())
    def test_oracle(self, g, bgp):
        got = eval_bgp(bgp, g)
        assert dict(got.items()) == brute_force_bgp(bgp, g)

    @given(graphs(), bgps(allow_bnode=False))
    def test_bnode_free_cardinality_one(self, g, bgp):
        assert all(n == 1 for _, n in eval_bgp(bgp, g).items())


class TestTR:
    def test_binds_triple(self):
        got = eval_tr(TriplePattern(v_bob, age, v_age), t, G())
        assert got == ms(({v_bob: bob, v_age: n23, t: Triple(bob, age, n23)}, 1))

    def test_no_match(self):
        assert eval_tr(TriplePattern(x, q, y), t, G()) == SolutionMultiset()

    def test_ground(self):
        got = eval_tr(TriplePattern(bob, age, n23), t, G())
        assert got == ms(({t: Triple(bob, age, n23)}, 1))

    def test_variable_in_pattern_rejected(self):
        with pytest.raises(PatternError):
            eval_tr(TriplePattern(t, age, y), t, G())

    def test_bnode_rejected(self):
        with pytest.raises(PatternError):
            eval_tr(TriplePattern(BlankNode("b"), age, y), t, G())


class TestEvaluate:
    P_EX2 = Join(
        TR(TriplePattern(v_bob, age, v_age), t),
        BGPStar([TriplePattern(v_bob, name, Literal("Bob")), TriplePattern(t, source, v_src)]),
    )

    def test_p_ex2(self):
        got = evaluate(self.P_EX2, G())
        (eta,) = got.solutions()
        assert eta[t] == Triple(bob, age, n23) and got.card(eta) == 1
        assert project(got, [v_age, v_src]) == project(evaluate(BGPStar(B_EX), G()), [v_age, v_src])

    def test_union_doubles(self):
        e = BGPStar([TriplePattern(x, y, z)])
        single = evaluate(e, G())
        doubled = evaluate(Union(e, e), G())
        assert {k: 2 * n for k, n in single.items()} == dict(doubled.items())

    def test_opt_keeps_unmatched(self):
        e = Opt(BGPStar(B_EX), BGPStar([TriplePattern(v_bob, Iri(EX + "nothing"), z)]))
        assert evaluate(e, G()) == SolutionMultiset({ETA1: 1})

    def test_filter(self):
        e = Filter(BGPStar(B_EX), EqualsConst(v_age, n23))
        assert evaluate(e, G()) == SolutionMultiset({ETA1: 1})

    def test_extend(self):
        e = Extend(BGPStar(B_EX), z, a)
        (eta,) = evaluate(e, G()).solutions()
        assert eta[z] == a
        e = Extend(BGPStar(B_EX), z, v_age)
        (eta,) = evaluate(e, G()).solutions()
        assert eta[z] == n23

    def test_not_an_expression(self):
        with pytest.raises(TypeError):
            evaluate("nope", G())
