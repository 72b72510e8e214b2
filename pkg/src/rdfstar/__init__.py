"""RDF* and SPARQL*: nested triples, Turtle* I/O, unfolding to plain RDF, and query evaluation."""
from .engine import SolutionMultiset, evaluate
from .errors import (
    NestingDepthError,
    ParseError,
    PatternError,
    QuerySyntaxError,
    RdfStarError,
    ScopeError,
    TurtleSyntaxError,
    UnknownPrefixError,
    UnsupportedFeatureError,
)
from .graph import StarGraph, trefs
from .lexer import BACKEND
from .patterns import Solution, TriplePattern, Variable
from .reification import make_bnode_assignment, unfold_graph
from .sparql import execute_query, parse_query, run_query
from .terms import BlankNode, Iri, Literal, Triple
from .turtle import parse_turtlestar, serialize_ntriples, serialize_turtlestar

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlankNode",
    "Iri",
    "Literal",
    "NestingDepthError",
    "ParseError",
    "PatternError",
    "QuerySyntaxError",
    "RdfStarError",
    "ScopeError",
    "Solution",
    "SolutionMultiset",
    "StarGraph",
    "Triple",
    "TriplePattern",
    "TurtleSyntaxError",
    "UnknownPrefixError",
    "UnsupportedFeatureError",
    "Variable",
    "evaluate",
    "execute_query",
    "make_bnode_assignment",
    "parse_query",
    "parse_turtlestar",
    "run_query",
    "serialize_ntriples",
    "serialize_turtlestar",
    "trefs",
    "unfold_graph",
]
