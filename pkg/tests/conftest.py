import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

EX = "http://example.org/"
FOAF = "http://xmlns.com/foaf/0.1/"
DCT = "http://purl.org/dc/terms/"

EXAMPLE_PREFIXES = f"@prefix : <{EX}> .\n@prefix foaf: <{FOAF}> .\n@prefix dct: <{DCT}> .\n"
QUERY_PREFIXES = f"PREFIX : <{EX}>\nPREFIX foaf: <{FOAF}>\nPREFIX dct: <{DCT}>\n"

BOB_DATA = EXAMPLE_PREFIXES + """:bob foaf:name "Bob" .
<<:bob foaf:age 23>> dct:creator <http://example.com/crawlers#c1> ;
                     dct:source <http://example.net/homepage-listing.html> .
"""

BOB_QUERY_EMBEDDED = QUERY_PREFIXES + """SELECT ?age ?src WHERE {
   ?bob foaf:name "Bob" .
   <<?bob foaf:age ?age>> dct:source ?src .
}
"""

BOB_QUERY_BIND = QUERY_PREFIXES + """SELECT ?age ?src WHERE {
   ?bob foaf:name "Bob" .
   BIND( <<?bob foaf:age ?age>> AS ?t )
   ?t dct:source ?src .
}
"""

DEPTH2_DATA = f"@prefix : <{EX}> .\n<< <<:a :p :b>> :q :c >> :r :d .\n"


@pytest.fixture
def bob_graph():
    from rdfstar.turtle import parse_turtlestar

    return parse_turtlestar(BOB_DATA).graph


_acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
