"""Token kinds shared by the compiled and the pure-Python lexer.

A token is a tuple ``(kind, value, start, end)`` with character offsets.
Keep these numbers in sync with the enum in ``_clexer.pyx``.
"""

EOF = 0
IRIREF = 1      # value: IRI with \u escapes decoded
PNAME_NS = 2    # value: "prefix:"
PNAME_LN = 3    # value: "prefix:local" with \-escapes in the local part removed
BNODE = 4       # value: label
VAR = 5         # value: name without sigil
STRING = 6      # value: decoded content
LANGTAG = 7     # value: tag without '@'
INTEGER = 8
DECIMAL = 9
DOUBLE = 10
NAME = 11       # bare word: keywords, 'a', true/false
PUNCT = 12      # value: the punctuation itself

KIND_NAMES = {
    EOF: "end of input",
    IRIREF: "IRI",
    PNAME_NS: "prefix",
    PNAME_LN: "prefixed name",
    BNODE: "blank node",
    VAR: "variable",
    STRING: "string",
    LANGTAG: "language tag",
    INTEGER: "integer",
    DECIMAL: "decimal",
    DOUBLE: "double",
    NAME: "name",
    PUNCT: "punctuation",
}
