"""Pure-Python tokenizer for Turtle* and SPARQL*.

This is the fallback used when the compiled ``_clexer`` extension is not
available. Both implementations must produce identical token lists and raise
:class:`TokenizeError` at identical offsets.
"""
from __future__ import annotations

from ._tokens import (
    BNODE, DECIMAL, DOUBLE, EOF, INTEGER, IRIREF, LANGTAG, NAME, PNAME_LN,
    PNAME_NS, PUNCT, STRING, VAR,
)
from .errors import TokenizeError

_HEX = frozenset("0123456789abcdefABCDEF")
_IRI_FORBIDDEN = frozenset('<>"{}|^`\\')
_LOCAL_ESC = frozenset("_~.-!$&'()*+,;=/?#@%")
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_SINGLE_PUNCT = frozenset(".;,[](){}*/=+-")


def is_pn_chars_base(c: str) -> bool:
    o = ord(c)
    if o < 0x80:
        return ("A" <= c <= "Z") or ("a" <= c <= "z")
    return (
        0xC0 <= o <= 0xD6
        or 0xD8 <= o <= 0xF6
        or 0xF8 <= o <= 0x2FF
        or 0x370 <= o <= 0x37D
        or 0x37F <= o <= 0x1FFF
        or 0x200C <= o <= 0x200D
        or 0x2070 <= o <= 0x218F
        or 0x2C00 <= o <= 0x2FEF
        or 0x3001 <= o <= 0xD7FF
        or 0xF900 <= o <= 0xFDCF
        or 0xFDF0 <= o <= 0xFFFD
        or 0x10000 <= o <= 0xEFFFF
    )


def _is_u(c: str) -> bool:
    return c == "_" or is_pn_chars_base(c)


def _is_pn_chars(c: str) -> bool:
    if c == "-" or "0" <= c <= "9" or _is_u(c):
        return True
    o = ord(c)
    return o == 0xB7 or 0x300 <= o <= 0x36F or 0x203F <= o <= 0x2040


def _is_varname_char(c: str) -> bool:
    return c != "-" and _is_pn_chars(c)


def _read_hex(text: str, i: int, count: int) -> int:
    digits = text[i:i + count]
    if len(digits) != count or any(d not in _HEX for d in digits):
        raise TokenizeError("invalid unicode escape", i - 2)
    cp = int(digits, 16)
    if cp > 0x10FFFF or 0xD800 <= cp <= 0xDFFF:
        raise TokenizeError("escape is not a valid code point", i - 2)
    return cp


def _scan_iri(text: str, i: int, n: int):
    """Try to scan an IRIREF starting after '<' at ``i``. Returns (value, end) or None."""
    buf = []
    while i < n:
        c = text[i]
        if c == ">":
            return "".join(buf), i + 1
        if c == "\\":
            if i + 1 < n and text[i + 1] == "u":
                buf.append(chr(_read_hex(text, i + 2, 4)))
                i += 6
                continue
            if i + 1 < n and text[i + 1] == "U":
                buf.append(chr(_read_hex(text, i + 2, 8)))
                i += 10
                continue
            return None
        if ord(c) <= 0x20 or c in _IRI_FORBIDDEN:
            return None
        buf.append(c)
        i += 1
    return None


def _scan_string(text: str, i: int, n: int):
    q = text[i]
    start = i
    long = text.startswith(q * 3, i)
    i += 3 if long else 1
    buf = []
    while True:
        if i >= n:
            raise TokenizeError("unterminated string", start)
        c = text[i]
        if c == q:
            if not long:
                return "".join(buf), i + 1
            if text.startswith(q * 3, i):
                return "".join(buf), i + 3
            buf.append(c)
            i += 1
        elif c == "\\":
            if i + 1 >= n:
                raise TokenizeError("unterminated string", start)
            e = text[i + 1]
            if e == "u":
                buf.append(chr(_read_hex(text, i + 2, 4)))
                i += 6
            elif e == "U":
                buf.append(chr(_read_hex(text, i + 2, 8)))
                i += 10
            elif e in _ECHAR:
                buf.append(_ECHAR[e])
                i += 2
            else:
                raise TokenizeError("invalid escape sequence", i)
        elif (c == "\n" or c == "\r") and not long:
            raise TokenizeError("line break in a short string", i)
        else:
            buf.append(c)
            i += 1


def _scan_number(text: str, i: int, n: int):
    start = i
    if text[i] in "+-":
        i += 1
    j = i
    while j < n and "0" <= text[j] <= "9":
        j += 1
    has_int = j > i
    kind = INTEGER
    if j < n and text[j] == "." and j + 1 < n and "0" <= text[j + 1] <= "9":
        j += 1
        while j < n and "0" <= text[j] <= "9":
            j += 1
        kind = DECIMAL
    elif has_int and j < n and text[j] == "." and _exp_len(text, j + 1, n):
        j += 1
        kind = DECIMAL
    e = _exp_len(text, j, n)
    if e:
        j += e
        kind = DOUBLE
    return kind, text[start:j], j


def _exp_len(text: str, i: int, n: int) -> int:
    if i >= n or text[i] not in "eE":
        return 0
    j = i + 1
    if j < n and text[j] in "+-":
        j += 1
    k = j
    while k < n and "0" <= text[k] <= "9":
        k += 1
    return k - i if k > j else 0


def _scan_local(text: str, i: int, n: int):
    """Scan PN_LOCAL from ``i``. Returns (unescaped local, end)."""
    buf = []
    last_good = i
    good_len = 0
    first = True
    while i < n:
        c = text[i]
        if c == "%":
            if i + 2 < n and text[i + 1] in _HEX and text[i + 2] in _HEX:
                buf.append(text[i:i + 3])
                i += 3
            else:
                raise TokenizeError("invalid percent escape in local name", i)
        elif c == "\\":
            if i + 1 < n and text[i + 1] in _LOCAL_ESC:
                buf.append(text[i + 1])
                i += 2
            else:
                raise TokenizeError("invalid escape in local name", i)
        elif c == ":" or _is_pn_chars(c) or (c == "." and not first):
            if first and c == "-":
                break
            buf.append(c)
            i += 1
            if c == ".":
                first = False
                continue
        else:
            break
        first = False
        last_good = i
        good_len = len(buf)
    return "".join(buf[:good_len]), last_good


def tokenize(text: str) -> list:
    tokens = []
    append = tokens.append
    n = len(text)
    i = 0
    while True:
        while i < n:
            c = text[i]
            if c == " " or c == "\t" or c == "\n" or c == "\r":
                i += 1
            elif c == "#":
                while i < n and text[i] != "\n" and text[i] != "\r":
                    i += 1
            else:
                break
        if i >= n:
            append((EOF, "", n, n))
            return tokens
        c = text[i]
        start = i
        nxt = text[i + 1] if i + 1 < n else ""

        if c == "<":
            if nxt == "<":
                append((PUNCT, "<<", i, i + 2))
                i += 2
                continue
            scanned = _scan_iri(text, i + 1, n)
            if scanned is not None:
                append((IRIREF, scanned[0], i, scanned[1]))
                i = scanned[1]
            elif nxt == "=":
                append((PUNCT, "<=", i, i + 2))
                i += 2
            else:
                append((PUNCT, "<", i, i + 1))
                i += 1
        elif c == ">":
            if nxt == ">" or nxt == "=":
                append((PUNCT, c + nxt, i, i + 2))
                i += 2
            else:
                append((PUNCT, ">", i, i + 1))
                i += 1
        elif c == '"' or c == "'":
            value, i = _scan_string(text, i, n)
            append((STRING, value, start, i))
        elif "0" <= c <= "9" or (c == "." and "0" <= nxt <= "9") or (
            (c == "+" or c == "-")
            and ("0" <= nxt <= "9" or (nxt == "." and i + 2 < n and "0" <= text[i + 2] <= "9"))
        ):
            kind, value, i = _scan_number(text, i, n)
            append((kind, value, start, i))
        elif c == "?" or c == "$":
            j = i + 1
            if j < n and (_is_u(text[j]) or "0" <= text[j] <= "9"):
                j += 1
                while j < n and _is_varname_char(text[j]):
                    j += 1
                append((VAR, text[i + 1:j], i, j))
                i = j
            elif c == "?":
                append((PUNCT, "?", i, i + 1))
                i += 1
            else:
                raise TokenizeError("'$' must start a variable name", i)
        elif c == "@":
            j = i + 1
            while j < n and ("a" <= text[j] <= "z" or "A" <= text[j] <= "Z"):
                j += 1
            if j == i + 1:
                raise TokenizeError("'@' must be followed by a language tag or directive", i)
            while j + 1 < n and text[j] == "-" and text[j + 1].isascii() and text[j + 1].isalnum():
                j += 2
                while j < n and text[j].isascii() and text[j].isalnum():
                    j += 1
            append((LANGTAG, text[i + 1:j], i, j))
            i = j
        elif c == "_" and nxt == ":":
            j = i + 2
            if j >= n or not (_is_u(text[j]) or "0" <= text[j] <= "9"):
                raise TokenizeError("invalid blank node label", i)
            j += 1
            last = j
            while j < n and (_is_pn_chars(text[j]) or text[j] == "."):
                j += 1
                if text[j - 1] != ".":
                    last = j
            append((BNODE, text[i + 2:last], i, last))
            i = last
        elif c == ":" or is_pn_chars_base(c):
            # prefix candidate: PN_CHARS_BASE ((PN_CHARS|'.')* PN_CHARS)?
            j = i
            last = i
            if c != ":":
                j = i + 1
                last = j
                while j < n and (_is_pn_chars(text[j]) or text[j] == "."):
                    j += 1
                    if text[j - 1] != ".":
                        last = j
            if last < n and text[last] == ":":
                local, end = _scan_local(text, last + 1, n)
                if end == last + 1:
                    append((PNAME_NS, text[i:last + 1], i, end))
                else:
                    append((PNAME_LN, text[i:last + 1] + local, i, end))
                i = end
            else:
                j = i + 1
                while j < n and _is_pn_chars(text[j]):
                    j += 1
                append((NAME, text[i:j], i, j))
                i = j
        elif c == "^":
            if nxt == "^":
                append((PUNCT, "^^", i, i + 2))
                i += 2
            else:
                append((PUNCT, "^", i, i + 1))
                i += 1
        elif c == "!":
            if nxt == "=":
                append((PUNCT, "!=", i, i + 2))
                i += 2
            else:
                append((PUNCT, "!", i, i + 1))
                i += 1
        elif c == "&":
            if nxt != "&":
                raise TokenizeError("unexpected '&'", i)
            append((PUNCT, "&&", i, i + 2))
            i += 2
        elif c == "|":
            if nxt == "|":
                append((PUNCT, "||", i, i + 2))
                i += 2
            else:
                append((PUNCT, "|", i, i + 1))
                i += 1
        elif c in _SINGLE_PUNCT:
            append((PUNCT, c, i, i + 1))
            i += 1
        else:
            raise TokenizeError(f"unexpected character {c!r}", i)
