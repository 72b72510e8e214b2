# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled tokenizer for Turtle* and SPARQL*.

Same algorithm and output as ``_lexer_py.tokenize``; any change there must be
mirrored here (tests/test_lexer.py checks both agree).
"""
from rdfstar.errors import TokenizeError

cdef enum:
    EOF = 0
    IRIREF = 1
    PNAME_NS = 2
    PNAME_LN = 3
    BNODE = 4
    VAR = 5
    STRING = 6
    LANGTAG = 7
    INTEGER = 8
    DECIMAL = 9
    DOUBLE = 10
    NAME = 11
    PUNCT = 12


cdef inline bint is_digit(Py_UCS4 c):
    return c >= u'0' and c <= u'9'


cdef inline bint is_hex(Py_UCS4 c):
    return is_digit(c) or (c >= u'a' and c <= u'f') or (c >= u'A' and c <= u'F')


cdef inline bint is_alnum_ascii(Py_UCS4 c):
    return is_digit(c) or (c >= u'a' and c <= u'z') or (c >= u'A' and c <= u'Z')


cdef inline bint is_pn_chars_base(Py_UCS4 c):
    cdef unsigned int o = c
    if o < 0x80:
        return (c >= u'A' and c <= u'Z') or (c >= u'a' and c <= u'z')
    return (
        (0xC0 <= o <= 0xD6)
        or (0xD8 <= o <= 0xF6)
        or (0xF8 <= o <= 0x2FF)
        or (0x370 <= o <= 0x37D)
        or (0x37F <= o <= 0x1FFF)
        or (0x200C <= o <= 0x200D)
        or (0x2070 <= o <= 0x218F)
        or (0x2C00 <= o <= 0x2FEF)
        or (0x3001 <= o <= 0xD7FF)
        or (0xF900 <= o <= 0xFDCF)
        or (0xFDF0 <= o <= 0xFFFD)
        or (0x10000 <= o <= 0xEFFFF)
    )


cdef inline bint is_u(Py_UCS4 c):
    return c == u'_' or is_pn_chars_base(c)


cdef inline bint is_pn_chars(Py_UCS4 c):
    cdef unsigned int o = c
    if c == u'-' or is_digit(c) or is_u(c):
        return True
    return o == 0xB7 or (0x300 <= o <= 0x36F) or (0x203F <= o <= 0x2040)


cdef inline bint is_varname_char(Py_UCS4 c):
    return c != u'-' and is_pn_chars(c)


cdef inline bint is_iri_forbidden(Py_UCS4 c):
    return (c <= 0x20 or c == u'<' or c == u'>' or c == u'"' or c == u'{' or c == u'}'
            or c == u'|' or c == u'^' or c == u'`' or c == u'\\')


cdef inline bint is_local_esc(Py_UCS4 c):
    return c in u"_~.-!$&'()*+,;=/?#@%"


cdef Py_UCS4 read_hex(str text, Py_ssize_t i, int count, Py_ssize_t n) except? 0xFFFFFFFF:
    cdef unsigned long cp = 0
    cdef int k
    cdef Py_UCS4 d
    if i + count > n:
        raise TokenizeError("invalid unicode escape", i - 2)
    for k in range(count):
        d = text[i + k]
        if not is_hex(d):
            raise TokenizeError("invalid unicode escape", i - 2)
        if is_digit(d):
            cp = cp * 16 + (<unsigned long>d - 48)
        elif d >= 97:
            cp = cp * 16 + (<unsigned long>d - 87)
        else:
            cp = cp * 16 + (<unsigned long>d - 55)
    if cp > 0x10FFFF or (0xD800 <= cp <= 0xDFFF):
        raise TokenizeError("escape is not a valid code point", i - 2)
    return <Py_UCS4>cp


cdef tuple scan_iri(str text, Py_ssize_t i, Py_ssize_t n):
    cdef list buf = []
    cdef Py_UCS4 c
    cdef Py_ssize_t run = i
    while i < n:
        c = text[i]
        if c == u'>':
            buf.append(text[run:i])
            return "".join(buf), i + 1
        if c == u'\\':
            buf.append(text[run:i])
            if i + 1 < n and text[i + 1] == u'u':
                buf.append(chr(read_hex(text, i + 2, 4, n)))
                i += 6
            elif i + 1 < n and text[i + 1] == u'U':
                buf.append(chr(read_hex(text, i + 2, 8, n)))
                i += 10
            else:
                return None
            run = i
            continue
        if is_iri_forbidden(c):
            return None
        i += 1
    return None


cdef inline bint starts3(str text, Py_ssize_t i, Py_ssize_t n, Py_UCS4 q):
    return i + 2 < n and text[i] == q and text[i + 1] == q and text[i + 2] == q


cdef tuple scan_string(str text, Py_ssize_t i, Py_ssize_t n):
    cdef Py_UCS4 q = text[i]
    cdef Py_ssize_t start = i
    cdef bint long_ = starts3(text, i, n, q)
    cdef list buf = []
    cdef Py_UCS4 c, e
    cdef Py_ssize_t run
    i += 3 if long_ else 1
    run = i
    while True:
        if i >= n:
            raise TokenizeError("unterminated string", start)
        c = text[i]
        if c == q:
            if not long_:
                buf.append(text[run:i])
                return "".join(buf), i + 1
            if starts3(text, i, n, q):
                buf.append(text[run:i])
                return "".join(buf), i + 3
            i += 1
        elif c == u'\\':
            buf.append(text[run:i])
            if i + 1 >= n:
                raise TokenizeError("unterminated string", start)
            e = text[i + 1]
            if e == u'u':
                buf.append(chr(read_hex(text, i + 2, 4, n)))
                i += 6
            elif e == u'U':
                buf.append(chr(read_hex(text, i + 2, 8, n)))
                i += 10
            elif e == u't':
                buf.append("\t"); i += 2
            elif e == u'b':
                buf.append("\b"); i += 2
            elif e == u'n':
                buf.append("\n"); i += 2
            elif e == u'r':
                buf.append("\r"); i += 2
            elif e == u'f':
                buf.append("\f"); i += 2
            elif e == u'"' or e == u"'" or e == u'\\':
                buf.append(chr(e)); i += 2
            else:
                raise TokenizeError("invalid escape sequence", i)
            run = i
        elif (c == u'\n' or c == u'\r') and not long_:
            raise TokenizeError("line break in a short string", i)
        else:
            i += 1


cdef Py_ssize_t exp_len(str text, Py_ssize_t i, Py_ssize_t n):
    cdef Py_ssize_t j, k
    if i >= n or (text[i] != u'e' and text[i] != u'E'):
        return 0
    j = i + 1
    if j < n and (text[j] == u'+' or text[j] == u'-'):
        j += 1
    k = j
    while k < n and is_digit(text[k]):
        k += 1
    return k - i if k > j else 0


cdef tuple scan_number(str text, Py_ssize_t i, Py_ssize_t n):
    cdef Py_ssize_t start = i, j, e
    cdef int kind = INTEGER
    cdef bint has_int
    if text[i] == u'+' or text[i] == u'-':
        i += 1
    j = i
    while j < n and is_digit(text[j]):
        j += 1
    has_int = j > i
    if j < n and text[j] == u'.' and j + 1 < n and is_digit(text[j + 1]):
        j += 1
        while j < n and is_digit(text[j]):
            j += 1
        kind = DECIMAL
    elif has_int and j < n and text[j] == u'.' and exp_len(text, j + 1, n):
        j += 1
        kind = DECIMAL
    e = exp_len(text, j, n)
    if e:
        j += e
        kind = DOUBLE
    return kind, text[start:j], j


cdef tuple scan_local(str text, Py_ssize_t i, Py_ssize_t n):
    cdef list buf = []
    cdef Py_ssize_t last_good = i
    cdef Py_ssize_t good_len = 0
    cdef bint first = True
    cdef Py_UCS4 c
    while i < n:
        c = text[i]
        if c == u'%':
            if i + 2 < n and is_hex(text[i + 1]) and is_hex(text[i + 2]):
                buf.append(text[i:i + 3])
                i += 3
            else:
                raise TokenizeError("invalid percent escape in local name", i)
        elif c == u'\\':
            if i + 1 < n and is_local_esc(text[i + 1]):
                buf.append(chr(text[i + 1]))
                i += 2
            else:
                raise TokenizeError("invalid escape in local name", i)
        elif c == u':' or is_pn_chars(c) or (c == u'.' and not first):
            if first and c == u'-':
                break
            buf.append(chr(c))
            i += 1
            if c == u'.':
                first = False
                continue
        else:
            break
        first = False
        last_good = i
        good_len = len(buf)
    return "".join(buf[:good_len]), last_good


def tokenize(str text):
    cdef list tokens = []
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t i = 0, j, last, start, end
    cdef Py_UCS4 c, nxt, d
    cdef object scanned
    while True:
        while i < n:
            c = text[i]
            if c == u' ' or c == u'\t' or c == u'\n' or c == u'\r':
                i += 1
            elif c == u'#':
                while i < n and text[i] != u'\n' and text[i] != u'\r':
                    i += 1
            else:
                break
        if i >= n:
            tokens.append((EOF, "", n, n))
            return tokens
        c = text[i]
        start = i
        nxt = text[i + 1] if i + 1 < n else 0

        if c == u'<':
            if nxt == u'<':
                tokens.append((PUNCT, "<<", i, i + 2))
                i += 2
                continue
            scanned = scan_iri(text, i + 1, n)
            if scanned is not None:
                end = scanned[1]
                tokens.append((IRIREF, scanned[0], i, end))
                i = end
            elif nxt == u'=':
                tokens.append((PUNCT, "<=", i, i + 2))
                i += 2
            else:
                tokens.append((PUNCT, "<", i, i + 1))
                i += 1
        elif c == u'>':
            if nxt == u'>':
                tokens.append((PUNCT, ">>", i, i + 2))
                i += 2
            elif nxt == u'=':
                tokens.append((PUNCT, ">=", i, i + 2))
                i += 2
            else:
                tokens.append((PUNCT, ">", i, i + 1))
                i += 1
        elif c == u'"' or c == u"'":
            scanned = scan_string(text, i, n)
            i = scanned[1]
            tokens.append((STRING, scanned[0], start, i))
        elif is_digit(c) or (c == u'.' and is_digit(nxt)) or (
            (c == u'+' or c == u'-')
            and (is_digit(nxt) or (nxt == u'.' and i + 2 < n and is_digit(text[i + 2])))
        ):
            scanned = scan_number(text, i, n)
            i = scanned[2]
            tokens.append((scanned[0], scanned[1], start, i))
        elif c == u'?' or c == u'$':
            j = i + 1
            if j < n and (is_u(text[j]) or is_digit(text[j])):
                j += 1
                while j < n and is_varname_char(text[j]):
                    j += 1
                tokens.append((VAR, text[i + 1:j], i, j))
                i = j
            elif c == u'?':
                tokens.append((PUNCT, "?", i, i + 1))
                i += 1
            else:
                raise TokenizeError("'$' must start a variable name", i)
        elif c == u'@':
            j = i + 1
            while j < n and ((text[j] >= u'a' and text[j] <= u'z') or (text[j] >= u'A' and text[j] <= u'Z')):
                j += 1
            if j == i + 1:
                raise TokenizeError("'@' must be followed by a language tag or directive", i)
            while j + 1 < n and text[j] == u'-' and is_alnum_ascii(text[j + 1]):
                j += 2
                while j < n and is_alnum_ascii(text[j]):
                    j += 1
            tokens.append((LANGTAG, text[i + 1:j], i, j))
            i = j
        elif c == u'_' and nxt == u':':
            j = i + 2
            if j >= n or not (is_u(text[j]) or is_digit(text[j])):
                raise TokenizeError("invalid blank node label", i)
            j += 1
            last = j
            while j < n and (is_pn_chars(text[j]) or text[j] == u'.'):
                j += 1
                if text[j - 1] != u'.':
                    last = j
            tokens.append((BNODE, text[i + 2:last], i, last))
            i = last
        elif c == u':' or is_pn_chars_base(c):
            j = i
            last = i
            if c != u':':
                j = i + 1
                last = j
                while j < n and (is_pn_chars(text[j]) or text[j] == u'.'):
                    j += 1
                    if text[j - 1] != u'.':
                        last = j
            if last < n and text[last] == u':':
                scanned = scan_local(text, last + 1, n)
                end = scanned[1]
                if end == last + 1:
                    tokens.append((PNAME_NS, text[i:last + 1], i, end))
                else:
                    tokens.append((PNAME_LN, text[i:last + 1] + scanned[0], i, end))
                i = end
            else:
                j = i + 1
                while j < n and is_pn_chars(text[j]):
                    j += 1
                tokens.append((NAME, text[i:j], i, j))
                i = j
        elif c == u'^':
            if nxt == u'^':
                tokens.append((PUNCT, "^^", i, i + 2))
                i += 2
            else:
                tokens.append((PUNCT, "^", i, i + 1))
                i += 1
        elif c == u'!':
            if nxt == u'=':
                tokens.append((PUNCT, "!=", i, i + 2))
                i += 2
            else:
                tokens.append((PUNCT, "!", i, i + 1))
                i += 1
        elif c == u'&':
            if nxt != u'&':
                raise TokenizeError("unexpected '&'", i)
            tokens.append((PUNCT, "&&", i, i + 2))
            i += 2
        elif c == u'|':
            if nxt == u'|':
                tokens.append((PUNCT, "||", i, i + 2))
                i += 2
            else:
                tokens.append((PUNCT, "|", i, i + 1))
                i += 1
        elif c in u".;,[](){}*/=+-":
            tokens.append((PUNCT, chr(c), i, i + 1))
            i += 1
        else:
            raise TokenizeError(f"unexpected character {chr(c)!r}", i)
