"""Tokenizer front end: picks the compiled kernel when it is importable.

Set ``RDFSTAR_PURE_PYTHON=1`` to force the pure-Python implementation.
"""
from __future__ import annotations

import os

from . import _lexer_py
from ._tokens import *  # noqa: F401,F403
from ._tokens import KIND_NAMES

tokenize_py = _lexer_py.tokenize
tokenize_c = None

if not os.environ.get("RDFSTAR_PURE_PYTHON"):
    try:
        from ._clexer import tokenize as tokenize_c
    except ImportError:
        tokenize_c = None

BACKEND = "cython" if tokenize_c is not None else "python"
tokenize = tokenize_c if tokenize_c is not None else tokenize_py


def describe(tok) -> str:
    kind, value = tok[0], tok[1]
    if kind == 0:
        return "end of input"
    if kind == 12:
        return repr(value)
    return f"{KIND_NAMES[kind]} {value!r}"
