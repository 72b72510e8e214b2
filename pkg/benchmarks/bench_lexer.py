"""Compare the compiled and pure-Python tokenizers, alone and inside a full parse.

    python benchmarks/bench_lexer.py [--triples N] [--repeat R]
"""
from __future__ import annotations

import argparse
import random
import timeit

from rdfstar import lexer
from rdfstar.turtle import parse_turtlestar


def make_document(n: int, seed: int = 7) -> str:
    rng = random.Random(seed)
    lines = ["@prefix ex: <http://example.org/> .", "@prefix dct: <http://purl.org/dc/terms/> ."]
    for i in range(n):
        s, o = f"ex:s{rng.randrange(n)}", f"ex:o{rng.randrange(n)}"
        kind = i % 4
        if kind == 0:
            lines.append(f'{s} ex:label "item {i} \\u00e9 \\"quoted\\""@en ; ex:count {rng.randrange(10**6)} .')
        elif kind == 1:
            lines.append(f"<<{s} ex:p {o}>> dct:source <http://example.net/page/{i}> .")
        elif kind == 2:
            lines.append(f"<< <<{s} ex:p {o}>> ex:q _:b{i} >> ex:r {rng.random():.4f} .")
        else:
            lines.append(f"{s} ex:knows {o}, <<{o} ex:p {s}>> . # comment {i}")
    return "\n".join(lines) + "\n"


def best(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--triples", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    doc = make_document(args.triples)
    print(f"document: {args.triples} statements, {len(doc) / 1e6:.2f} MB")
    if lexer.tokenize_c is None:
        print("compiled tokenizer not built; run `python setup.py build_ext --inplace`")
    else:
        assert lexer.tokenize_c(doc) == lexer.tokenize_py(doc), "backends disagree"

    rows = []
    for label, tok in (("python", lexer.tokenize_py), ("cython", lexer.tokenize_c)):
        if tok is None:
            continue
        t_tok = best(lambda: tok(doc), args.repeat)
        saved = lexer.tokenize
        lexer.tokenize = tok
        try:
            t_parse = best(lambda: parse_turtlestar(doc), args.repeat)
        finally:
            lexer.tokenize = saved
        rows.append((label, t_tok, t_parse))

    print(f"{'backend':<8} {'tokenize s':>11} {'MB/s':>7} {'full parse s':>13}")
    for label, t_tok, t_parse in rows:
        print(f"{label:<8} {t_tok:>11.4f} {len(doc) / 1e6 / t_tok:>7.1f} {t_parse:>13.4f}")
    if len(rows) == 2:
        (_, py_tok, py_parse), (_, c_tok, c_parse) = rows
        print(f"speedup: tokenize x{py_tok / c_tok:.1f}, full parse x{py_parse / c_parse:.2f}")


if __name__ == "__main__":
    main()
