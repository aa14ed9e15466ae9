"""Seeded random formulas, boxes and lexicons for experiments and tests."""
from __future__ import annotations

import random
from typing import Optional, Sequence

from .grammar import LGGrammar
from .structure import Box, Labeled, Tree, Variable
from .syntax import CONNECTIVES, Atom, Binary, Formula, Sign, SignedFormula
from .tableau import ALPHA, classify, expand_alpha

NL_CONNECTIVES = ("*", "/", "\\")
GRISHIN_CONNECTIVES = ("+", "o/", "o\\")


def random_formula(rng: random.Random, degree: int, atoms: Sequence[str] = ("p", "q", "r"),
                   connectives: Sequence[str] = CONNECTIVES) -> Formula:
    """A formula with exactly ``degree`` connectives, shape and labels drawn uniformly."""
    if degree == 0:
        return Atom(rng.choice(atoms))
    k = rng.randrange(degree)
    return Binary(rng.choice(connectives), random_formula(rng, k, atoms, connectives),
                  random_formula(rng, degree - 1 - k, atoms, connectives))


def random_formula_upto(rng: random.Random, max_degree: int, **kw) -> Formula:
    return random_formula(rng, rng.randint(0, max_degree), **kw)


def random_box(rng: random.Random, max_degree: int = 6, atoms: Sequence[str] = ("p", "q"),
               connectives: Sequence[str] = CONNECTIVES, max_steps: int = 3) -> Box:
    """A valid box obtained from a random two-formula box by a few alpha expansions.

    Alpha expansion keeps validity, so the result has a nontrivial tree
    whenever some alpha formula was available.
    """
    budget = rng.randint(1, max_degree)
    da = rng.randint(0, budget)
    a = random_formula(rng, da, atoms, connectives)
    b = random_formula(rng, budget - da, atoms, connectives)
    box = Box(Tree.single("x"), (Labeled("x", a, Sign.IN), Labeled("x", b, Sign.OUT)))
    counter = 0
    for _ in range(rng.randint(0, max_steps)):
        alphas = [i for i, e in enumerate(box.gamma) if classify(e).kind == ALPHA]
        if not alphas:
            break
        i = rng.choice(alphas)
        y, z = f"y{counter}", f"z{counter}"
        counter += 1
        box = expand_alpha(box, i, y, z)
    return box


def random_lexicon(rng: random.Random, n_words: int = 3, max_degree: int = 3,
                   atoms: Sequence[str] = ("np", "s"), grishin: bool = False,
                   max_entries: int = 2) -> LGGrammar:
    """Random grammar over words ``w1..wn`` with goal ``s^o``.

    With ``grishin`` set, at least one entry uses a coresiduated connective.
    """
    conns = CONNECTIVES if grishin else NL_CONNECTIVES
    lex = {}
    for k in range(n_words):
        entries = []
        for _ in range(rng.randint(1, max_entries)):
            f = random_formula_upto(rng, max_degree, atoms=atoms, connectives=conns)
            sign = rng.choice((Sign.IN, Sign.OUT)) if grishin else Sign.IN
            entries.append(SignedFormula(f, sign))
        lex[f"w{k + 1}"] = tuple(entries)
    if grishin and not any(_uses(sf.formula, GRISHIN_CONNECTIVES)
                           for es in lex.values() for sf in es):
        w = rng.choice(sorted(lex))
        f = Binary(rng.choice(GRISHIN_CONNECTIVES),
                   Atom(rng.choice(atoms)), Atom(rng.choice(atoms)))
        lex[w] = lex[w] + (SignedFormula(f, rng.choice((Sign.IN, Sign.OUT))),)
    return LGGrammar(lex, SignedFormula(Atom("s"), Sign.OUT))


def _uses(f: Formula, ops) -> bool:
    if isinstance(f, Atom):
        return False
    return f.op in ops or _uses(f.left, ops) or _uses(f.right, ops)


def uses_grishin(g: LGGrammar) -> bool:
    return any(_uses(sf.formula, GRISHIN_CONNECTIVES) for es in g.lexicon.values() for sf in es)


def interesting_lexicon(rng: random.Random, grishin: bool, min_accepted: int = 2,
                        max_len: int = 4, max_tries: int = 500, **kw) -> LGGrammar:
    """Rejection-sample :func:`random_lexicon` until the extracted grammar accepts
    at least ``min_accepted`` sentences of length 2 to ``max_len``."""
    import itertools

    from .grammar import cyk_recognize, extract_cfg

    best, best_count = None, -1
    for _ in range(max_tries):
        g = random_lexicon(rng, n_words=rng.randint(2, 4), grishin=grishin, **kw)
        if grishin and not uses_grishin(g):
            continue
        cfg = extract_cfg(g)
        words = sorted(g.words)
        count = sum(cyk_recognize(cfg, s) for n in range(2, max_len + 1)
                    for s in itertools.product(words, repeat=n))
        if count >= min_accepted:
            return g
        if count > best_count:
            best, best_count = g, count
    return best
