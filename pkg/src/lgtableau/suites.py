"""Seeded experiment suites shared by the acceptance tests and scripts.

Each suite records the proofs it finds in a :class:`Harvest`, so that the
soundness and conservativity sweeps can run over everything found.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .checker import proof_problems
from .grammar import DirectRecognizer, LGGrammar, cyk_recognize, extract_cfg
from .generators import (
    NL_CONNECTIVES, interesting_lexicon, random_box, random_formula, random_formula_upto,
    uses_grishin,
)
from .semantics import check_sequent, random_model
from .structure import Box, Family, FreshSupply, Tree, rename_box, rotate_box, validate_box
from .syntax import Atom, Binary, Formula, Sign, subformula_closure
from .tableau import Prover, prove
from .transform import interpolate, bivalence, rotate_proof, transitivity

ATOMS = ("p", "q", "r")


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 2024
    identities: int = 500
    identity_degree: int = 4
    triples: int = 300
    triple_degree: int = 2
    cut_pairs: int = 100
    boxes: int = 200
    box_degree: int = 6
    nonprovable: int = 200
    sequent_degree: int = 4
    models: int = 500
    max_model_size: int = 4
    interpolations: int = 100
    lexicons: int = 10
    grishin_every: int = 2      # every k-th lexicon uses the coresiduated family
    sentence_length: int = 4


@dataclass
class Harvest:
    """Proofs of two-formula sequents ``A |- B`` and of general boxes."""
    sequents: dict = field(default_factory=dict)
    boxes: dict = field(default_factory=dict)

    def add_sequent(self, a: Formula, b: Formula, proof) -> None:
        self.sequents.setdefault((a, b), proof)

    def add_box(self, b: Box, proof) -> None:
        self.boxes.setdefault(b, proof)

    def all_proofs(self):
        yield from self.sequents.values()
        yield from self.boxes.values()


def _rng(cfg: SuiteConfig, salt: str) -> random.Random:
    return random.Random(f"{cfg.seed}:{salt}")


# --------------------------------------------------------------- identities

def identity_suite(cfg: SuiteConfig, prover: Prover, harvest: Harvest) -> list:
    """Formulas for which ``A |- A`` failed (should be empty)."""
    rng = _rng(cfg, "identity")
    failures = []
    for _ in range(cfg.identities):
        a = random_formula_upto(rng, cfg.identity_degree, atoms=ATOMS)
        p = prover.prove(_seq(a, a))
        if p:
            harvest.add_sequent(a, a, p)
        else:
            failures.append(a)
    return failures


def _seq(a: Formula, b: Formula) -> Box:
    from .structure import sequent_box
    return sequent_box(a, b)


# ------------------------------------------------------- (co)residuation

def shift_family(a: Formula, b: Formula, c: Formula) -> dict:
    """The six sequents related by residuation and coresiduation, keyed by name."""
    return {
        "A*B|-C": (Binary("*", a, b), c),
        "A|-C/B": (a, Binary("/", c, b)),
        "B|-A\\C": (b, Binary("\\", a, c)),
        "C|-A+B": (c, Binary("+", a, b)),
        "Co/B|-A": (Binary("o/", c, b), a),
        "Ao\\C|-B": (Binary("o\\", a, c), b),
    }


SHIFT_PAIRS = (
    ("A*B|-C", "A|-C/B"), ("A*B|-C", "B|-A\\C"), ("A|-C/B", "B|-A\\C"),
    ("C|-A+B", "Co/B|-A"), ("C|-A+B", "Ao\\C|-B"), ("Co/B|-A", "Ao\\C|-B"),
)


def random_triple(rng: random.Random, max_degree: int) -> tuple:
    """A triple ``(A, B, C)`` of degree at most ``max_degree`` each.

    Purely random triples are almost never related, so half of them are
    built so that one of the shifts is an identity.
    """
    def small():
        pair = rng.choice(((0, 0), (0, 1), (1, 0)))
        return [random_formula(rng, d, atoms=ATOMS) for d in pair]

    mode = rng.randrange(6)
    if mode == 0:                      # A = C/B
        c, b = small()
        return Binary("/", c, b), b, c
    if mode == 1:                      # C = A*B
        a, b = small()
        return a, b, Binary("*", a, b)
    if mode == 2:                      # A = C o/ B
        c, b = small()
        return Binary("o/", c, b), b, c
    return tuple(random_formula_upto(rng, max_degree, atoms=ATOMS) for _ in range(3))


def residuation_suite(cfg: SuiteConfig, prover: Prover, harvest: Harvest):
    """``(violations, positives)``: triples breaking a biconditional, and how
    many of the checked sequents were provable."""
    rng = _rng(cfg, "residuation")
    violations, positives = [], 0
    for _ in range(cfg.triples):
        a, b, c = random_triple(rng, cfg.triple_degree)
        fam = shift_family(a, b, c)
        verdict = {}
        for name, (l, r) in fam.items():
            p = prover.prove(_seq(l, r))
            verdict[name] = bool(p)
            if p:
                positives += 1
                harvest.add_sequent(l, r, p)
        bad = [(s, t) for s, t in SHIFT_PAIRS if verdict[s] != verdict[t]]
        if bad:
            violations.append(((a, b, c), bad))
    return violations, positives


# ------------------------------------------------------------ cut elimination

def cut_pairs(cfg: SuiteConfig, harvest: Harvest) -> list:
    """Chainable pairs ``(A|-B, B|-C)`` from the harvest, nontrivial ones first."""
    rng = _rng(cfg, "cut")
    by_left: dict = {}
    for (l, r) in harvest.sequents:
        by_left.setdefault(l, []).append((l, r))
    strict, trivial = [], []
    for (a, b) in sorted(harvest.sequents, key=str):
        for (_, c) in sorted(by_left.get(b, ()), key=str):
            pair = ((a, b), (b, c))
            (strict if a != b and b != c else trivial).append(pair)
    rng.shuffle(strict)
    rng.shuffle(trivial)
    return (strict + trivial)[:cfg.cut_pairs]


def cut_suite(cfg: SuiteConfig, harvest: Harvest):
    """``(failures, count, nontrivial)`` for transitivity by bivalence elimination."""
    failures, nontrivial = [], 0
    pairs = cut_pairs(cfg, harvest)
    for (a, b), (_, c) in pairs:
        p = transitivity(harvest.sequents[(a, b)], harvest.sequents[(b, c)])
        root = p.conclusion
        ok = (not p.has_bivalence() and not proof_problems(p)
              and root.tree.singleton is not None
              and [(e.formula, e.sign) for e in root.gamma] == [(a, Sign.IN), (c, Sign.OUT)])
        nontrivial += a != b and b != c
        if ok:
            harvest.add_sequent(a, c, p)
        else:
            failures.append((a, b, c))
    return failures, len(pairs), nontrivial


# --------------------------------------------------------- rotation/renaming

def provable_boxes(cfg: SuiteConfig, prover: Prover, harvest: Harvest, max_rounds: int = 2000):
    """``cfg.boxes`` distinct provable boxes with nontrivial trees.

    Random boxes are rarely provable, so they are drawn from the inner
    nodes of closed tableaux (every such node is itself closed) of random
    identities and (co)residuation shifts, topped up by random boxes that
    happen to be provable.
    """
    from .structure import canonical_key

    rng = _rng(cfg, "boxes")
    seen = {canonical_key(b) for b in harvest.boxes}
    out = []

    def take(b, p):
        k = canonical_key(b)
        if k not in seen and b.tree.singleton is None:
            seen.add(k)
            harvest.add_box(b, p)
            out.append(b)

    for _ in range(max_rounds):
        if len(out) >= cfg.boxes:
            break
        b = random_box(rng, cfg.box_degree, atoms=("p", "q"), max_steps=3)
        p = prover.prove(b)
        if p:
            take(b, p)
        a, bb, c = random_triple(rng, cfg.triple_degree + 1)
        l, r = rng.choice(list(shift_family(a, bb, c).values()))
        p = prover.prove(_seq(l, r))
        if not p:
            continue
        nodes = [q for q in p.nodes() if q.conclusion.tree.singleton is None]
        if nodes:
            q = rng.choice(nodes)
            take(q.conclusion, q)
    return out[:cfg.boxes]


def rotation_suite(cfg: SuiteConfig, prover: Prover, harvest: Harvest):
    """``(failures, boxes checked, nonprovable sequents checked)``.

    The variants are decided by fresh provers: the shared memo is keyed up
    to rotation and renaming and would answer them for free.
    """
    rng = _rng(cfg, "rotation")
    failures = []
    boxes = provable_boxes(cfg, prover, harvest)
    for b in boxes:
        for k in range(len(b.gamma)):
            rb = rotate_box(b, k)
            if not prove(rb):
                failures.append(("rotation", b, k))
        vs = sorted(_box_vars(b))
        targets = [f"n{i}" for i in range(len(vs))]
        rng.shuffle(targets)
        m = dict(zip(vs, targets))
        if not prove(rename_box(b, m)):
            failures.append(("renaming", b, m))
    checked = 0
    while checked < cfg.nonprovable:
        a = random_formula_upto(rng, cfg.sequent_degree, atoms=ATOMS)
        c = random_formula_upto(rng, cfg.sequent_degree, atoms=ATOMS)
        b = _seq(a, c)
        if prover.prove(b):
            continue
        checked += 1
        for k in range(2):
            if prove(rotate_box(b, k)):
                failures.append(("nonprovable rotation", b, k))
    return failures, len(boxes), checked


def _box_vars(b: Box) -> set:
    return set(b.tree.nodes) | {e.label for e in b.gamma}


def proof_rotation_check(harvest: Harvest, limit: int = 50) -> list:
    """Rotating actual proofs (not just re-proving) yields checked proofs."""
    bad = []
    for b, p in itertools.islice(sorted(harvest.boxes.items(), key=lambda kv: str(kv[0])), limit):
        for k in range(len(b.gamma)):
            q = rotate_proof(p, k)
            if q.conclusion != rotate_box(b, k) or proof_problems(q):
                bad.append((b, k))
    return bad


# ------------------------------------------------------------------ soundness

def sample_models(cfg: SuiteConfig, atoms=ATOMS) -> list:
    rng = _rng(cfg, "models")
    out = []
    for i in range(cfg.models):
        size = 1 + i % cfg.max_model_size
        out.append(random_model(size, rng, atoms, p=rng.choice((0.2, 0.4, 0.6))))
    return out


def soundness_suite(cfg: SuiteConfig, harvest: Harvest):
    """``(counterexamples, sequents checked, models)`` for every harvested sequent."""
    models = sample_models(cfg)
    seqs = sorted(harvest.sequents, key=str)
    bad = []
    for m in models:
        for a, b in seqs:
            if not check_sequent(m, a, b):
                bad.append((a, b, m))
    return bad, len(seqs), len(models)


# -------------------------------------------------------------- interpolation

def inner_nodes(t: Tree) -> list:
    occ = t.occurrences()
    return sorted(v for v, n in occ.items() if n == 2)


def interpolation_suite(cfg: SuiteConfig, prover: Prover, harvest: Harvest):
    """``(failures, count)`` over boxes with an inner tree node to split at."""
    from .structure import components_at, tree_functions
    from .syntax import subformulas

    from .structure import canonical_key

    pool, seen = [], set()
    for p in list(harvest.all_proofs()):
        for q in p.nodes():
            b = q.conclusion
            if len(b.tree.conditions) >= 2 and canonical_key(b) not in seen:
                seen.add(canonical_key(b))
                pool.append((b, q))
    pool.sort(key=lambda bq: str(bq[0]))
    cands = [(b, q, u) for b, q in pool for u in inner_nodes(b.tree)]
    rng = _rng(cfg, "interp")
    rng.shuffle(cands)
    failures = []
    for b, proof, u in cands[:cfg.interpolations]:
        it = interpolate(proof, u)
        w = it.witness
        closure = set()
        for e in b.gamma:
            closure |= set(subformulas(e.formula))
        lb, rb = it.left.conclusion, it.right.conclusion
        _, h, c = tree_functions(lb.tree)
        sign_ok = (w.label == u and (w.sign is Sign.IN) == (u in h) and (w.sign is Sign.OUT) == (u in c)
                   and not validate_box(lb) and not validate_box(rb))
        i1 = lb.gamma.index(w)
        i2 = rb.gamma.index(w.flip())
        back = bivalence(it.left, i1, it.right, i2)
        recomposed = (back.conclusion.tree == b.tree
                      and sorted(map(str, back.conclusion.gamma)) == sorted(map(str, b.gamma))
                      and _same_cycle(back.conclusion.gamma, b.gamma)
                      and not proof_problems(back) and not back.has_bivalence())
        checks = {
            "subformula": w.formula in closure,
            "sign": sign_ok,
            "left/right checked": not proof_problems(it.left) and not proof_problems(it.right),
            "recomposes": recomposed,
        }
        if not all(checks.values()):
            failures.append((b, u, [k for k, v in checks.items() if not v]))
    return failures, min(len(cands), cfg.interpolations)


def _same_cycle(g1, g2) -> bool:
    n = len(g1)
    return len(g2) == n and any(tuple(g1[k:] + g1[:k]) == tuple(g2) for k in range(n))


# ---------------------------------------------------------- weak equivalence

def lexicon_suite(cfg: SuiteConfig) -> list:
    rng = _rng(cfg, "lexicons")
    return [interesting_lexicon(rng, grishin=(k % cfg.grishin_every == 0),
                                max_len=cfg.sentence_length)
            for k in range(cfg.lexicons)]


def weak_equivalence(grammars, max_len: int = 4, harvest: Optional[Harvest] = None):
    """``(mismatches, sentences, accepted, seconds)`` comparing the two recognisers."""
    t0 = time.perf_counter()
    mismatches, total, accepted = [], 0, 0
    for g in grammars:
        cfg = extract_cfg(g)
        direct = DirectRecognizer(g, max_length=max_len)
        words = sorted(g.words)
        for n in range(1, max_len + 1):
            for s in itertools.product(words, repeat=n):
                total += 1
                a = cyk_recognize(cfg, s)
                r = direct.find(s)
                accepted += a
                if harvest is not None and r is not None:
                    harvest.add_box(r.box, r.proof)
                if a != (r is not None):
                    mismatches.append((g, s, a))
    return mismatches, total, accepted, time.perf_counter() - t0


# ------------------------------------------------------------- conservativity

def nl_only(f: Formula) -> bool:
    return all(g.op in NL_CONNECTIVES for g in subformula_closure([f]) if isinstance(g, Binary))


def conservativity_suite(harvest: Harvest):
    """``(violations, NL-only proofs checked)``."""
    bad, checked = [], 0
    items = [((a, b), p) for (a, b), p in harvest.sequents.items()]
    items += [(tuple(e.formula for e in b.gamma), p) for b, p in harvest.boxes.items()]
    for fs, p in items:
        if all(nl_only(f) for f in fs):
            checked += 1
            if any(c.family is not Family.TIMES for c in p.conditions_used()):
                bad.append(fs)
    return bad, checked
