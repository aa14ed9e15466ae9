"""Lambek-Grishin grammars and their context-free equivalents.

A grammar assigns signed formulas to words and fixes a signed atomic goal
``g``.  A sentence ``w1 .. wn`` is recognised when, for some lexical choice
``Ai`` and some tree, the box ``<T | x1:A1, .., xn:An, x:g>`` closes.

The extracted grammar has the signed formulas over the subformula closure
``T`` as nonterminals.  Every closed two- or three-formula box over ``T``
of the shapes below yields a production ``(last entry)^ -> other entries``::

    <x | x:A^i , x:B^o>                 <x | x:A^o , x:B^i>
    <R*(x,y,z) | y:A^i , z:B^i , x:C^o>  and its rotations
    <R+(x,z,y) | y:A^o , z:B^o , x:C^i>  and its rotations
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .structure import (
    Box, Condition, Family, FreshSupply, Labeled, Tree, rotate_box, times, plus,
)
from .syntax import Atom, Formula, Sign, SignedFormula, parse_signed, print_signed, subformula_closure
from .tableau import Proof, Prover, balanced
from .transform import bivalence_node, eliminate_bivalence, freshen, identity_proof, \
    proof_variables, rename_proof, rotate_proof

__all__ = [
    "LGGrammar", "GrammarError", "UnknownWordError", "parse_lexicon", "format_lexicon",
    "AxiomSet", "compute_axiom_set", "Production", "CFG", "extract_cfg", "format_cfg",
    "parse_cfg", "Derivation", "cyk_recognize", "cyk_parse", "Recognition", "DirectRecognizer",
    "recognize_direct", "cfg_derivation_to_tableau", "recognition_box", "enumerate_trees",
]

MAX_DIRECT_LENGTH = 5


class GrammarError(ValueError):
    pass


class UnknownWordError(GrammarError):
    pass


@dataclass(frozen=True)
class LGGrammar:
    lexicon: Mapping[str, tuple]
    goal: SignedFormula
    words: frozenset = field(default=None)

    def __post_init__(self):
        lex = {w: tuple(dict.fromkeys(fs)) for w, fs in self.lexicon.items()}
        object.__setattr__(self, "lexicon", lex)
        words = frozenset(lex) if self.words is None else frozenset(self.words)
        object.__setattr__(self, "words", words)
        if not isinstance(self.goal.formula, Atom):
            raise GrammarError("the goal must be a signed atom")
        for w, fs in lex.items():
            if not fs:
                raise GrammarError(f"word {w!r} has no lexical entries")
            if w not in words:
                raise GrammarError(f"word {w!r} is not in the alphabet")

    def entries(self, word: str) -> tuple:
        try:
            return self.lexicon[word]
        except KeyError:
            raise UnknownWordError(f"unknown word {word!r}") from None

    def formulas(self) -> list:
        fs = [sf.formula for entries in self.lexicon.values() for sf in entries]
        return fs + [self.goal.formula]


def parse_lexicon(text: str) -> LGGrammar:
    """Lines ``word : f^s | f^s`` and one ``goal : g^s``; ``#`` starts a comment."""
    lex, goal = {}, None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise GrammarError(f"line {n}: expected 'word : signed formula'")
        head = head.strip()
        try:
            entries = [parse_signed(part) for part in rest.split("|")]
        except ValueError as e:
            raise GrammarError(f"line {n}: {e}") from None
        if head == "goal":
            if len(entries) != 1:
                raise GrammarError(f"line {n}: one goal expected")
            goal = entries[0]
        else:
            lex.setdefault(head, []).extend(entries)
    if goal is None:
        raise GrammarError("missing goal line")
    if not lex:
        raise GrammarError("empty lexicon")
    return LGGrammar({w: tuple(fs) for w, fs in lex.items()}, goal)


def format_lexicon(g: LGGrammar) -> str:
    lines = [f"{w} : {' | '.join(print_signed(sf) for sf in g.lexicon[w])}"
             for w in sorted(g.lexicon)]
    lines.append(f"goal : {print_signed(g.goal)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- axiom set

def _two(a: Formula, sa: Sign, b: Formula, sb: Sign) -> Box:
    return Box(Tree.single("x"), (Labeled("x", a, sa), Labeled("x", b, sb)))


def _times_box(a, b, c) -> Box:
    return Box(Tree.of(times("x", "y", "z")),
               (Labeled("y", a, Sign.IN), Labeled("z", b, Sign.IN), Labeled("x", c, Sign.OUT)))


def _plus_box(a, b, c) -> Box:
    return Box(Tree.of(plus("x", "z", "y")),
               (Labeled("y", a, Sign.OUT), Labeled("z", b, Sign.OUT), Labeled("x", c, Sign.IN)))


@dataclass
class AxiomSet:
    """Closed boxes of the admitted shapes over ``T`` with their proofs."""
    formulas: frozenset
    members: dict  # Box -> Proof

    def __contains__(self, b: Box) -> bool:
        return b in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def compute_axiom_set(formulas: Iterable[Formula], prover: Optional[Prover] = None) -> AxiomSet:
    t = frozenset(formulas)
    if subformula_closure(t) != t:
        raise GrammarError("the formula set is not closed under subformulas")
    prover = prover or Prover()
    members = {}
    ts = sorted(t, key=lambda f: f.key)
    for a, b in itertools.product(ts, repeat=2):
        for bx in (_two(a, Sign.IN, b, Sign.OUT), _two(a, Sign.OUT, b, Sign.IN)):
            if balanced(bx):
                p = prover.prove(bx)
                if p:
                    members[bx] = p
    for a, b, c in itertools.product(ts, repeat=3):
        for bx in (_times_box(a, b, c), _plus_box(a, b, c)):
            if not balanced(bx):
                continue
            p = prover.prove(bx)
            if p:
                for k in range(3):
                    members[rotate_box(bx, k)] = rotate_proof(p, k)
    return AxiomSet(t, members)


# ---------------------------------------------------------------------- CFG

Symbol = Union[SignedFormula, str]


class Production(NamedTuple):
    lhs: SignedFormula
    rhs: tuple  # of SignedFormula, or a single word

    @property
    def lexical(self) -> bool:
        return len(self.rhs) == 1 and isinstance(self.rhs[0], str)

    def __str__(self):
        return f"{_q(self.lhs)} -> {' '.join(_q(s) for s in self.rhs)}"


def _q(s: Symbol) -> str:
    return s if isinstance(s, str) else f'"{print_signed(s)}"'


@dataclass
class CFG:
    terminals: frozenset
    nonterminals: frozenset
    start: SignedFormula
    productions: frozenset
    sources: dict = field(default_factory=dict)   # Production -> Box of the axiom set
    axioms: Optional[AxiomSet] = None

    def __post_init__(self):
        self._index()

    def _index(self):
        self.lexical, self.unary, self.binary = {}, {}, {}
        for pr in self.productions:
            if pr.lexical:
                self.lexical.setdefault(pr.rhs[0], []).append(pr)
            elif len(pr.rhs) == 1:
                self.unary.setdefault(pr.rhs[0], []).append(pr)
            elif len(pr.rhs) == 2:
                self.binary.setdefault(pr.rhs, []).append(pr)
            else:
                raise GrammarError(f"production {pr} is neither lexical, unary nor binary")


def extract_cfg(g: LGGrammar, prover: Optional[Prover] = None) -> CFG:
    t = subformula_closure(g.formulas())
    ax = compute_axiom_set(t, prover)
    prods, sources = set(), {}
    for b in ax:
        *rest, last = b.gamma
        pr = Production(last.signed.flip(), tuple(e.signed for e in rest))
        if pr.rhs == (pr.lhs,):
            continue    # identity boxes give useless loops A -> A
        prods.add(pr)
        sources.setdefault(pr, b)
    for w, entries in g.lexicon.items():
        for sf in entries:
            prods.add(Production(sf, (w,)))
    nts = frozenset(SignedFormula(f, s) for f in t for s in Sign)
    return CFG(frozenset(g.words), nts, g.goal.flip(), frozenset(prods), sources, ax)


def format_cfg(cfg: CFG) -> str:
    order = sorted(cfg.productions, key=lambda pr: (pr.lexical, str(pr)))
    lines = [f"# {len(cfg.nonterminals)} nonterminals, {len(cfg.productions)} productions",
             f"start: {_q(cfg.start)}"]
    lines += [str(pr) for pr in order]
    return "\n".join(lines) + "\n"


def _parse_symbols(text: str) -> list:
    out, rest = [], text.strip()
    while rest:
        if rest[0] == '"':
            end = rest.index('"', 1)
            out.append(parse_signed(rest[1:end]))
            rest = rest[end + 1:].strip()
        else:
            word, _, rest = rest.partition(" ")
            out.append(word)
            rest = rest.strip()
    return out


def parse_cfg(text: str) -> CFG:
    start, prods = None, set()
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("start:"):
            (start,) = _parse_symbols(line[6:])
            continue
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise GrammarError(f"line {n}: expected 'LHS -> RHS'")
        (left,) = _parse_symbols(lhs)
        prods.add(Production(left, tuple(_parse_symbols(rhs))))
    if start is None:
        raise GrammarError("missing start line")
    terms = frozenset(pr.rhs[0] for pr in prods if pr.lexical)
    nts = frozenset({start} | {pr.lhs for pr in prods}
                    | {s for pr in prods if not pr.lexical for s in pr.rhs})
    return CFG(terms, nts, start, frozenset(prods))


# ---------------------------------------------------------------------- CYK

@dataclass(frozen=True)
class Derivation:
    symbol: SignedFormula
    production: Production
    children: tuple  # Derivation nodes, or one word for a lexical step

    def words(self) -> list:
        if self.production.lexical:
            return [self.children[0]]
        return [w for c in self.children for w in c.words()]

    def format(self, pad: str = "") -> str:
        if self.production.lexical:
            return f"{pad}{_q(self.symbol)} -> {self.children[0]}"
        lines = [f"{pad}{self.production}"]
        lines += [c.format(pad + "  ") for c in self.children]
        return "\n".join(lines)


def cyk_parse(cfg: CFG, sentence: Sequence[str]) -> Optional[Derivation]:
    """A derivation of ``sentence`` from the start symbol, or None."""
    n = len(sentence)
    if n == 0:
        return None
    for w in sentence:
        if w not in cfg.terminals:
            raise UnknownWordError(f"unknown word {w!r}")
    # chart[i][j]: symbol -> back pointer for span i..i+j+1
    chart = [[None] * (n - i) for i in range(n)]
    for i, w in enumerate(sentence):
        cell = {pr.lhs: ("lex", pr) for pr in cfg.lexical.get(w, ())}
        chart[i][0] = _unary_closure(cfg, cell)
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            cell = {}
            for k in range(1, span):
                left, right = chart[i][k - 1], chart[i + k][span - k - 1]
                for y in left:
                    for z in right:
                        for pr in cfg.binary.get((y, z), ()):
                            cell.setdefault(pr.lhs, ("bin", pr, k))
            chart[i][span - 1] = _unary_closure(cfg, cell)
    if cfg.start not in chart[0][n - 1]:
        return None
    return _build(chart, sentence, cfg.start, 0, n)


def _unary_closure(cfg: CFG, cell: dict) -> dict:
    agenda = list(cell)
    while agenda:
        y = agenda.pop()
        for pr in cfg.unary.get(y, ()):
            if pr.lhs not in cell:
                cell[pr.lhs] = ("un", pr)
                agenda.append(pr.lhs)
    return cell


def _build(chart, sentence, sym, i, span) -> Derivation:
    bp = chart[i][span - 1][sym]
    pr = bp[1]
    if bp[0] == "lex":
        return Derivation(sym, pr, (sentence[i],))
    if bp[0] == "un":
        return Derivation(sym, pr, (_build(chart, sentence, pr.rhs[0], i, span),))
    k = bp[2]
    return Derivation(sym, pr, (_build(chart, sentence, pr.rhs[0], i, k),
                                _build(chart, sentence, pr.rhs[1], i + k, span - k)))


def cyk_recognize(cfg: CFG, sentence: Sequence[str]) -> bool:
    return cyk_parse(cfg, sentence) is not None


# ------------------------------------------------------- direct recognition

def _unrooted_shapes(m: int) -> list:
    """All unrooted binary trees on leaves ``0..m-1`` (``m >= 3``) as edge lists."""
    shapes = [[(m, 0), (m, 1), (m, 2)]]
    for leaf in range(3, m):
        nxt = []
        for edges in shapes:
            new = m + leaf - 2  # next internal node id
            for k, (a, b) in enumerate(edges):
                nxt.append(edges[:k] + edges[k + 1:] + [(a, new), (new, b), (new, leaf)])
        shapes = nxt
    return shapes


_TREE_CACHE: dict = {}


def enumerate_trees(signs: Sequence[Sign], families: Iterable[Family] = (Family.TIMES, Family.PLUS),
                    leaves: Optional[Sequence[str]] = None) -> list:
    """Every tree with leaves ``leaves[i]`` (default ``x1..xn, x``) whose hypotheses
    are exactly the leaves signed input."""
    m = len(signs)
    if leaves is None:
        leaves = [f"x{i + 1}" for i in range(m - 1)] + ["x"]
    fams = tuple(sorted(set(families), key=lambda f: f.value))
    key = (tuple(signs), fams, tuple(leaves))
    if key in _TREE_CACHE:
        return _TREE_CACHE[key]
    out = []
    if m == 2:
        if signs[0] != signs[1] and leaves[0] == leaves[1]:
            out.append(Tree.single(leaves[0]))
        _TREE_CACHE[key] = out
        return out
    if m < 2:
        raise GrammarError("need at least two leaves")
    for edges in _unrooted_shapes(m):
        out.extend(_orientations(edges, m, signs, fams, leaves))
    _TREE_CACHE[key] = out
    return out


def _orientations(edges, m, signs, fams, leaves):
    names = {}
    internal_count = 0
    for k, (a, b) in enumerate(edges):
        if b < m:
            names[k] = leaves[b]
        elif a < m:
            names[k] = leaves[a]
        else:
            internal_count += 1
            names[k] = f"v{internal_count}"
    nodes = sorted({v for e in edges for v in e if v >= m})
    incident = {v: [k for k, e in enumerate(edges) if v in e] for v in nodes}
    want = {}  # leaf edge -> required role
    for k, (a, b) in enumerate(edges):
        leaf = b if b < m else (a if a < m else None)
        if leaf is not None:
            want[k] = "H" if signs[leaf] is Sign.IN else "C"
    options = []
    for v in nodes:
        opts = []
        ks = incident[v]
        for fam in fams:
            for perm in itertools.permutations(ks):
                c = Condition(fam, *(names[k] for k in perm))
                roles = {k: ("H" if names[k] in c.hypotheses else "C") for k in ks}
                if all(roles[k] == want[k] for k in ks if k in want):
                    opts.append((c, roles))
        options.append(opts)
    found = []
    for combo in itertools.product(*options):
        seen = {}
        ok = True
        for c, roles in combo:
            for k, r in roles.items():
                if k in want:
                    continue
                if k in seen and seen[k] == r:
                    ok = False
                    break
                seen[k] = r
            if not ok:
                break
        if ok:
            found.append(Tree(c for c, _ in combo))
    return found


def recognition_box(tree: Tree, entries: Sequence[SignedFormula], goal: SignedFormula,
                    leaves: Optional[Sequence[str]] = None) -> Box:
    n = len(entries)
    if leaves is None:
        leaves = ["x"] * 2 if n == 1 else [f"x{i + 1}" for i in range(n)] + ["x"]
    gamma = tuple(Labeled(v, sf.formula, sf.sign) for v, sf in zip(leaves, list(entries) + [goal]))
    return Box(tree, gamma)


class Recognition(NamedTuple):
    entries: tuple      # chosen lexical signed formulas
    box: Box
    proof: Proof


class DirectRecognizer:
    """Exhaustive recognition by proof search over every tree and lexical choice.

    ``fusion_only=True`` admits only fusion conditions in the recognition tree.
    """

    def __init__(self, g: LGGrammar, fusion_only: bool = False, max_length: int = MAX_DIRECT_LENGTH):
        self.g = g
        self.fusion_only = fusion_only
        self.max_length = max_length
        self.prover = Prover()

    def find(self, sentence: Sequence[str]) -> Optional[Recognition]:
        n = len(sentence)
        if n < 1:
            raise GrammarError("empty sentence")
        if n > self.max_length:
            raise GrammarError(f"direct recognition is capped at {self.max_length} words")
        choices = [self.g.entries(w) for w in sentence]
        fams = (Family.TIMES,) if self.fusion_only else (Family.TIMES, Family.PLUS)
        leaves = ["x", "x"] if n == 1 else [f"x{i + 1}" for i in range(n)] + ["x"]
        for entries in itertools.product(*choices):
            signs = [sf.sign for sf in entries] + [self.g.goal.sign]
            gamma = tuple(Labeled(v, sf.formula, sf.sign)
                          for v, sf in zip(leaves, list(entries) + [self.g.goal]))
            if not balanced(Box(Tree.single("x"), gamma)):
                continue
            for tree in enumerate_trees(signs, fams, leaves):
                b = Box(tree, gamma)
                if self.prover.closes(b):
                    return Recognition(tuple(entries), b, self.prover.prove(b))
        return None

    def recognize(self, sentence: Sequence[str]) -> bool:
        return self.find(sentence) is not None


def recognize_direct(g: LGGrammar, sentence: Sequence[str], fusion_only: bool = False) -> bool:
    return DirectRecognizer(g, fusion_only).recognize(sentence)


# ------------------------------------------------ derivation to tableau

def cfg_derivation_to_tableau(g: LGGrammar, derivation: Derivation, cfg: Optional[CFG] = None,
                              keep_bivalence: bool = False) -> Proof:
    """Closed tableau of the recognition box read off a CFG derivation.

    Each production is replaced by the proof of its axiom-set box, glued to
    the proofs of its children with the rule B; lexical leaves become
    identity tableaux.  The B steps are then eliminated.
    """
    cfg = cfg or extract_cfg(g)
    if derivation.symbol != cfg.start:
        raise GrammarError("derivation does not start from the start symbol")
    names = FreshSupply(prefix="d")
    supply = FreshSupply(prefix="e")
    leaf_names: list = []
    root = names()
    p = _glue(cfg, derivation, root, names, supply, leaf_names)
    # readable leaf names x1..xn and x for the goal
    final = {root: "x"}
    if len(leaf_names) > 1 or leaf_names[0] != root:
        final.update({v: f"x{i + 1}" for i, v in enumerate(leaf_names)})
    p = rename_proof(p, final)
    return p if keep_bivalence else eliminate_bivalence(p)


def _glue(cfg: CFG, d: Derivation, var: str, names, supply, leaves) -> Proof:
    """Proof of ``<T | leaves of d , var:symbol^>``."""
    pr = d.production
    if pr.lexical:
        if pr not in cfg.productions:
            raise GrammarError(f"{pr} is not a production of the grammar")
        leaves.append(var)
        sf = d.symbol
        return identity_proof(sf.formula, var, sf.sign, supply)
    box = cfg.sources.get(pr)
    if box is None or cfg.axioms is None:
        raise GrammarError(f"{pr} has no source box")
    base = cfg.axioms.members[box]
    mapping = {box.gamma[-1].label: var}
    for e in box.gamma[:-1]:
        if e.label not in mapping:
            mapping[e.label] = names()
    for v in proof_variables(base):
        mapping.setdefault(v, supply())
    p = rename_proof(base, mapping)
    pos = 0
    for child, e in zip(d.children, p.conclusion.gamma[:-1]):
        q = _glue(cfg, child, e.label, names, supply, leaves)
        p = bivalence_node(p, pos, q, len(q.conclusion.gamma) - 1)
        pos += len(q.conclusion.gamma) - 1
    return p
