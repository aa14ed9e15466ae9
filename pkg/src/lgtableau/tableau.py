"""Labeled tableaux: alpha/beta classification, expansion, closure and search."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Union

from .structure import (
    Box, Condition, Family, FreshSupply, Labeled, Tree, Variable, canonical_form,
    parse_box, print_box, sequent_box, split_tree,
)
from .syntax import Atom, Binary, Formula, Sign

ALPHA, BETA, LITERAL = "alpha", "beta", "literal"
AX = "axiom"

# (connective, sign of the alpha formula) ->
#     (family, slot roles (parent, mid, right), first component, second component)
# A component is (operand, sign) with operand "left" or "right" in written order.
# Slot roles name the principal label x and the new variables y, z.
_ALPHA_ROWS = {
    "/":  (Family.TIMES, ("z", "x", "y"), ("right", Sign.IN), ("left", Sign.OUT), Sign.OUT),
    "\\": (Family.TIMES, ("y", "z", "x"), ("right", Sign.OUT), ("left", Sign.IN), Sign.OUT),
    "*":  (Family.TIMES, ("x", "y", "z"), ("left", Sign.IN), ("right", Sign.IN), Sign.IN),
    "o/": (Family.PLUS, ("y", "x", "z"), ("left", Sign.IN), ("right", Sign.OUT), Sign.IN),
    "o\\": (Family.PLUS, ("z", "y", "x"), ("left", Sign.OUT), ("right", Sign.IN), Sign.IN),
    "+":  (Family.PLUS, ("x", "z", "y"), ("right", Sign.OUT), ("left", Sign.OUT), Sign.OUT),
}


@dataclass(frozen=True)
class Classification:
    kind: str
    family: Optional[Family] = None
    roles: tuple = ()
    first: tuple = ()    # (formula, sign) of the y component
    second: tuple = ()   # (formula, sign) of the z component

    def comp1(self, y: Variable) -> Labeled:
        return Labeled(y, *self.first)

    def comp2(self, z: Variable) -> Labeled:
        return Labeled(z, *self.second)

    def condition(self, x: Variable, y: Variable, z: Variable) -> Condition:
        env = {"x": x, "y": y, "z": z}
        return Condition(self.family, *(env[r] for r in self.roles))

    def match(self, c: Condition, x: Variable) -> Optional[tuple[Variable, Variable]]:
        """``(y, z)`` if ``c`` has this row's shape with ``x`` in the principal slot."""
        if c.family is not self.family:
            return None
        env = dict(zip(self.roles, c.variables))
        if env["x"] != x:
            return None
        return env["y"], env["z"]


@lru_cache(maxsize=None)
def _classify(formula: Formula, sign: Sign) -> Classification:
    if isinstance(formula, Atom):
        return Classification(LITERAL)
    family, roles, c1, c2, alpha_sign = _ALPHA_ROWS[formula.op]
    operand = {"left": formula.left, "right": formula.right}
    kind = ALPHA if sign is alpha_sign else BETA
    flip = (lambda s: s) if kind == ALPHA else Sign.flip
    return Classification(kind, family, roles,
                          (operand[c1[0]], flip(c1[1])), (operand[c2[0]], flip(c2[1])))


def classify(phi: Labeled) -> Classification:
    return _classify(phi.formula, phi.sign)


class ExpansionError(ValueError):
    pass


def is_closed_leaf(b: Box) -> bool:
    if b.tree.singleton is None or len(b.gamma) != 2:
        return False
    e, f = b.gamma
    x = b.tree.singleton
    return (e.label == f.label == x and isinstance(e.formula, Atom)
            and e.formula == f.formula and e.sign is not f.sign)


def expand_alpha(b: Box, i: int, y: Variable, z: Variable) -> Box:
    phi = b.gamma[i]
    cls = classify(phi)
    if cls.kind != ALPHA:
        raise ExpansionError(f"{phi} is not an alpha formula")
    used = b.variables
    if y == z or y in used or z in used:
        raise ExpansionError(f"{y}, {z} are not fresh")
    c = cls.condition(phi.label, y, z)
    conds = {c} if b.tree.singleton is not None else b.tree.conditions | {c}
    gamma = b.gamma[:i] + (cls.comp1(y), cls.comp2(z)) + b.gamma[i + 1:]
    return Box(Tree(conds), gamma)


@dataclass(frozen=True)
class BetaStep:
    condition: Condition
    y_box: Box
    z_box: Box
    split: tuple  # lengths of the conclusion segments (Gamma, Delta, Gamma', Delta')


def beta_step(b: Box, i: int) -> BetaStep:
    """Apply the branching rule to ``b.gamma[i]``.

    The list split is forced: cyclically after the beta formula come the
    formulas over the ``y`` side, then those over the ``z`` side.
    """
    phi = b.gamma[i]
    cls = classify(phi)
    if cls.kind != BETA:
        raise ExpansionError(f"{phi} is not a beta formula")
    if b.tree.singleton is not None:
        raise ExpansionError("no condition to split on in a singleton tree")
    x = phi.label
    holders = [c for c in b.tree.conditions if x in c.variables]
    if len(holders) != 1:
        raise ExpansionError(f"{x} is not a leaf of the tree")
    c = holders[0]
    yz = cls.match(c, x)
    if yz is None:
        raise ExpansionError(f"{c} does not match the shape required by {phi}")
    y, z = yz
    ty = split_tree(b.tree, (c,), y)
    ny = ty.nodes
    n = len(b.gamma)
    # cyclically after the beta formula: the y side, then the z side
    ny_count = 0
    for k in range(1, n):
        if b.gamma[(i + k) % n].label in ny:
            if ny_count != k - 1:
                raise ExpansionError(f"formulas over the two sides of {c} are not contiguous")
            ny_count += 1
    tz = split_tree(b.tree, (c,), z)
    before, rest = b.gamma[:i], b.gamma[i + 1:]
    if not any(e.label in ny for e in before):
        # Gamma empty: list is Delta, beta, Gamma', Delta'
        g1 = rest[:ny_count]
        d2 = rest[ny_count:]
        y_list = (cls.comp1(y),) + g1
        z_list = before + (cls.comp2(z),) + d2
        split = (0, len(before), len(g1), len(d2))
    else:
        # Delta' empty: list is Gamma, Delta, beta, Gamma'
        n_gamma = len(before) - (n - 1 - ny_count)
        g0, d = before[:n_gamma], before[n_gamma:]
        y_list = g0 + (cls.comp1(y),) + rest
        z_list = d + (cls.comp2(z),)
        split = (len(g0), len(d), len(rest), 0)
    return BetaStep(c, Box(ty, y_list), Box(tz, z_list), split)


def expand_beta(b: Box, i: int) -> tuple[Box, Box]:
    step = beta_step(b, i)
    return step.y_box, step.z_box


# -------------------------------------------------------------------- proofs

@dataclass(frozen=True)
class Axiom:
    tag = "axiom"


@dataclass(frozen=True)
class AlphaExp:
    index: int
    y: Variable
    z: Variable
    tag = "alpha"


@dataclass(frozen=True)
class BetaExp:
    index: int
    condition: Condition
    split: tuple = ()
    tag = "beta"


@dataclass(frozen=True)
class Bivalence:
    """Rule B: premises prove ``<T|G,phi,G'>`` and ``<T'|D,phi^,D'>``."""
    phi: Labeled
    split: tuple = ()  # lengths (Gamma, Delta, Gamma', Delta')
    tag = "bivalence"


Rule = Union[Axiom, AlphaExp, BetaExp, Bivalence]


@dataclass(frozen=True)
class Proof:
    conclusion: Box
    rule: Rule
    premises: tuple = ()

    def nodes(self):
        stack = [self]
        while stack:
            p = stack.pop()
            yield p
            stack.extend(p.premises)

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def conditions_used(self) -> set:
        return {c for p in self.nodes() for c in (p.conclusion.tree.conditions)}

    def has_bivalence(self) -> bool:
        return any(isinstance(p.rule, Bivalence) for p in self.nodes())

    def __str__(self):
        return format_proof(self)


def alpha_node(b: Box, i: int, y: Variable, z: Variable, premise: Proof) -> Proof:
    return Proof(b, AlphaExp(i, y, z), (premise,))


class NotProvable:
    """Result of an exhausted search."""

    def __init__(self, box: Box):
        self.box = box

    def __bool__(self):
        return False

    def __repr__(self):
        return f"NotProvable({print_box(self.box)})"


@lru_cache(maxsize=None)
def _atom_balance(formula: Formula, sign: Sign) -> tuple:
    if isinstance(formula, Atom):
        return ((formula.name, 1 if sign is Sign.IN else -1),)
    cls = _classify(formula, sign)
    return _atom_balance(*cls.first) + _atom_balance(*cls.second)


def balanced(b: Box) -> bool:
    """Every atom occurs as often with input as with output polarity.

    Expansion preserves these counts and closed leaves are balanced, so an
    unbalanced box has no closed tableau.
    """
    total = Counter()
    for e in b.gamma:
        for name, d in _atom_balance(e.formula, e.sign):
            total[name] += d
    return not any(total.values())


class Prover:
    """Exhaustive backtracking search with memoisation up to rotation and renaming.

    One instance keeps its memo table; :func:`prove` uses a fresh instance per query.
    """

    def __init__(self, check_box: Optional[Callable[[Box], None]] = None):
        self.memo: dict = {}
        self.check_box = check_box
        self.fresh = FreshSupply(prefix="t")

    def closes(self, b: Box) -> bool:
        self.fresh.avoid.update(b.variables)
        return self._search(b) is not None

    def prove(self, b: Box) -> Union[Proof, NotProvable]:
        self.fresh.avoid.update(b.variables)
        if self._search(b) is None:
            return NotProvable(b)
        return self._build(b)

    def _search(self, b: Box):
        """Index of a successful first expansion, ``AX`` for a closed leaf, or None."""
        key, k = canonical_form(b)
        n = len(b.gamma)
        if key not in self.memo:
            if self.check_box is not None:
                self.check_box(b)
            move = self._find_move(b)
            self.memo[key] = move if move in (None, AX) else (move - k) % n
        move = self.memo[key]
        return move if move in (None, AX) else (move + k) % n

    def _find_move(self, b: Box):
        if is_closed_leaf(b):
            return AX
        if not balanced(b):
            return None
        order = sorted(range(len(b.gamma)), key=lambda i: classify(b.gamma[i]).kind != ALPHA)
        for i in order:
            cls = classify(b.gamma[i])
            if cls.kind == ALPHA:
                y, z = self.fresh(), self.fresh()
                if self._search(expand_alpha(b, i, y, z)) is not None:
                    return i
            elif cls.kind == BETA:
                try:
                    yb, zb = expand_beta(b, i)
                except ExpansionError:
                    continue
                if self._search(yb) is not None and self._search(zb) is not None:
                    return i
        return None

    def _build(self, b: Box) -> Proof:
        i = self._search(b)
        if i == AX:
            return Proof(b, Axiom())
        cls = classify(b.gamma[i])
        if cls.kind == ALPHA:
            y, z = self.fresh(), self.fresh()
            prem = expand_alpha(b, i, y, z)
            return Proof(b, AlphaExp(i, y, z), (self._build(prem),))
        step = beta_step(b, i)
        return Proof(b, BetaExp(i, step.condition, step.split),
                     (self._build(step.y_box), self._build(step.z_box)))


def prove(b: Box) -> Union[Proof, NotProvable]:
    return Prover().prove(b)


def prove_sequent(a: Formula, b: Formula) -> Union[Proof, NotProvable]:
    return prove(sequent_box(a, b))


# ------------------------------------------------------------- serialisation

def format_proof(p: Proof, indent: str = "") -> str:
    """Indented tree, conclusion first."""
    lines = []
    _format(p, "", lines)
    return "\n".join(indent + ln for ln in lines)


def _rule_label(rule: Rule) -> str:
    if isinstance(rule, AlphaExp):
        return f"alpha@{rule.index} fresh {rule.y},{rule.z}"
    if isinstance(rule, BetaExp):
        return f"beta@{rule.index} on {rule.condition}"
    if isinstance(rule, Bivalence):
        return f"B on {rule.phi}"
    return "closed"


def _format(p: Proof, pad: str, lines: list):
    lines.append(f"{pad}{print_box(p.conclusion)}   [{_rule_label(p.rule)}]")
    for q in p.premises:
        _format(q, pad + "  ", lines)


def proof_to_data(p: Proof) -> dict:
    rule = p.rule
    data = {"box": print_box(p.conclusion), "rule": rule.tag}
    if isinstance(rule, AlphaExp):
        data.update(index=rule.index, fresh=[rule.y, rule.z])
    elif isinstance(rule, BetaExp):
        data.update(index=rule.index, condition=str(rule.condition), split=list(rule.split))
    elif isinstance(rule, Bivalence):
        data.update(phi=str(rule.phi), split=list(rule.split))
    if p.premises:
        data["premises"] = [proof_to_data(q) for q in p.premises]
    return data


def proof_from_data(data: dict) -> Proof:
    from .structure import parse_condition, parse_labeled
    tag = data["rule"]
    if tag == "axiom":
        rule = Axiom()
    elif tag == "alpha":
        rule = AlphaExp(int(data["index"]), *data["fresh"])
    elif tag == "beta":
        rule = BetaExp(int(data["index"]), parse_condition(data["condition"]),
                       tuple(data.get("split", ())))
    elif tag == "bivalence":
        rule = Bivalence(parse_labeled(data["phi"]), tuple(data.get("split", ())))
    else:
        raise ValueError(f"unknown rule tag {tag!r}")
    premises = tuple(proof_from_data(q) for q in data.get("premises", ()))
    return Proof(parse_box(data["box"]), rule, premises)


def dump_proof(p: Proof) -> str:
    return json.dumps(proof_to_data(p), indent=1, ensure_ascii=False)


def load_proof(text: str) -> Proof:
    return proof_from_data(json.loads(text))
