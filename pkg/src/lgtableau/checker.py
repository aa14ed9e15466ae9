"""Independent proof checker.

The checker shares only the classification table with the prover.  Beta
steps are validated by trying every admissible split of the conclusion
list instead of replaying the prover's choice, and freshness is checked
against the whole branch above each alpha step.
"""
from __future__ import annotations

from .structure import Box, Tree, TreeError, compose_trees, validate_box
from .syntax import Atom
from .tableau import ALPHA, BETA, AlphaExp, Axiom, BetaExp, Bivalence, Proof, classify

__all__ = ["check_proof", "proof_problems"]


def check_proof(p: Proof) -> bool:
    return not proof_problems(p)


def proof_problems(p: Proof, limit: int = 20) -> list[str]:
    """Human-readable reasons why ``p`` is not a closed tableau (empty if it is)."""
    problems: list[str] = []
    stack = [(p, frozenset(), "root")]
    while stack and len(problems) < limit:
        node, above, path = stack.pop()
        b = node.conclusion
        seen = above | b.variables
        errs = [f"invalid box: {e}" for e in validate_box(b)]
        if not errs:
            errs = _check_rule(node, seen)
        problems.extend(f"{path}: {e}" for e in errs)
        for k, q in enumerate(node.premises):
            stack.append((q, seen, f"{path}.{k}"))
    return problems


def _check_rule(node: Proof, seen: frozenset) -> list[str]:
    rule, b, prem = node.rule, node.conclusion, node.premises
    if isinstance(rule, Axiom):
        if prem:
            return ["axiom with premises"]
        return [] if _closed(b) else ["leaf is not an atomic identity box"]
    if isinstance(rule, AlphaExp):
        return _check_alpha(b, rule, prem, seen)
    if isinstance(rule, BetaExp):
        return _check_beta(b, rule, prem)
    if isinstance(rule, Bivalence):
        return _check_bivalence(b, rule, prem)
    return [f"unknown rule {rule!r}"]


def _closed(b: Box) -> bool:
    if b.tree.singleton is None or len(b.gamma) != 2:
        return False
    e, f = b.gamma
    return isinstance(e.formula, Atom) and e.formula == f.formula and e.sign != f.sign


def _check_alpha(b, rule, prem, seen):
    if len(prem) != 1:
        return ["alpha step needs one premise"]
    if not 0 <= rule.index < len(b.gamma):
        return ["alpha index out of range"]
    phi = b.gamma[rule.index]
    cls = classify(phi)
    if cls.kind != ALPHA:
        return [f"{phi} is not an alpha formula"]
    y, z = rule.y, rule.z
    if y == z or y in seen or z in seen:
        return [f"variables {y},{z} are not fresh in the branch"]
    cond = cls.condition(phi.label, y, z)
    conds = {cond} if b.tree.singleton is not None else set(b.tree.conditions) | {cond}
    gamma = b.gamma[:rule.index] + (cls.comp1(y), cls.comp2(z)) + b.gamma[rule.index + 1:]
    if prem[0].conclusion != Box(Tree(conds), gamma):
        return ["alpha premise differs from the expansion"]
    return []


def _component(conditions, anchor) -> Tree:
    conds = set(conditions)
    comp, frontier = set(), {anchor}
    while frontier:
        v = frontier.pop()
        for c in [c for c in conds if v in c.variables]:
            conds.discard(c)
            comp.add(c)
            frontier.update(c.variables)
    return Tree(comp) if comp else Tree.single(anchor)


def _check_beta(b, rule, prem):
    if len(prem) != 2:
        return ["beta step needs two premises"]
    i = rule.index
    if not 0 <= i < len(b.gamma):
        return ["beta index out of range"]
    phi = b.gamma[i]
    cls = classify(phi)
    if cls.kind != BETA:
        return [f"{phi} is not a beta formula"]
    c = rule.condition
    if b.tree.singleton is not None or c not in b.tree.conditions:
        return [f"{c} is not a condition of the tree"]
    if sum(phi.label in d.variables for d in b.tree.conditions) != 1:
        return [f"{phi.label} is not a leaf"]
    yz = cls.match(c, phi.label)
    if yz is None:
        return [f"{c} does not have the shape required by {phi}"]
    y, z = yz
    rest = b.tree.conditions - {c}
    ty, tz = _component(rest, y), _component(rest, z)
    g = b.gamma
    c1, c2 = cls.comp1(y), cls.comp2(z)
    want = (prem[0].conclusion, prem[1].conclusion)
    for a in range(i + 1):
        for k in range(len(g) - i):
            if a and i + 1 + k != len(g):
                continue  # neither Gamma nor Delta' is empty
            ybox = Box(ty, g[:a] + (c1,) + g[i + 1:i + 1 + k])
            zbox = Box(tz, g[a:i] + (c2,) + g[i + 1 + k:])
            if (ybox, zbox) == want:
                return []
    return ["beta premises match no admissible split"]


def _check_bivalence(b, rule, prem):
    if len(prem) != 2:
        return ["bivalence needs two premises"]
    b1, b2 = prem[0].conclusion, prem[1].conclusion
    phi = rule.phi
    u = phi.label
    if b1.tree.nodes & b2.tree.nodes != {u}:
        return ["premise trees must share exactly the label of the cut formula"]
    try:
        tree = compose_trees(b1.tree, b2.tree)
    except TreeError as e:
        return [str(e)]
    if tree != b.tree:
        return ["conclusion tree is not the union of the premise trees"]
    for i, e in enumerate(b1.gamma):
        if e != phi:
            continue
        for j, f in enumerate(b2.gamma):
            if f != phi.flip():
                continue
            gam, gam2 = b1.gamma[:i], b1.gamma[i + 1:]
            dl, dl2 = b2.gamma[:j], b2.gamma[j + 1:]
            if (not gam or not dl2) and gam + dl + gam2 + dl2 == b.gamma:
                return []
    return ["conclusion is not Gamma,Delta,Gamma',Delta' for any placement of the cut pair"]
