"""Proof transformations: cyclic rotation, bivalence (cut) elimination and interpolation.

All procedures work on explicit :class:`~lgtableau.tableau.Proof` values and
follow the structure of the given tableau; none of them re-runs proof search.
"""
from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple, Optional

from .structure import (
    Box, FreshSupply, Labeled, Tree, TreeError, Variable, compose_trees, components_at,
    rotate_box, rotation_offset,
)
from .syntax import Atom, Formula, Sign
from .tableau import (
    ALPHA, BETA, AlphaExp, Axiom, BetaExp, Bivalence, ExpansionError, Proof, beta_step,
    classify, expand_alpha,
)

__all__ = [
    "TransformError", "rename_proof", "freshen", "proof_variables", "rotate_proof", "rotate_to",
    "bivalence", "bivalence_node", "eliminate_bivalence", "transitivity", "identity_proof",
    "Interpolant", "interpolate",
]


class TransformError(ValueError):
    pass


# ----------------------------------------------------------------- renaming

def proof_variables(p: Proof) -> set:
    out = set()
    for q in p.nodes():
        out |= q.conclusion.variables
    return out


def _rename_box(b: Box, m: Mapping) -> Box:
    return Box(b.tree.rename(m), tuple(e.relabel(m.get(e.label, e.label)) for e in b.gamma))


def _rename_rule(rule, m: Mapping):
    if isinstance(rule, AlphaExp):
        return AlphaExp(rule.index, m.get(rule.y, rule.y), m.get(rule.z, rule.z))
    if isinstance(rule, BetaExp):
        return BetaExp(rule.index, rule.condition.rename(m), rule.split)
    if isinstance(rule, Bivalence):
        return Bivalence(rule.phi.relabel(m.get(rule.phi.label, rule.phi.label)), rule.split)
    return rule


def rename_proof(p: Proof, m: Mapping[Variable, Variable]) -> Proof:
    """Apply ``m`` to every variable of every box (the caller keeps it injective)."""
    return Proof(_rename_box(p.conclusion, m), _rename_rule(p.rule, m),
                 tuple(rename_proof(q, m) for q in p.premises))


def freshen(p: Proof, supply: Optional[FreshSupply] = None) -> Proof:
    """Give every alpha step its own new variables, keeping the root's names."""
    if supply is None:
        supply = FreshSupply(proof_variables(p), prefix="v")
    return _freshen(p, {}, supply)


def _freshen(p: Proof, m: dict, supply) -> Proof:
    b = _rename_box(p.conclusion, m)
    rule = p.rule
    if isinstance(rule, AlphaExp):
        y, z = supply(), supply()
        m2 = {**m, rule.y: y, rule.z: z}
        return Proof(b, AlphaExp(rule.index, y, z), (_freshen(p.premises[0], m2, supply),))
    return Proof(b, _rename_rule(rule, m), tuple(_freshen(q, m, supply) for q in p.premises))


# ----------------------------------------------------------------- rotation

def rotate_proof(p: Proof, k: int) -> Proof:
    """A proof of the conclusion rotated left by ``k``, built without search."""
    n = len(p.conclusion.gamma)
    if k % n == 0:
        return p
    if p.has_bivalence():
        p = eliminate_bivalence(p)
    return _reroot(p, rotate_box(p.conclusion, k))


def rotate_to(p: Proof, target: Box) -> Proof:
    """Rotate ``p`` so that its conclusion is exactly ``target``."""
    b = p.conclusion
    if b == target:
        return p
    if b.tree != target.tree:
        raise TransformError(f"{target} is not a rotation of {b}: trees differ")
    try:
        k = rotation_offset(b.gamma, target.gamma)
    except ValueError:
        raise TransformError(f"{target} is not a rotation of {b}") from None
    return rotate_proof(p, k)


def _reroot(p: Proof, target: Box) -> Proof:
    b = p.conclusion
    if b == target:
        return p
    rule = p.rule
    if isinstance(rule, Axiom):
        return Proof(target, rule)
    entry = b.gamma[rule.index]
    if isinstance(rule, AlphaExp):
        return _alpha_over(target, entry, rule.y, rule.z, p.premises[0])
    return _beta_over(target, entry, p.premises)


def _alpha_over(target: Box, entry: Labeled, y: Variable, z: Variable, premise: Proof) -> Proof:
    """Alpha-expand ``entry`` in ``target`` and hang (a rotation of) ``premise`` above it."""
    j = target.gamma.index(entry)
    expected = expand_alpha(target, j, y, z)
    return Proof(target, AlphaExp(j, y, z), (rotate_to(premise, expected),))


def _beta_over(target: Box, entry: Labeled, premises: Iterable[Proof]) -> Proof:
    """Beta-expand ``entry`` in ``target``; ``premises`` are matched to branches by tree."""
    j = target.gamma.index(entry)
    step = beta_step(target, j)
    by_tree = {q.conclusion.tree: q for q in premises}
    try:
        qy, qz = by_tree[step.y_box.tree], by_tree[step.z_box.tree]
    except KeyError:
        raise TransformError(f"premises do not fit the beta step on {entry}") from None
    return Proof(target, BetaExp(j, step.condition, step.split),
                 (rotate_to(qy, step.y_box), rotate_to(qz, step.z_box)))


# --------------------------------------------------------------- bivalence

def _splice(b1: Box, i1: int, b2: Box, i2: int) -> Box:
    """``<T,T' | G, D', D, G'>``: the list of ``b2`` spliced in for ``b1.gamma[i1]``.

    This is the conclusion of the bivalence rule up to rotation.
    """
    tree = compose_trees(b1.tree, b2.tree)
    gamma = b1.gamma[:i1] + b2.gamma[i2 + 1:] + b2.gamma[:i2] + b1.gamma[i1 + 1:]
    return Box(tree, gamma)


def _check_cut(b1: Box, i1: int, b2: Box, i2: int) -> None:
    phi, psi = b1.gamma[i1], b2.gamma[i2]
    if psi != phi.flip():
        raise TransformError(f"{psi} is not the dual of {phi}")
    if b1.tree.nodes & b2.tree.nodes != {phi.label}:
        raise TransformError(f"trees must share exactly the variable {phi.label}")


def bivalence(p1: Proof, i1: int, p2: Proof, i2: int) -> Proof:
    """Eliminate the rule B applied to ``p1.gamma[i1]`` and ``p2.gamma[i2]``.

    Returns a bivalence-free proof of ``<T,T' | G, D, G', D'>`` where
    ``p1`` proves ``<T | G, phi, G'>`` and ``p2`` proves ``<T' | D, phi^, D'>``.
    """
    b1, b2 = p1.conclusion, p2.conclusion
    _check_cut(b1, i1, b2, i2)
    if i1 and i2 + 1 != len(b2.gamma):
        raise TransformError("bivalence needs Gamma or Delta' to be empty")
    p1 = eliminate_bivalence(p1) if p1.has_bivalence() else p1
    p2 = eliminate_bivalence(p2) if p2.has_bivalence() else p2
    supply = FreshSupply(proof_variables(p1) | proof_variables(p2), prefix="c")
    p1, p2 = freshen(p1, supply), freshen(p2, supply)
    target = Box(compose_trees(b1.tree, b2.tree),
                 b1.gamma[:i1] + b2.gamma[:i2] + b1.gamma[i1 + 1:] + b2.gamma[i2 + 1:])
    return rotate_to(_cut(p1, i1, p2, i2), target)


def bivalence_node(p1: Proof, i1: int, p2: Proof, i2: int) -> Proof:
    """The unreduced rule B as a proof node."""
    b1, b2 = p1.conclusion, p2.conclusion
    _check_cut(b1, i1, b2, i2)
    if i1 and i2 + 1 != len(b2.gamma):
        raise TransformError("bivalence needs Gamma or Delta' to be empty")
    conclusion = Box(compose_trees(b1.tree, b2.tree),
                     b1.gamma[:i1] + b2.gamma[:i2] + b1.gamma[i1 + 1:] + b2.gamma[i2 + 1:])
    split = (i1, i2, len(b1.gamma) - i1 - 1, len(b2.gamma) - i2 - 1)
    return Proof(conclusion, Bivalence(b1.gamma[i1], split), (p1, p2))


def eliminate_bivalence(p: Proof) -> Proof:
    """Remove every B node, innermost first."""
    if not p.has_bivalence():
        return p
    out = _eliminate(p)
    return freshen(out)


def _eliminate(p: Proof) -> Proof:
    if not p.has_bivalence():
        return p
    premises = tuple(_eliminate(q) for q in p.premises)
    if not isinstance(p.rule, Bivalence):
        return Proof(p.conclusion, p.rule, premises)
    q1, q2 = premises
    g, d = p.rule.split[:2] if p.rule.split else _locate_cut(p)
    return bivalence(q1, g, q2, d)


def _locate_cut(p: Proof) -> tuple[int, int]:
    phi = p.rule.phi
    g1, g2 = p.premises[0].conclusion.gamma, p.premises[1].conclusion.gamma
    for i, e in enumerate(g1):
        for j, f in enumerate(g2):
            if e == phi and f == phi.flip() and (
                    g1[:i] + g2[:j] + g1[i + 1:] + g2[j + 1:] == p.conclusion.gamma):
                return i, j
    raise TransformError("malformed bivalence node")


def _cut(p1: Proof, i1: int, p2: Proof, i2: int) -> Proof:
    """Proof of ``_splice(p1, i1, p2, i2)``.

    Inputs are bivalence-free, share only the cut variable, and every alpha
    step in either proof uses variables found nowhere else.
    """
    b1, b2 = p1.conclusion, p2.conclusion
    target = _splice(b1, i1, b2, i2)
    r1, r2 = p1.rule, p2.rule
    # axiom absorption
    if isinstance(r1, Axiom):
        return rotate_to(p2, target)
    if isinstance(r2, Axiom):
        return rotate_to(p1, target)
    # the cut formula is not principal on one side: permute B upwards
    if r1.index != i1:
        return _permute(p1, i1, p2, i2, target, left=True)
    if r2.index != i2:
        return _permute(p2, i2, p1, i1, target, left=False)
    # principal on both sides
    if classify(b1.gamma[i1]).kind == ALPHA:
        return rotate_to(_cut(p2, i2, p1, i1), target)
    return _principal(p1, i1, p2, i2, target)


def _permute(p: Proof, i: int, other: Proof, j: int, target: Box, left: bool) -> Proof:
    """``p`` expands something other than its cut formula ``p.gamma[i]``."""
    rule, b = p.rule, p.conclusion
    entry = b.gamma[rule.index]
    phi = b.gamma[i]

    def cut_with(q: Proof) -> Proof:
        k = q.conclusion.gamma.index(phi)
        return _cut(q, k, other, j) if left else _cut(other, j, q, k)

    if isinstance(rule, AlphaExp):
        return _alpha_over(target, entry, rule.y, rule.z, cut_with(p.premises[0]))
    qy, qz = p.premises
    if phi in qy.conclusion.gamma and phi.label in qy.conclusion.tree.nodes:
        return _beta_over(target, entry, (cut_with(qy), qz))
    return _beta_over(target, entry, (qy, cut_with(qz)))


def _principal(p1: Proof, i1: int, p2: Proof, i2: int, target: Box) -> Proof:
    """``p1`` branches on the cut formula (a beta), ``p2`` expands its dual (an alpha)."""
    phi = p1.conclusion.gamma[i1]
    beta = classify(phi)
    alpha = classify(phi.flip())
    cond = p1.rule.condition
    y, z = beta.match(cond, phi.label)
    qy, qz = p1.premises
    a = p2.rule
    r = rename_proof(p2.premises[0], {a.y: y, a.z: z})
    # cut on the second components, then on the first
    d = _cut(qz, qz.conclusion.gamma.index(beta.comp2(z)),
             r, r.conclusion.gamma.index(alpha.comp2(z)))
    e = _cut(qy, qy.conclusion.gamma.index(beta.comp1(y)),
             d, d.conclusion.gamma.index(alpha.comp1(y)))
    return rotate_to(e, target)


def transitivity(p_ab: Proof, p_bc: Proof) -> Proof:
    """From proofs of ``A |- B`` and ``B |- C`` (two-formula boxes) build one of ``A |- C``."""
    b1, b2 = p_ab.conclusion, p_bc.conclusion
    for b in (b1, b2):
        if b.tree.singleton is None or [e.sign for e in b.gamma] != [Sign.IN, Sign.OUT]:
            raise TransformError(f"{b} is not a two-formula sequent box")
    x = b1.tree.singleton
    p_bc = freshen(p_bc, FreshSupply(proof_variables(p_ab) | proof_variables(p_bc), prefix="r"))
    p_bc = rename_proof(p_bc, {b2.tree.singleton: x}) if b2.tree.singleton != x else p_bc
    return bivalence(rotate_proof(p_ab, 1), 0, p_bc, 0)


# ------------------------------------------------------------------ identity

def identity_proof(a: Formula, x: Variable = "x", first: Sign = Sign.IN,
                   supply: Optional[FreshSupply] = None) -> Proof:
    """Closed tableau of ``<x | x:A^first , x:A^other>`` by induction on ``A``."""
    if supply is None:
        supply = FreshSupply({x}, prefix="i")
    b = Box(Tree.single(x), (Labeled(x, a, first), Labeled(x, a, first.flip())))
    if isinstance(a, Atom):
        return Proof(b, Axiom())
    j = 0 if classify(b.gamma[0]).kind == ALPHA else 1
    y, z = supply(), supply()
    b1 = expand_alpha(b, j, y, z)
    jb = 2 if j == 0 else 0
    step = beta_step(b1, jb)
    subs = tuple(identity_proof(s.gamma[0].formula, s.tree.singleton, s.gamma[0].sign, supply)
                 for s in (step.y_box, step.z_box))
    inner = Proof(b1, BetaExp(jb, step.condition, step.split), subs)
    return Proof(b, AlphaExp(j, y, z), (inner,))


# ------------------------------------------------------------- interpolation

class Interpolant(NamedTuple):
    witness: Labeled
    left: Proof    # <Theta  | Gamma, phi, Gamma'>
    right: Proof   # <Theta' | Delta, phi^>


def interpolate(p: Proof, u: Variable, delta: Optional[Iterable[Labeled]] = None) -> Interpolant:
    """Factor a closed box through a witness at the tree node ``u``.

    ``delta`` is the contiguous block of entries drawn from the side of the
    tree not holding ``gamma[0]``; by default it is read off the tree.
    """
    if p.has_bivalence():
        p = eliminate_bivalence(p)
    b = p.conclusion
    gamma = b.gamma
    d = _default_delta(b, u) if delta is None else set(delta)
    if not d or not d <= set(gamma) or len(d) == len(gamma):
        raise TransformError("delta must be a proper nonempty part of the box")
    pos = [i for i, e in enumerate(gamma) if e in d]
    s, t = pos[0], pos[-1] + 1
    if t - s != len(pos) or s == 0 and t == len(gamma):
        raise TransformError("delta is not a contiguous block of the list")
    theta, theta2 = _sides(b, d, u)
    supply = FreshSupply(proof_variables(p), prefix="w")
    phi, left, right = _interp(p, frozenset(d), u, supply)
    left = rotate_to(left, Box(theta, gamma[:s] + (phi,) + gamma[t:]))
    right = rotate_to(right, Box(theta2, gamma[s:t] + (phi.flip(),)))
    return Interpolant(phi, left, right)


def _default_delta(b: Box, u: Variable) -> set:
    first = b.gamma[0]
    if b.tree.singleton is not None:
        return set(b.gamma[1:])
    if first.label == u:
        return set(b.gamma[1:])
    a, c = components_at(b.tree, u)
    other = c if first.label in a.nodes else a
    return {e for e in b.gamma if e.label in other.nodes}


def _blocks(b: Box, d: frozenset):
    """``(delta block, rest)`` in cyclic order, each starting at its first entry."""
    g, n = b.gamma, len(b.gamma)
    starts = [i for i in range(n) if g[i] in d and g[i - 1] not in d]
    if len(starts) != 1:
        raise TransformError("delta is not cyclically contiguous")
    s = starts[0]
    rot = g[s:] + g[:s]
    k = len(d)
    if set(rot[:k]) != d:
        raise TransformError("delta is not cyclically contiguous")
    return rot[:k], rot[k:]


def _sides(b: Box, d: frozenset, u: Variable) -> tuple[Tree, Tree]:
    """``(Theta, Theta')``: the tree parts carrying the rest and ``delta``."""
    if b.tree.singleton is not None:
        return b.tree, b.tree
    dblock, gblock = _blocks(b, d)
    single = Tree.single(u)
    if len(dblock) == 1 and dblock[0].label == u:
        return b.tree, single
    if len(gblock) == 1 and gblock[0].label == u:
        return single, b.tree
    try:
        a, c = components_at(b.tree, u)
    except TreeError as e:
        raise TransformError(str(e)) from None
    if all(e.label in c.nodes for e in dblock) and all(e.label in a.nodes for e in gblock):
        return a, c
    if all(e.label in a.nodes for e in dblock) and all(e.label in c.nodes for e in gblock):
        return c, a
    raise TransformError(f"delta does not match a side of the tree at {u}")


def _interp(p: Proof, d: frozenset, u: Variable, supply: FreshSupply):
    """``(phi, L, R)`` with ``L`` proving ``<Theta | phi, rest>`` and ``R`` proving
    ``<Theta' | delta, phi^>``, both lists in cyclic order."""
    b = p.conclusion
    dblock, gblock = _blocks(b, d)
    theta, theta2 = _sides(b, d, u)

    def left_box(phi):
        return Box(theta, (phi,) + gblock)

    def right_box(phi):
        return Box(theta2, dblock + (phi.flip(),))

    if theta2.singleton is not None:
        # delta is the single entry at u: it is its own witness
        phi = dblock[0]
        return phi, rotate_to(p, left_box(phi)), identity_proof(phi.formula, u, phi.sign, supply)
    if theta.singleton is not None:
        phi = gblock[0].flip()
        return (phi, identity_proof(phi.formula, u, phi.sign, supply),
                rotate_to(p, right_box(phi)))

    rule = p.rule
    psi = b.gamma[rule.index]
    in_delta = psi in d
    if isinstance(rule, AlphaExp):
        q = p.premises[0]
        cls = classify(psi)
        if in_delta:
            d2 = (d - {psi}) | {cls.comp1(rule.y), cls.comp2(rule.z)}
            phi, left, r = _interp(q, d2, u, supply)
            return phi, left, _alpha_over(right_box(phi), psi, rule.y, rule.z, r)
        phi, l, right = _interp(q, d, u, supply)
        return phi, _alpha_over(left_box(phi), psi, rule.y, rule.z, l), right
    if isinstance(rule, BetaExp):
        qs = p.premises
        qa, qo = (qs[0], qs[1]) if u in qs[0].conclusion.tree.nodes else (qs[1], qs[0])
        if in_delta:
            rest = set(gblock)
            d2 = frozenset(e for e in qa.conclusion.gamma if e not in rest)
            phi, left, r = _interp(qa, d2, u, supply)
            return phi, left, _beta_over(right_box(phi), psi, (r, qo))
        phi, l, right = _interp(qa, d, u, supply)
        return phi, _beta_over(left_box(phi), psi, (l, qo)), right
    raise TransformError(f"unexpected rule {rule!r} in a composite box")
