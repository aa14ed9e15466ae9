import pytest
import hypothesis.strategies as st
from hypothesis import given

from conftest import formulas
from lgtableau.checker import check_proof
from lgtableau.structure import (
    FreshSupply, Labeled, canonical_key, components_at, parse_box, rotate_box, sequent_box,
)
from lgtableau.syntax import Binary, Sign, parse_formula, subformula_closure
from lgtableau.tableau import prove, prove_sequent
from lgtableau.transform import (
    TransformError, bivalence, bivalence_node, eliminate_bivalence, freshen, identity_proof,
    interpolate, proof_variables, rename_proof, rotate_proof, transitivity,
)

F = parse_formula
EX2 = parse_box("<R*(x,h,z) ; R*(z,w,p) | h:(s / (np \\ s))^i , w:((np \\ s) / np)^i , p:np^i , x:s^o>")
EX2B = parse_box("<R+(y,h,x) ; R+(p,w,y) | h:((np \\ s) o/ s)^o , w:(np o/ (np \\ s))^o , p:np^i , x:s^o>")


def test_rotation_rebuilds_proofs():
    p = prove(EX2)
    for k in range(4):
        q = rotate_proof(p, k)
        assert q.conclusion == rotate_box(EX2, k)
        assert check_proof(q)


def test_renaming_and_freshening():
    p = prove(EX2)
    q = rename_proof(p, {"h": "he", "w": "saw"})
    assert check_proof(q)
    assert {"he", "saw"} <= proof_variables(q)
    f = freshen(p)
    assert check_proof(f)
    assert f.conclusion == p.conclusion    # root variables stay put


def test_transitivity_example():
    ab = prove_sequent(F("(a / b) * b"), F("a"))
    bc = prove_sequent(F("a"), F("c / (a \\ c)"))
    p = transitivity(ab, bc)
    assert check_proof(p) and not p.has_bivalence()
    assert [(e.formula, e.sign) for e in p.conclusion.gamma] == [
        (F("(a / b) * b"), Sign.IN), (F("c / (a \\ c)"), Sign.OUT)]


def test_transitivity_requires_sequents():
    with pytest.raises(TransformError):
        transitivity(prove(EX2), prove(EX2))


def test_cut_needs_dual_formulas():
    p = identity_proof(F("p"))
    with pytest.raises(TransformError):
        bivalence(p, 0, p, 0)


def test_bivalence_with_tree_on_both_sides():
    # cut <Theta | ..., z:(np \ s)^o ...> style: split the he-saw-pete box and glue it back
    p = prove(EX2)
    it = interpolate(p, "z")
    left, right = it.left, it.right
    assert left.conclusion.tree.conditions and right.conclusion.tree.conditions
    node = bivalence_node(left, left.conclusion.gamma.index(it.witness),
                          right, right.conclusion.gamma.index(it.witness.flip()))
    assert check_proof(node)
    q = eliminate_bivalence(node)
    assert not q.has_bivalence() and check_proof(q)
    assert canonical_key(q.conclusion) == canonical_key(EX2)


def test_interpolant_of_he_saw_pete():
    it = interpolate(prove(EX2), "z")
    assert it.witness == Labeled("z", F("np \\ s"), Sign.IN)
    it2 = interpolate(prove(EX2B), "y")
    assert it2.witness.formula in subformula_closure(e.formula for e in EX2B.gamma)
    assert check_proof(it2.left) and check_proof(it2.right)


def test_interpolate_with_explicit_delta():
    p = prove(EX2)
    h = EX2.gamma[0]
    it = interpolate(p, "z", {EX2.gamma[1], EX2.gamma[2]})
    assert it.left.conclusion.gamma[0] == h
    with pytest.raises(TransformError):
        interpolate(p, "z", {EX2.gamma[0], EX2.gamma[2]})    # not contiguous


def test_interpolation_on_cut_counterexample():
    a, b = F("p * (r o/ ((p \\ q) o\\ r))"), F("q")
    p = prove_sequent(a, b)
    inner = p.premises[0].premises[0]
    tree = inner.conclusion.tree
    u = next(v for v, n in tree.occurrences().items() if n == 2)
    it = interpolate(inner, u)
    assert check_proof(it.left) and check_proof(it.right)


@given(formulas(5), st.sampled_from(list(Sign)))
def test_identity_proof_shape(f, s):
    p = identity_proof(f, "w", s)
    assert check_proof(p)
    assert p.conclusion == sequent_box(f, f, "w")._replace(
        gamma=(Labeled("w", f, s), Labeled("w", f, s.flip())))


@given(formulas(3), formulas(3), formulas(2))
def test_transitivity_property(a, d, c):
    # a |- (a*d)/d and (a*d)/d |- c/(((a*d)/d)\c)
    b = Binary("/", Binary("*", a, d), d)
    e = Binary("/", c, Binary("\\", b, c))
    p = transitivity(prove_sequent(a, b), prove_sequent(b, e))
    assert check_proof(p) and not p.has_bivalence()
    assert prove_sequent(a, e)


@given(formulas(4), formulas(3), st.integers(0, 3))
def test_rotate_proof_property(a, d, k):
    p = prove_sequent(Binary("*", Binary("/", a, d), d), a)
    inner = p.premises[0]
    q = rotate_proof(inner, k)
    assert q.conclusion == rotate_box(inner.conclusion, k) and check_proof(q)
