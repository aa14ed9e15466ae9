from dataclasses import replace

from hypothesis import given

from conftest import formulas
from lgtableau.checker import check_proof, proof_problems
from lgtableau.structure import Labeled, Tree, parse_box, sequent_box
from lgtableau.syntax import Atom, Sign, parse_formula
from lgtableau.tableau import AlphaExp, Axiom, BetaExp, Proof, load_proof, dump_proof, prove, prove_sequent
from lgtableau.transform import bivalence_node, identity_proof

F = parse_formula
EX1 = prove_sequent(F("p * (r o/ ((p \\ q) o\\ r))"), F("q"))


def with_premise(p, k, q):
    ps = list(p.premises)
    ps[k] = q
    return replace(p, premises=tuple(ps))


def test_valid_proof_has_no_problems():
    assert proof_problems(EX1) == []


def test_unclosed_leaf():
    b = sequent_box(Atom("p"), Atom("q"))
    assert not check_proof(Proof(b, Axiom()))


def test_complex_identity_is_not_an_axiom():
    b = sequent_box(F("p * q"), F("p * q"))
    assert any("atomic identity" in s for s in proof_problems(Proof(b, Axiom())))


def test_alpha_with_stale_variable():
    # reuse a variable of the conclusion as a "fresh" one
    alpha = EX1
    bad_rule = AlphaExp(alpha.rule.index, "x", alpha.rule.z)
    assert not check_proof(replace(alpha, rule=bad_rule))


def test_alpha_freshness_is_branch_wide():
    # the second alpha step reuses a variable introduced by the first
    first = EX1
    second = first.premises[0]
    y_old = first.rule.y
    bad = with_premise(first, 0, replace(second, rule=AlphaExp(second.rule.index, y_old, second.rule.z)))
    assert not check_proof(bad)


def test_alpha_with_wrong_premise():
    inner = EX1.premises[0]
    wrong = replace(inner, conclusion=inner.conclusion._replace(gamma=inner.conclusion.gamma[::-1]))
    assert not check_proof(with_premise(EX1, 0, wrong))


def test_beta_with_swapped_premises():
    node = EX1.premises[0].premises[0]
    assert isinstance(node.rule, BetaExp)
    swapped = replace(node, premises=node.premises[::-1])
    assert not check_proof(swapped)


def test_beta_on_wrong_condition():
    b = parse_box("<R*(x,y,z) ; R*(z,u,v) | x:(s / (u * v))^i , y:s^o , u:p^i , v:p^i>")
    p = prove(b)
    assert not p       # unbalanced, but the checker must independently reject a fake
    fake = Proof(b, BetaExp(0, next(iter(b.tree.conditions))), ())
    assert not check_proof(fake)


def test_invalid_box_reported():
    b = parse_box("<R*(x,y,z) | y:p^o , z:p^i , x:p^o>")
    problems = proof_problems(Proof(b, Axiom()))
    assert any("invalid box" in s for s in problems)


def test_bivalence_node_accepted():
    p1 = identity_proof(F("p / q"), "x")
    p2 = identity_proof(F("p / q"), "x", Sign.OUT)
    # <x | x:A^i , x:A^o> and <x | x:A^o , x:A^i> cut on their first entries
    node = bivalence_node(p1, 0, p2, 0)
    assert node.has_bivalence()
    assert check_proof(node)


def test_structured_proof_roundtrip_keeps_validity():
    assert check_proof(load_proof(dump_proof(EX1)))


@given(formulas(6))
def test_identity_proofs_check(f):
    assert check_proof(identity_proof(f))
