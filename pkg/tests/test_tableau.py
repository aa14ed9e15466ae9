import json

import pytest
from hypothesis import given
import hypothesis.strategies as st

from conftest import formulas
from lgtableau.checker import check_proof
from lgtableau.structure import Family, Labeled, Tree, canonical_key, parse_box, plus, sequent_box, times
from lgtableau.syntax import Atom, Binary, Sign, parse_formula
from lgtableau.tableau import (
    ALPHA, BETA, LITERAL, AlphaExp, BetaExp, ExpansionError, NotProvable, Prover, balanced,
    beta_step, classify, dump_proof, expand_alpha, expand_beta, format_proof, load_proof,
    prove, prove_sequent,
)

F = parse_formula
A, B = Atom("a"), Atom("b")


def seq(a, b):
    return prove_sequent(F(a), F(b))


# (op, sign of alpha) -> (condition over x,y,z ; y component ; z component)
ALPHA_TABLE = [
    ("a / b", Sign.OUT, times("z", "x", "y"), (B, Sign.IN), (A, Sign.OUT)),
    ("b \\ a", Sign.OUT, times("y", "z", "x"), (A, Sign.OUT), (B, Sign.IN)),
    ("a * b", Sign.IN, times("x", "y", "z"), (A, Sign.IN), (B, Sign.IN)),
    ("a o/ b", Sign.IN, plus("y", "x", "z"), (A, Sign.IN), (B, Sign.OUT)),
    ("b o\\ a", Sign.IN, plus("z", "y", "x"), (B, Sign.OUT), (A, Sign.IN)),
    ("a + b", Sign.OUT, plus("x", "z", "y"), (B, Sign.OUT), (A, Sign.OUT)),
]


@pytest.mark.parametrize("text,sign,cond,c1,c2", ALPHA_TABLE)
def test_alpha_rows(text, sign, cond, c1, c2):
    cls = classify(Labeled("x", F(text), sign))
    assert cls.kind == ALPHA
    assert cls.condition("x", "y", "z") == cond
    assert cls.comp1("y") == Labeled("y", *c1)
    assert cls.comp2("z") == Labeled("z", *c2)


@pytest.mark.parametrize("text,sign,cond,c1,c2", ALPHA_TABLE)
def test_beta_rows_are_sign_flips(text, sign, cond, c1, c2):
    cls = classify(Labeled("x", F(text), sign.flip()))
    assert cls.kind == BETA
    assert cls.condition("x", "y", "z") == cond
    assert cls.comp1("y") == Labeled("y", c1[0], c1[1].flip())
    assert cls.comp2("z") == Labeled("z", c2[0], c2[1].flip())


def test_atoms_are_literals():
    assert classify(Labeled("x", A, Sign.IN)).kind == LITERAL


def test_cut_counterexample_proof():
    p = seq("p * (r o/ ((p \\ q) o\\ r))", "q")
    assert p and check_proof(p)
    assert {c.family for c in p.conditions_used()} == {Family.TIMES, Family.PLUS}
    # two alpha steps, two beta steps, three closed leaves
    rules = [type(q.rule).__name__ for q in p.nodes()]
    assert rules.count("AlphaExp") == 2 and rules.count("BetaExp") == 2
    assert rules.count("Axiom") == 3
    inner = p.premises[0].premises[0].conclusion
    expected = parse_box("<R+(u,z,v) ; R*(x,y,z) | y:p^i , u:r^i , v:((p \\ q) o\\ r)^o , x:q^o>")
    assert canonical_key(inner) == canonical_key(expected)


@pytest.mark.parametrize("text", [
    "<R*(x,h,z) ; R*(z,w,p) | h:(s / (np \\ s))^i , w:((np \\ s) / np)^i , p:np^i , x:s^o>",
    "<R+(y,h,x) ; R+(p,w,y) | h:((np \\ s) o/ s)^o , w:(np o/ (np \\ s))^o , p:np^i , x:s^o>",
])
def test_he_saw_pete_boxes(text):
    p = prove(parse_box(text))
    assert p and check_proof(p)


@pytest.mark.parametrize("a,b", [
    ("(a / b) * b", "a"),
    ("b * (b \\ a)", "a"),
    ("a", "(a * b) / b"),
    ("a", "c / (a \\ c)"),
    ("a", "(c / a) \\ c"),
    ("(a + b) o/ b", "a"),
    ("a o\\ (a + b)", "b"),
    ("c", "(c o/ b) + b"),
    ("c", "a + (a o\\ c)"),
    ("a * (c o/ ((a \\ b) o\\ c))", "b"),
])
def test_theorems(a, b):
    p = seq(a, b)
    assert p and check_proof(p)


@pytest.mark.parametrize("a,b", [
    ("p", "q"),
    ("a * (b * c)", "(a * b) * c"),
    ("(a * b) * c", "a * (b * c)"),
    ("a * b", "b * a"),
    ("(a / b) * (b / c)", "a / c"),
    ("a", "a * a"),
    ("a + b", "b + a"),
    ("(a o/ b) * c", "(a * c) o/ b"),    # a Grishin interaction, not part of the base logic
])
def test_non_theorems(a, b):
    r = seq(a, b)
    assert isinstance(r, NotProvable) and not r


def test_alpha_needs_fresh_variables():
    b = sequent_box(F("a * b"), F("c"))
    with pytest.raises(ExpansionError):
        expand_alpha(b, 0, "x", "y")
    with pytest.raises(ExpansionError):
        expand_alpha(b, 1, "y", "z")       # c^o is a literal


def test_beta_rejects_interleaved_sides():
    b = parse_box("<R*(x,y,z) ; R*(z,u,v) | x:(p * q)^o , u:p^i , y:p^i , v:p^i>")
    with pytest.raises(ExpansionError, match="contiguous"):
        beta_step(b, 0)


def test_beta_split_cases():
    # Gamma empty: y side directly after the beta formula
    b = parse_box("<R*(x,y,z) | x:(a * b)^o , y:a^i , z:b^i>")
    yb, zb = expand_beta(b, 0)
    assert str(yb) == "<y | y:a^o , y:a^i>"
    assert str(zb) == "<z | z:b^o , z:b^i>"
    # Delta' empty: the beta formula closes the list
    b = parse_box("<R*(x,y,z) | y:a^i , z:b^i , x:(a * b)^o>")
    step = beta_step(b, 2)
    assert step.split == (1, 1, 0, 0)
    assert str(step.y_box) == "<y | y:a^i , y:a^o>"
    assert str(step.z_box) == "<z | z:b^i , z:b^o>"
    assert check_proof(prove(b))


def test_beta_needs_matching_condition():
    b = parse_box("<R*(x,y,z) | y:a^i , z:b^i , x:(a + b)^o>")
    with pytest.raises(ExpansionError):
        beta_step(b, 2)


def test_prover_memo_is_reused():
    pr = Prover()
    b = sequent_box(F("(p * q) / r"), F("(p * q) / r"))
    assert pr.prove(b)
    n = len(pr.memo)
    assert pr.prove(b) and len(pr.memo) == n


def test_proof_serialisation_roundtrip():
    p = seq("p * (r o/ ((p \\ q) o\\ r))", "q")
    text = dump_proof(p)
    json.loads(text)
    assert load_proof(text) == p
    assert "[closed]" in format_proof(p)


def test_balance_prune():
    assert not balanced(sequent_box(F("p"), F("q")))
    assert not balanced(sequent_box(F("a"), F("a * a")))
    assert balanced(sequent_box(F("a * b"), F("b * a")))


@given(formulas(6))
def test_identity_property(f):
    p = prove_sequent(f, f)
    assert p and check_proof(p)


@given(formulas(4), formulas(3), st.sampled_from(["D * {}", "{} * D", "D / ({})", "({}) \\ D"]))
def test_monotonicity(a, d, ctx):
    # a |- (a*d)/d holds; placing both sides in a context keeps (isotone) or
    # reverses (antitone) the direction
    b = Binary("/", Binary("*", a, d), d)
    assert prove_sequent(a, b)
    wrap = {
        "D * {}": lambda g: Binary("*", d, g),
        "{} * D": lambda g: Binary("*", g, d),
        "D / ({})": lambda g: Binary("/", d, g),
        "({}) \\ D": lambda g: Binary("\\", g, d),
    }[ctx]
    if "*" in ctx:
        assert prove_sequent(wrap(a), wrap(b))
    else:
        assert prove_sequent(wrap(b), wrap(a))


@given(formulas(5), formulas(5))
def test_found_proofs_check(a, b):
    p = prove_sequent(a, b)
    if p:
        assert check_proof(p)
        assert all(balanced(q.conclusion) for q in p.nodes())
