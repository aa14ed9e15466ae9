import pytest
import hypothesis.strategies as st
from hypothesis import given

from conftest import formulas
from lgtableau.structure import (
    Box, Condition, Family, FreshSupply, Labeled, Tree, TreeError, canonical_key, components_at,
    compose_trees, parse_box, plus, print_box, rename_box, rotate_box, rotation_offset,
    sequent_box, times, tree_functions, validate_box,
)
from lgtableau.syntax import Atom, Sign, parse_formula

EX2 = "<R*(x,h,z) ; R*(z,w,p) | h:(s / (np \\ s))^i , w:((np \\ s) / np)^i , p:np^i , x:s^o>"


@st.composite
def trees(draw, max_conditions=6):
    """Random well-formed trees, grown one condition at a time at a leaf."""
    fam = draw(st.sampled_from(list(Family)))
    conds = [Condition(fam, "v0", "v1", "v2")]
    counter = 3
    for _ in range(draw(st.integers(0, max_conditions - 1))):
        t = Tree(conds)
        hyp, con = t.leaves()
        leaf = draw(st.sampled_from(sorted(hyp | con)))
        fam = draw(st.sampled_from(list(Family)))
        slots = []
        for slot in range(3):
            vs = [f"v{counter + i}" for i in range(3)]
            vs[slot] = leaf
            c = Condition(fam, *vs)
            # glue a hypothesis to a conclusion slot and vice versa
            if (leaf in hyp and leaf in c.conclusions) or (leaf in con and leaf in c.hypotheses):
                slots.append(c)
        conds.append(draw(st.sampled_from(slots)))
        counter += 3
    return Tree(conds)


@st.composite
def boxes(draw):
    t = draw(trees())
    hyp, con = t.leaves()
    entries = [Labeled(v, draw(formulas(3)), Sign.IN if v in hyp else Sign.OUT)
               for v in sorted(hyp | con)]
    return Box(t, tuple(draw(st.permutations(entries))))


def test_he_saw_pete_box_parses_and_validates():
    b = parse_box(EX2)
    assert validate_box(b) == []
    assert parse_box(print_box(b)) == b
    n, h, c = tree_functions(b.tree)
    assert n == {"x", "h", "z", "w", "p"}
    assert h == {"h", "w", "p"} and c == {"x"}


def test_singleton_box():
    b = sequent_box(Atom("p"), Atom("q"))
    assert validate_box(b) == []
    assert print_box(b) == "<x | x:p^i , x:q^o>"
    assert tree_functions(b.tree) == ({"x"}, {"x"}, {"x"})


@pytest.mark.parametrize("conds,fragment", [
    ([times("x", "y", "z"), times("a", "b", "c")], "not a tree"),           # disconnected
    ([times("x", "y", "z"), times("x", "a", "b")], "glued on the same side"),   # two parents
    ([times("x", "y", "z"), plus("y", "x", "w")], "not a tree"),            # cycle x-y
    ([times("x", "y", "z"), times("y", "a", "b"), times("y", "c", "d")], "occurs 3 times"),
    ([times("x", "x", "z")], "not distinct"),
    ([times("x", "y", "z"), plus("y", "a", "b")], "glued on the same side"),    # y a hypothesis twice
    ([times("x", "y", "z"), times("y", "x", "w")], "not a tree"),
])
def test_tree_invariant_violations(conds, fragment):
    problems = Tree(conds).check()
    assert any(fragment in p for p in problems), problems
    with pytest.raises(TreeError):
        tree_functions(Tree(conds))


def test_box_sign_violations():
    t = Tree.of(times("x", "y", "z"))
    p = parse_formula("p")
    bad_sign = Box(t, (Labeled("y", p, Sign.OUT), Labeled("z", p, Sign.IN), Labeled("x", p, Sign.OUT)))
    assert any("hypothesis must label an input" in s for s in validate_box(bad_sign))
    missing = Box(t, (Labeled("y", p, Sign.IN), Labeled("x", p, Sign.OUT)))
    assert any("differ from leaves" in s for s in validate_box(missing))
    dup = sequent_box(p, p)._replace(gamma=(Labeled("x", p, Sign.IN), Labeled("x", p, Sign.IN)))
    assert validate_box(dup)


def test_compose_and_split_are_inverse():
    b = parse_box(EX2)
    a, c = components_at(b.tree, "z")
    assert a == Tree.of(times("z", "w", "p"))
    assert c == Tree.of(times("x", "h", "z"))
    assert compose_trees(a, c) == b.tree
    with pytest.raises(TreeError):
        compose_trees(a, a)          # z would be a conclusion on both sides


def test_fresh_supply_avoids():
    s = FreshSupply({"_1", "_2"})
    assert s() == "_3"
    assert FreshSupply(prefix="t")() == "_t1"


def test_rotation_offset():
    assert rotation_offset((1, 2, 3), (3, 1, 2)) == 2
    with pytest.raises(ValueError):
        rotation_offset((1, 2, 3), (1, 3, 2))


@given(trees())
def test_tree_arithmetic(t):
    # n conditions: 2n+1 nodes and n+2 leaves
    n = len(t.conditions)
    nodes, h, c = tree_functions(t)
    assert len(nodes) == 2 * n + 1
    assert len(h | c) == n + 2
    assert not h & c


@given(boxes())
def test_generated_boxes_are_valid(b):
    assert validate_box(b) == []
    assert parse_box(print_box(b)) == b


@given(boxes(), st.integers(0, 10))
def test_rotation_preserves_validity_and_key(b, k):
    r = rotate_box(b, k)
    assert validate_box(r) == []
    assert canonical_key(r) == canonical_key(b)


@given(boxes(), st.randoms(use_true_random=False))
def test_renaming_preserves_validity_and_key(b, rnd):
    vs = sorted(b.variables)
    images = [f"u{i}" for i in range(len(vs))]
    rnd.shuffle(images)
    r = rename_box(b, dict(zip(vs, images)))
    assert validate_box(r) == []
    assert canonical_key(r) == canonical_key(b)


def test_canonical_key_separates_tree_shapes():
    f = [Labeled(v, Atom("p"), s) for v, s in (("y", Sign.IN), ("z", Sign.IN), ("x", Sign.OUT))]
    b1 = Box(Tree.of(times("x", "y", "z")), tuple(f))
    b2 = Box(Tree.of(times("x", "z", "y")), tuple(f))
    b3 = Box(Tree.of(plus("x", "y", "z")), tuple(f))
    assert canonical_key(b1) != canonical_key(b2)
    assert canonical_key(b1) != canonical_key(b3)


def test_non_injective_renaming_rejected():
    b = parse_box(EX2)
    with pytest.raises(ValueError):
        rename_box(b, {"h": "w"})
