"""Structure trees, labeled signed formulas and boxes.

A tree is either a single variable or a set of ternary conditions
``R*(parent, mid, right)`` / ``R+(parent, mid, right)`` whose incidence graph
is an unrooted tree.  The slots carry the frame semantics: for ``R*`` the
parent is the merger of ``mid`` and ``right``.

Textual box notation::

    <R*(x,y,z) ; R+(u,z,v) | y:p^i , u:r^i , v:((p \\ q) o\\ r)^o , x:q^o>
    <x | x:p^i , x:p^o>
"""
from __future__ import annotations

import enum
import itertools
import re
from collections import Counter, defaultdict
from typing import Iterable, Mapping, NamedTuple, Optional

from .syntax import Formula, Sign, SignedFormula, parse_formula, print_signed, parse_signed

Variable = str


class Family(enum.Enum):
    TIMES = "*"
    PLUS = "+"

    def __repr__(self):
        return f"Family.{self.name}"


class Condition(NamedTuple):
    family: Family
    parent: Variable
    mid: Variable
    right: Variable

    @property
    def variables(self) -> tuple:
        return (self.parent, self.mid, self.right)

    @property
    def hypotheses(self) -> frozenset:
        if self.family is Family.TIMES:
            return frozenset((self.mid, self.right))
        return frozenset((self.parent,))

    @property
    def conclusions(self) -> frozenset:
        if self.family is Family.TIMES:
            return frozenset((self.parent,))
        return frozenset((self.mid, self.right))

    def rename(self, m: Mapping[Variable, Variable]) -> "Condition":
        return Condition(self.family, m.get(self.parent, self.parent),
                         m.get(self.mid, self.mid), m.get(self.right, self.right))

    def __str__(self):
        return f"R{self.family.value}({self.parent},{self.mid},{self.right})"


def times(x, y, z) -> Condition:
    return Condition(Family.TIMES, x, y, z)


def plus(x, y, z) -> Condition:
    return Condition(Family.PLUS, x, y, z)


class TreeError(ValueError):
    pass


class Tree:
    """Either ``Tree.single(x)`` or a nonempty set of conditions.

    Construction does not validate; call :meth:`check` or :func:`tree_functions`.
    """

    __slots__ = ("conditions", "singleton", "_hash")

    def __init__(self, conditions: Iterable[Condition] = (), singleton: Optional[Variable] = None):
        conds = frozenset(conditions)
        if bool(conds) == (singleton is not None):
            raise TreeError("a tree is either a singleton or a nonempty condition set")
        self.conditions = conds
        self.singleton = singleton
        self._hash = hash((conds, singleton))

    @classmethod
    def single(cls, x: Variable) -> "Tree":
        return cls(singleton=x)

    @classmethod
    def of(cls, *conditions: Condition) -> "Tree":
        return cls(conditions)

    def __eq__(self, other):
        return (isinstance(other, Tree) and self._hash == other._hash
                and self.singleton == other.singleton and self.conditions == other.conditions)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.singleton is not None:
            return f"Tree.single({self.singleton!r})"
        return f"Tree.of({', '.join(map(str, sorted(self.conditions, key=str)))})"

    def __str__(self):
        if self.singleton is not None:
            return self.singleton
        return " ; ".join(str(c) for c in sorted(self.conditions, key=str))

    @property
    def nodes(self) -> frozenset:
        if self.singleton is not None:
            return frozenset((self.singleton,))
        return frozenset(v for c in self.conditions for v in c.variables)

    def occurrences(self) -> Counter:
        return Counter(v for c in self.conditions for v in c.variables)

    def leaves(self) -> tuple[frozenset, frozenset]:
        """(hypotheses, conclusions) among once-occurring variables."""
        if self.singleton is not None:
            s = frozenset((self.singleton,))
            return s, s
        occ = self.occurrences()
        hyp, con = set(), set()
        for c in self.conditions:
            hyp.update(v for v in c.hypotheses if occ[v] == 1)
            con.update(v for v in c.conclusions if occ[v] == 1)
        return frozenset(hyp), frozenset(con)

    def rename(self, m: Mapping[Variable, Variable]) -> "Tree":
        if self.singleton is not None:
            return Tree.single(m.get(self.singleton, self.singleton))
        return Tree(c.rename(m) for c in self.conditions)

    def check(self) -> list[str]:
        """Violated tree invariants, empty if the tree is well formed."""
        if self.singleton is not None:
            return []
        problems = []
        for c in self.conditions:
            if len(set(c.variables)) != 3:
                problems.append(f"{c}: variables not distinct")
        occ = self.occurrences()
        for v, n in occ.items():
            if n > 2:
                problems.append(f"variable {v} occurs {n} times")
        for v in (v for v, n in occ.items() if n == 2):
            inh = sum(v in c.hypotheses for c in self.conditions)
            inc = sum(v in c.conclusions for c in self.conditions)
            if not (inh == 1 and inc == 1):
                problems.append(f"variable {v} glued on the same side twice")
        # connected + acyclic: incidence graph with V+E nodes has V+E-1 edges
        nv, nc = len(occ), len(self.conditions)
        if 3 * nc != nv + nc - 1 or len(_components(self.conditions)) != 1:
            problems.append("incidence graph is not a tree")
        return problems


def _components(conditions: Iterable[Condition]) -> list[frozenset]:
    conds = list(conditions)
    by_var = defaultdict(list)
    for i, c in enumerate(conds):
        for v in c.variables:
            by_var[v].append(i)
    seen, comps = set(), []
    for start in range(len(conds)):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(conds[i])
            for v in conds[i].variables:
                for j in by_var[v]:
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
        comps.append(frozenset(comp))
    return comps


def tree_functions(t: Tree) -> tuple[frozenset, frozenset, frozenset]:
    """Return ``(N, H, C)``; raises :class:`TreeError` on a malformed tree."""
    problems = t.check()
    if problems:
        raise TreeError("; ".join(problems))
    h, c = t.leaves()
    return t.nodes, h, c


def compose_trees(t1: Tree, t2: Tree) -> Tree:
    """Glue two trees along their single shared variable."""
    shared = t1.nodes & t2.nodes
    if len(shared) != 1:
        raise TreeError(f"trees must share exactly one variable, share {sorted(shared)}")
    (x,) = shared
    if t1.singleton is not None:
        return t2
    if t2.singleton is not None:
        return t1
    h1, c1 = t1.leaves()
    h2, c2 = t2.leaves()
    if not ((x in c1 and x in h2) or (x in h1 and x in c2)):
        raise TreeError(f"orientation clash at {x}")
    return Tree(t1.conditions | t2.conditions)


def split_tree(t: Tree, conditions_removed: Iterable[Condition], anchor: Variable) -> Tree:
    """The component of ``t`` minus ``conditions_removed`` containing ``anchor``."""
    rest = t.conditions - frozenset(conditions_removed)
    for comp in _components(rest):
        if any(anchor in c.variables for c in comp):
            return Tree(comp)
    return Tree.single(anchor)


def components_at(t: Tree, u: Variable) -> tuple[Tree, Tree]:
    """Split a tree at variable ``u``: ``(side where u is a conclusion, side where u is a hypothesis)``.

    A leaf ``u`` gives the whole tree on one side and ``Tree.single(u)`` on the other.
    """
    if t.singleton is not None:
        return t, t
    holders = [c for c in t.conditions if u in c.variables]
    if not holders:
        raise TreeError(f"{u} is not a node of the tree")
    if len(holders) == 1:
        whole, single = t, Tree.single(u)
        return (whole, single) if u in holders[0].conclusions else (single, whole)
    a, b = holders
    ta, tb = _side(t, a, b), _side(t, b, a)
    return (ta, tb) if u in a.conclusions else (tb, ta)


def _side(t: Tree, keep: Condition, drop: Condition) -> Tree:
    rest = t.conditions - {drop}
    for comp in _components(rest):
        if keep in comp:
            return Tree(comp)
    raise AssertionError("unreachable")


class Labeled(NamedTuple):
    """A labeled signed formula ``label : formula ^ sign``."""
    label: Variable
    formula: Formula
    sign: Sign

    @property
    def signed(self) -> SignedFormula:
        return SignedFormula(self.formula, self.sign)

    def flip(self) -> "Labeled":
        return Labeled(self.label, self.formula, self.sign.flip())

    def relabel(self, v: Variable) -> "Labeled":
        return Labeled(v, self.formula, self.sign)

    def __str__(self):
        return f"{self.label}:{print_signed(self.signed)}"


def lsf(label: Variable, formula, sign: Sign) -> Labeled:
    if isinstance(formula, str):
        formula = parse_formula(formula)
    return Labeled(label, formula, sign)


class Box(NamedTuple):
    tree: Tree
    gamma: tuple

    def __str__(self):
        return print_box(self)

    @property
    def variables(self) -> frozenset:
        return self.tree.nodes | {e.label for e in self.gamma}

    @property
    def total_degree(self) -> int:
        return sum(e.formula.degree for e in self.gamma)


def box(tree: Tree, *gamma: Labeled) -> Box:
    return Box(tree, tuple(gamma))


def sequent_box(a: Formula, b: Formula, x: Variable = "x") -> Box:
    return Box(Tree.single(x), (Labeled(x, a, Sign.IN), Labeled(x, b, Sign.OUT)))


def validate_box(b: Box) -> list[str]:
    """All violated box invariants; an empty list means the box is well formed."""
    problems = list(b.tree.check())
    if problems:
        return problems
    hyp, con = b.tree.leaves()
    if b.tree.singleton is not None:
        x = b.tree.singleton
        signs = sorted(e.sign.value for e in b.gamma)
        if len(b.gamma) != 2 or any(e.label != x for e in b.gamma) or signs != ["i", "o"]:
            problems.append(f"singleton box over {x} needs {x}:A^i and {x}:B^o")
        return problems
    labels = Counter(e.label for e in b.gamma)
    for v, n in labels.items():
        if n > 1:
            problems.append(f"label {v} used {n} times")
    if set(labels) != hyp | con:
        problems.append(f"labels {sorted(labels)} differ from leaves {sorted(hyp | con)}")
    for e in b.gamma:
        if e.label in hyp and e.sign is not Sign.IN:
            problems.append(f"{e}: hypothesis must label an input")
        if e.label in con and e.sign is not Sign.OUT:
            problems.append(f"{e}: conclusion must label an output")
    return problems


def rotate_box(b: Box, k: int) -> Box:
    n = len(b.gamma)
    k %= n
    return Box(b.tree, b.gamma[k:] + b.gamma[:k])


def rename_box(b: Box, m: Mapping[Variable, Variable]) -> Box:
    nodes = b.variables
    image = [m.get(v, v) for v in nodes]
    if len(set(image)) != len(image):
        raise ValueError("renaming is not injective on the box")
    return Box(b.tree.rename(m), tuple(e.relabel(m.get(e.label, e.label)) for e in b.gamma))


def rotation_offset(src: tuple, dst: tuple) -> int:
    """``k`` with ``src[k:] + src[:k] == dst``; ValueError if none exists."""
    n = len(src)
    if n != len(dst):
        raise ValueError("lists differ in length")
    if n == 0:
        return 0
    for k in range(n):
        if src[k] == dst[0] and src[k:] + src[:k] == dst:
            return k
    raise ValueError("not a rotation")


class FreshSupply:
    """Generates variables ``_<prefix><n>`` avoiding a given set."""

    def __init__(self, avoid: Iterable[Variable] = (), prefix: str = ""):
        self.avoid = set(avoid)
        self.prefix = prefix
        self.counter = itertools.count(1)

    def __call__(self) -> Variable:
        while True:
            v = f"_{self.prefix}{next(self.counter)}"
            if v not in self.avoid:
                self.avoid.add(v)
                return v


# ------------------------------------------------------------ canonical form

def canonical_form(b: Box):
    """``(key, k)``: a key equal for boxes that agree up to rotation and
    renaming, and a rotation ``k`` of ``b`` realising it."""
    n = len(b.gamma)
    fk = [(e.formula.key, e.sign.value) for e in b.gamma]
    rots = [tuple(fk[k:] + fk[:k]) for k in range(n)]
    best_f = min(rots)
    ties = [k for k in range(n) if rots[k] == best_f]
    if b.tree.singleton is not None:
        return (best_f, None), ties[0]
    where = defaultdict(list)
    for c in b.tree.conditions:
        for slot, v in enumerate(c.variables):
            where[v].append((c, slot))
    best = None
    for k in ties:
        rot = b.gamma[k:] + b.gamma[:k]
        pos = {e.label: i for i, e in enumerate(rot)}
        c0, s0 = where[rot[0].label][0]
        key = (best_f, _serialize(c0, s0, where, pos))
        if best is None or key < best[0]:
            best = (key, k)
    return best


def canonical_key(b: Box):
    return canonical_form(b)[0]


def _serialize(c: Condition, entry_slot: int, where, pos):
    parts = []
    for slot, v in enumerate(c.variables):
        if slot == entry_slot:
            continue
        if v in pos:
            parts.append((0, pos[v]))
        else:
            (other, oslot), = [(d, s) for d, s in where[v] if d is not c]
            parts.append((1, _serialize(other, oslot, where, pos)))
    return (c.family.value, entry_slot, tuple(parts))


# ------------------------------------------------------------------ notation

_COND_RE = re.compile(r"R([*+])\(\s*([^,\s]+)\s*,\s*([^,\s]+)\s*,\s*([^,\s)]+)\s*\)")


def print_box(b: Box) -> str:
    return f"<{b.tree} | {' , '.join(str(e) for e in b.gamma)}>"


def parse_condition(text: str) -> Condition:
    m = _COND_RE.fullmatch(text.strip())
    if not m:
        raise ValueError(f"bad condition {text!r}")
    return Condition(Family(m.group(1)), m.group(2), m.group(3), m.group(4))


def parse_labeled(text: str) -> Labeled:
    label, sep, rest = text.strip().partition(":")
    if not sep:
        raise ValueError(f"labeled formula needs 'label:' prefix: {text!r}")
    sf = parse_signed(rest)
    return Labeled(label.strip(), sf.formula, sf.sign)


def parse_box(text: str) -> Box:
    text = text.strip()
    if not (text.startswith("<") and text.endswith(">")):
        raise ValueError(f"box must be written <tree | gamma>: {text!r}")
    tree_part, sep, gamma_part = text[1:-1].partition("|")
    if not sep:
        raise ValueError(f"box needs '|': {text!r}")
    tree_part = tree_part.strip()
    if tree_part.startswith("R"):
        tree = Tree(parse_condition(c) for c in tree_part.split(";"))
    else:
        tree = Tree.single(tree_part)
    gamma = tuple(parse_labeled(e) for e in gamma_part.split(",") if e.strip())
    return Box(tree, gamma)
