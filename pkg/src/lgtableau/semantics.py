"""Finite ternary frames with two accessibility relations.

Clauses (``R*(x,y,z)``: x is the merger of y and z)::

    x in A * B   iff  some R*(x,y,z) with y in A and z in B
    y in C / B   iff  every R*(x,y,z) with z in B has x in C
    z in A \\ C   iff  every R*(x,y,z) with y in A has x in C
    x in A + B   iff  every R+(x,y,z) has y in A or z in B
    y in C o/ B  iff  some R+(x,y,z) with z not in B and x in C
    z in A o\\ C  iff  some R+(x,y,z) with y not in A and x in C

Worlds are the integers ``0..n-1``; extensions are computed as bitmasks.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .structure import Condition, Family, Labeled
from .syntax import Atom, Binary, Formula, Sign, atoms, subformulas

__all__ = [
    "Model", "eval_formula", "check_sequent", "satisfies_set", "random_model",
    "search_countermodel", "check_frame_constraint", "constrained_model",
    "families_used", "format_model", "parse_model", "FRAME_CONSTRAINTS",
]

FRAME_CONSTRAINTS = ("assoc1", "assoc2", "comm")
_TIMES_OPS = ("*", "/", "\\")


@dataclass(frozen=True)
class Model:
    size: int
    rtimes: frozenset = frozenset()
    rplus: frozenset = frozenset()
    valuation: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a model needs at least one world")
        object.__setattr__(self, "rtimes", frozenset(map(tuple, self.rtimes)))
        object.__setattr__(self, "rplus", frozenset(map(tuple, self.rplus)))
        object.__setattr__(self, "valuation",
                           {a: frozenset(ws) for a, ws in self.valuation.items()})
        for t in self.rtimes | self.rplus:
            if len(t) != 3 or not all(0 <= w < self.size for w in t):
                raise ValueError(f"triple {t} is not over the worlds")
        for a, ws in self.valuation.items():
            if not all(0 <= w < self.size for w in ws):
                raise ValueError(f"valuation of {a} leaves the worlds")

    @property
    def worlds(self) -> range:
        return range(self.size)

    def __hash__(self):
        return hash((self.size, self.rtimes, self.rplus,
                     frozenset(self.valuation.items())))


def _mask(ws: Iterable[int]) -> int:
    m = 0
    for w in ws:
        m |= 1 << w
    return m


def _unmask(m: int) -> frozenset:
    return frozenset(i for i in range(m.bit_length()) if m >> i & 1)


def _eval(m: Model, f: Formula, val: Mapping[str, int], cache: dict) -> int:
    if f in cache:
        return cache[f]
    if isinstance(f, Atom):
        r = val.get(f.name, 0)
    else:
        a = _eval(m, f.left, val, cache)
        b = _eval(m, f.right, val, cache)
        r = _connective(m, f.op, a, b)
    cache[f] = r
    return r


def _connective(m: Model, op: str, a: int, b: int) -> int:
    full = (1 << m.size) - 1
    r = 0
    if op == "*":
        for x, y, z in m.rtimes:
            if a >> y & 1 and b >> z & 1:
                r |= 1 << x
        return r
    if op == "/":      # a = C, b = B, evaluated at the middle slot
        bad = 0
        for x, y, z in m.rtimes:
            if b >> z & 1 and not a >> x & 1:
                bad |= 1 << y
        return full & ~bad
    if op == "\\":     # a = A, b = C, evaluated at the right slot
        bad = 0
        for x, y, z in m.rtimes:
            if a >> y & 1 and not b >> x & 1:
                bad |= 1 << z
        return full & ~bad
    if op == "+":
        bad = 0
        for x, y, z in m.rplus:
            if not a >> y & 1 and not b >> z & 1:
                bad |= 1 << x
        return full & ~bad
    if op == "o/":     # a = C, b = B
        for x, y, z in m.rplus:
            if not b >> z & 1 and a >> x & 1:
                r |= 1 << y
        return r
    if op == "o\\":    # a = A, b = C
        for x, y, z in m.rplus:
            if not a >> y & 1 and b >> x & 1:
                r |= 1 << z
        return r
    raise ValueError(op)


def _valuation_masks(m: Model) -> dict:
    return {a: _mask(ws) for a, ws in m.valuation.items()}


def eval_formula(m: Model, f: Formula) -> frozenset:
    """The set of worlds where ``f`` holds; unlisted atoms are empty."""
    return _unmask(_eval(m, f, _valuation_masks(m), {}))


def check_sequent(m: Model, a: Formula, b: Formula) -> bool:
    cache: dict = {}
    val = _valuation_masks(m)
    return _eval(m, a, val, cache) & ~_eval(m, b, val, cache) == 0


def satisfies_set(m: Model, assignment: Mapping[str, int],
                  items: Iterable) -> bool:
    """Truth of a set of conditions and labeled signed formulas under an interpretation."""
    val = _valuation_masks(m)
    cache: dict = {}
    for it in items:
        if isinstance(it, Condition):
            rel = m.rtimes if it.family is Family.TIMES else m.rplus
            if tuple(assignment[v] for v in it.variables) not in rel:
                return False
        elif isinstance(it, Labeled):
            holds = bool(_eval(m, it.formula, val, cache) >> assignment[it.label] & 1)
            if holds != (it.sign is Sign.IN):
                return False
        else:
            raise TypeError(f"cannot evaluate {it!r}")
    return True


def families_used(formulas: Iterable[Formula]) -> set:
    out = set()
    for f in formulas:
        for g in subformulas(f):
            if isinstance(g, Binary):
                out.add(Family.TIMES if g.op in _TIMES_OPS else Family.PLUS)
    return out


def random_model(size: int, rng: random.Random, atom_names: Iterable[str] = (),
                 families: Iterable[Family] = (Family.TIMES, Family.PLUS),
                 p: float = 0.5) -> Model:
    """Each triple and each valuation entry is included independently with probability ``p``."""
    fams = set(families)
    triples = list(itertools.product(range(size), repeat=3))

    def rel(fam):
        return frozenset(t for t in triples if rng.random() < p) if fam in fams else frozenset()

    rt, rp = rel(Family.TIMES), rel(Family.PLUS)
    val = {a: frozenset(w for w in range(size) if rng.random() < p) for a in sorted(atom_names)}
    return Model(size, rt, rp, val)


def _exhaustive(size: int, fams: set):
    triples = list(itertools.product(range(size), repeat=3))
    subsets = [frozenset(t for i, t in enumerate(triples) if bits >> i & 1)
               for bits in range(1 << len(triples))]
    empty = [frozenset()]
    for rt in subsets if Family.TIMES in fams else empty:
        for rp in subsets if Family.PLUS in fams else empty:
            yield rt, rp


def search_countermodel(a: Formula, b: Formula, max_size: int = 4, samples: int = 2000,
                        seed: int = 0, exhaustive_limit: int = 400_000) -> Optional[Model]:
    """A model where ``a`` has a world outside ``b``, or None.

    Sizes 1 and 2 are searched exhaustively over the relations the two
    formulas mention and over valuations of their atoms, unless that space
    has more than ``exhaustive_limit`` models, in which case the size is
    sampled like the larger ones: ``samples`` random models each, seeded by
    ``seed``.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    names = sorted(x.name for x in atoms(a) | atoms(b))
    fams = families_used((a, b))
    rng = random.Random(seed)
    for size in range(1, max_size + 1):
        space = (1 << (size ** 3 * len(fams))) * (1 << (size * len(names)))
        if size > 2 or space > exhaustive_limit:
            for _ in range(samples):
                m = random_model(size, rng, names, fams)
                if not check_sequent(m, a, b):
                    return m
            continue
        vals = list(itertools.product(range(1 << size), repeat=len(names)))
        for rt, rp in _exhaustive(size, fams):
            frame = Model(size, rt, rp)
            for masks in vals:
                val = dict(zip(names, masks))
                cache: dict = {}
                if _eval(frame, a, val, cache) & ~_eval(frame, b, val, cache):
                    return Model(size, rt, rp, {n: _unmask(v) for n, v in val.items()})
    return None


# --------------------------------------------------------- frame constraints

def check_frame_constraint(m: Model, which: str) -> bool:
    r = m.rtimes
    if which == "comm":
        return all((x, b, a) in r for x, a, b in r)
    if which == "assoc1":
        # R*(x,a,y) and R*(y,b,c)  =>  some t: R*(x,t,c) and R*(t,a,b)
        return not _assoc1_violations(m)
    if which == "assoc2":
        # R*(x,t,c) and R*(t,a,b)  =>  some y: R*(x,a,y) and R*(y,b,c)
        return not _assoc2_violations(m)
    raise ValueError(f"unknown frame constraint {which!r}")


def _assoc1_violations(m: Model) -> list:
    r = m.rtimes
    out = []
    for x, a, y in r:
        for y2, b, c in r:
            if y2 == y and not any((x, t, c) in r and (t, a, b) in r for t in m.worlds):
                out.append((x, a, b, c))
    return out


def _assoc2_violations(m: Model) -> list:
    r = m.rtimes
    out = []
    for x, t, c in r:
        for t2, a, b in r:
            if t2 == t and not any((x, a, y) in r and (y, b, c) in r for y in m.worlds):
                out.append((x, a, b, c))
    return out


def constrained_model(which: str, size: int, rng: random.Random,
                      atom_names: Iterable[str] = ()) -> Model:
    """A random model closed under one frame constraint."""
    m = random_model(size, rng, atom_names, (Family.TIMES,))
    r = set(m.rtimes)
    if which == "comm":
        r |= {(x, b, a) for x, a, b in r}
    elif which in ("assoc1", "assoc2"):
        find = _assoc1_violations if which == "assoc1" else _assoc2_violations
        while True:
            bad = find(Model(size, r))
            if not bad:
                break
            x, a, b, c = bad[0]
            w = rng.randrange(size)
            if which == "assoc1":
                r |= {(x, w, c), (w, a, b)}
            else:
                r |= {(x, a, w), (w, b, c)}
    else:
        raise ValueError(f"unknown frame constraint {which!r}")
    return Model(size, frozenset(r), frozenset(), m.valuation)


# --------------------------------------------------------------- text format

def format_model(m: Model) -> str:
    lines = [f"worlds: {m.size}"]
    lines += [f"rtimes: {x} {y} {z}" for x, y, z in sorted(m.rtimes)]
    lines += [f"rplus: {x} {y} {z}" for x, y, z in sorted(m.rplus)]
    for a in sorted(m.valuation):
        ws = " ".join(map(str, sorted(m.valuation[a])))
        lines.append(f"val {a}: {ws}".rstrip())
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> Model:
    size = None
    rt, rp, val = set(), set(), {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ValueError(f"line {n}: expected 'key: values'")
        head, nums = head.strip(), rest.split()
        try:
            if head == "worlds":
                size = int(rest)
            elif head in ("rtimes", "rplus"):
                t = tuple(int(v) for v in nums)
                (rt if head == "rtimes" else rp).add(t)
            elif head.startswith("val "):
                val[head[4:].strip()] = frozenset(int(v) for v in nums)
            else:
                raise ValueError(f"unknown key {head!r}")
        except ValueError as e:
            raise ValueError(f"line {n}: {e}") from None
    if size is None:
        raise ValueError("missing 'worlds:' line")
    return Model(size, frozenset(rt), frozenset(rp), val)
