"""The eleven acceptance criteria, one test each, one summary line each.

Run directly (``python3 tests/test_acceptance.py``) or under pytest; either
way every criterion prints a ``PASS``/``FAIL`` line.
"""
from __future__ import annotations

import functools
import sys
import time
from pathlib import Path

import pytest

from lgtableau import check_proof, parse_formula, prove_sequent
from lgtableau.grammar import DirectRecognizer, cyk_recognize, extract_cfg, parse_lexicon
from lgtableau.generators import uses_grishin
from lgtableau.semantics import search_countermodel
from lgtableau.structure import Family
from lgtableau.suites import (
    Harvest, SuiteConfig, conservativity_suite, cut_suite, identity_suite, interpolation_suite,
    lexicon_suite, proof_rotation_check, residuation_suite, rotation_suite, soundness_suite,
    weak_equivalence,
)
from lgtableau.syntax import subformulas
from lgtableau.tableau import Prover

DATA = Path(__file__).resolve().parent.parent / "data"
CFG = SuiteConfig()


class State:
    def __init__(self):
        self.prover = Prover()
        self.harvest = Harvest()
        self.done = {}

    def run(self, name, fn):
        if name not in self.done:
            self.done[name] = fn()
        return self.done[name]


@functools.lru_cache(maxsize=None)
def state() -> State:
    return State()


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    capture = getattr(report, "capsys", None)
    if capture is not None:
        with capture.disabled():
            print("\n" + line)
    else:
        print(line)


@pytest.fixture(autouse=True)
def _show(capsys):
    report.capsys = capsys
    yield
    report.capsys = None


def _harvest_sequent(a, b, p):
    state().harvest.add_sequent(a, b, p)


# ---------------------------------------------------------------- criteria

def test_c01_cut_counterexample():
    a, b = parse_formula("p * (r o/ ((p \\ q) o\\ r))"), parse_formula("q")
    t0 = time.perf_counter()
    p = prove_sequent(a, b)
    dt = time.perf_counter() - t0
    ok = bool(p) and check_proof(p) and dt < 1.0
    if p:
        _harvest_sequent(a, b, p)
    report(1, ok, f"cut counterexample proved in {dt * 1000:.1f} ms, checker {'accepts' if p and check_proof(p) else 'rejects'}")
    assert ok


def test_c02_mixed_family_sequent():
    a, b = parse_formula("a * (c o/ ((a \\ b) o\\ c))"), parse_formula("b")
    p = prove_sequent(a, b)
    fams = {c.family for c in p.conditions_used()} if p else set()
    ok = bool(p) and check_proof(p) and fams == {Family.TIMES, Family.PLUS}
    if p:
        _harvest_sequent(a, b, p)
    report(2, ok, f"mixed-family sequent provable={bool(p)}, families={sorted(f.name for f in fams)}")
    assert ok


def test_c03_he_saw_pete():
    sentences = {"he saw pete": True, "saw he pete": False, "he saw": False}
    wrong, direct_time = [], 0.0
    for name in ("hesawpete_lifted.lex", "hesawpete_coresiduated.lex"):
        g = parse_lexicon((DATA / name).read_text())
        cfg = extract_cfg(g)
        t0 = time.perf_counter()
        rec = DirectRecognizer(g)
        found = {s: rec.find(s.split()) for s in sentences}
        direct_time += time.perf_counter() - t0
        for s, want in sentences.items():
            cyk = cyk_recognize(cfg, s.split())
            if cyk != want or (found[s] is not None) != want:
                wrong.append((name, s, cyk, found[s] is not None))
            if found[s] is not None:
                state().harvest.add_box(found[s].box, found[s].proof)
                assert check_proof(found[s].proof)
    ok = not wrong and direct_time < 10.0
    report(3, ok, f"2 lexicons x 3 sentences x 2 recognisers, {len(wrong)} wrong, direct path {direct_time:.2f} s")
    assert ok


def test_c04_identities():
    st = state()
    failures = st.run("identity", lambda: identity_suite(CFG, st.prover, st.harvest))
    report(4, not failures, f"{CFG.identities} identities of degree <= {CFG.identity_degree}, {len(failures)} failures")
    assert not failures


def test_c05_residuation():
    st = state()
    violations, positives = st.run("residuation", lambda: residuation_suite(CFG, st.prover, st.harvest))
    ok = not violations and positives > 0
    report(5, ok, f"{CFG.triples} triples x 6 shifts, {positives} provable sequents, {len(violations)} violations")
    assert ok


def test_c06_cut_elimination():
    st = state()
    st.run("identity", lambda: identity_suite(CFG, st.prover, st.harvest))
    st.run("residuation", lambda: residuation_suite(CFG, st.prover, st.harvest))
    failures, count, nontrivial = st.run("cut", lambda: cut_suite(CFG, st.harvest))
    ok = not failures and count == CFG.cut_pairs
    report(6, ok, f"{count} cut pairs ({nontrivial} with no identity premise), {len(failures)} failures")
    assert ok


def test_c07_rotation_renaming():
    st = state()
    failures, nboxes, nneg = st.run("rotation", lambda: rotation_suite(CFG, st.prover, st.harvest))
    rebuilt = proof_rotation_check(st.harvest)
    ok = not failures and not rebuilt and nboxes == CFG.boxes and nneg == CFG.nonprovable
    report(7, ok, f"{nboxes} provable boxes and {nneg} non-provable sequents, "
                  f"{len(failures)} decision flips, {len(rebuilt)} bad rotated proofs")
    assert ok


def test_c08_soundness():
    st = state()
    _ensure_all(st)
    bad, nseq, nmod = soundness_suite(CFG, st.harvest)
    cm1 = search_countermodel(parse_formula("p"), parse_formula("q"), 4)
    cm2 = search_countermodel(parse_formula("a * (b * c)"), parse_formula("(a * b) * c"), 4)
    ok = not bad and cm1 is not None and cm2 is not None and cm1.size <= 4 and cm2.size <= 4
    report(8, ok, f"{nseq} proved sequents x {nmod} models, {len(bad)} countermodels; "
                  f"non-theorem countermodels of size {cm1 and cm1.size}, {cm2 and cm2.size}")
    assert ok


def test_c09_interpolation():
    st = state()
    st.run("rotation", lambda: rotation_suite(CFG, st.prover, st.harvest))
    failures, count = st.run("interp", lambda: interpolation_suite(CFG, st.prover, st.harvest))
    ok = not failures and count == CFG.interpolations
    report(9, ok, f"{count} interpolations at inner nodes, {len(failures)} failures")
    assert ok


def test_c10_weak_equivalence():
    st = state()
    grammars = lexicon_suite(CFG)
    grishin = sum(map(uses_grishin, grammars))
    sizes_ok = all(len(g.words) <= 4 and all(sf.formula.degree <= 3 for es in g.lexicon.values() for sf in es)
                   for g in grammars)
    mismatches, total, accepted, seconds = st.run(
        "weak", lambda: weak_equivalence(grammars, CFG.sentence_length, st.harvest))
    ok = not mismatches and grishin >= 3 and sizes_ok and seconds < 300
    report(10, ok, f"{len(grammars)} lexicons ({grishin} Grishin), {total} sentences, {accepted} accepted, "
                   f"{len(mismatches)} mismatches, {seconds:.1f} s")
    assert ok


def test_c11_conservativity():
    st = state()
    _ensure_all(st)
    bad, checked = conservativity_suite(st.harvest)
    ok = not bad and checked > 0
    report(11, ok, f"{checked} proofs over fusion and implications only, {len(bad)} with R+ conditions")
    assert ok


def _ensure_all(st: State) -> None:
    st.run("identity", lambda: identity_suite(CFG, st.prover, st.harvest))
    st.run("residuation", lambda: residuation_suite(CFG, st.prover, st.harvest))
    st.run("cut", lambda: cut_suite(CFG, st.harvest))
    st.run("rotation", lambda: rotation_suite(CFG, st.prover, st.harvest))
    st.run("interp", lambda: interpolation_suite(CFG, st.prover, st.harvest))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
