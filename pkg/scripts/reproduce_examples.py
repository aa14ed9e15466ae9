"""Print the worked examples: the two proofs and the two recognitions."""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from lgtableau import check_proof, parse_formula, prove_sequent
from lgtableau.grammar import DirectRecognizer, cfg_derivation_to_tableau, cyk_parse, extract_cfg, parse_lexicon
from lgtableau.tableau import format_proof

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class Config:
    data_dir: Path = ROOT / "data"
    sentence: str = "he saw pete"
    sequents: tuple = (
        "p * (r o/ ((p \\ q) o\\ r)) |- q",
        "a * (c o/ ((a \\ b) o\\ c)) |- b",
    )
    lexicons: tuple = ("hesawpete_lifted.lex", "hesawpete_coresiduated.lex")


def sequents(cfg: Config) -> None:
    for text in cfg.sequents:
        left, right = text.split("|-")
        t0 = time.perf_counter()
        p = prove_sequent(parse_formula(left), parse_formula(right))
        dt = (time.perf_counter() - t0) * 1000
        print(f"== {text}   ({dt:.1f} ms, checker: {check_proof(p) if p else 'n/a'})")
        print(format_proof(p) if p else "not provable")
        print()


def recognitions(cfg: Config) -> None:
    words = cfg.sentence.split()
    for name in cfg.lexicons:
        g = parse_lexicon((cfg.data_dir / name).read_text())
        grammar = extract_cfg(g)
        print(f"== {name}: {len(grammar.productions)} productions")
        d = cyk_parse(grammar, words)
        if d is None:
            print("CFG path: not recognized")
        else:
            print("CFG derivation:")
            print(d.format())
            p = cfg_derivation_to_tableau(g, d, grammar)
            print(f"tableau read off the derivation (checker: {check_proof(p)}):")
            print(format_proof(p))
        t0 = time.perf_counter()
        r = DirectRecognizer(g).find(words)
        dt = time.perf_counter() - t0
        print(f"direct search ({dt:.2f} s): {'recognized' if r else 'not recognized'}")
        if r:
            print(format_proof(r.proof))
        print()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sentence", default=Config.sentence)
    args = ap.parse_args()
    cfg = Config(sentence=args.sentence)
    sequents(cfg)
    recognitions(cfg)


if __name__ == "__main__":
    main()
