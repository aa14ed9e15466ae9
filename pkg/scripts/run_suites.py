"""Run the property suites behind the acceptance tests and print a summary."""
from __future__ import annotations

import argparse
import time
from dataclasses import asdict, fields

from lgtableau.suites import (
    Harvest, SuiteConfig, conservativity_suite, cut_suite, identity_suite, interpolation_suite,
    lexicon_suite, residuation_suite, rotation_suite, soundness_suite, weak_equivalence,
)
from lgtableau.tableau import Prover


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for f in fields(SuiteConfig):
        ap.add_argument("--" + f.name.replace("_", "-"), type=int, default=f.default)
    ap.add_argument("--skip-grammar", action="store_true")
    args = vars(ap.parse_args())
    skip = args.pop("skip_grammar")
    cfg = SuiteConfig(**args)
    print("config:", asdict(cfg))
    prover, harvest = Prover(), Harvest()

    def step(name, fn):
        t0 = time.perf_counter()
        r = fn()
        print(f"{name:15s} {r if not isinstance(r, tuple) else _brief(r)}  ({time.perf_counter() - t0:.1f} s)")

    step("identities", lambda: len(identity_suite(cfg, prover, harvest)))
    step("residuation", lambda: residuation_suite(cfg, prover, harvest))
    step("cut", lambda: cut_suite(cfg, harvest))
    step("rotation", lambda: rotation_suite(cfg, prover, harvest))
    step("interpolation", lambda: interpolation_suite(cfg, prover, harvest))
    if not skip:
        step("weak equiv.", lambda: weak_equivalence(lexicon_suite(cfg), cfg.sentence_length, harvest))
    step("soundness", lambda: soundness_suite(cfg, harvest))
    step("conservativity", lambda: conservativity_suite(harvest))


def _brief(r: tuple) -> tuple:
    # failure lists are shown by length
    return tuple(len(x) if isinstance(x, list) else (round(x, 2) if isinstance(x, float) else x) for x in r)


if __name__ == "__main__":
    main()
