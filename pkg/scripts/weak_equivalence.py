"""Compare CFG recognition with direct tableau recognition on random lexicons."""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from lgtableau.generators import uses_grishin
from lgtableau.grammar import format_lexicon
from lgtableau.suites import SuiteConfig, lexicon_suite, weak_equivalence


@dataclass
class Config:
    seed: int = 2024
    lexicons: int = 10
    grishin_every: int = 2
    max_len: int = 4
    show_lexicons: bool = False
    json_out: str = ""


def run(cfg: Config) -> dict:
    suite = SuiteConfig(seed=cfg.seed, lexicons=cfg.lexicons, grishin_every=cfg.grishin_every,
                        sentence_length=cfg.max_len)
    t0 = time.perf_counter()
    grammars = lexicon_suite(suite)
    gen_time = time.perf_counter() - t0
    rows = []
    for k, g in enumerate(grammars):
        mism, total, acc, secs = weak_equivalence([g], cfg.max_len)
        rows.append(dict(lexicon=k, grishin=uses_grishin(g), words=len(g.words),
                         sentences=total, accepted=acc, mismatches=len(mism), seconds=round(secs, 2)))
        print(f"lexicon {k}: grishin={uses_grishin(g)!s:5} sentences={total:4d} "
              f"accepted={acc:3d} mismatches={len(mism)} {secs:6.2f} s")
        if cfg.show_lexicons:
            print("  " + format_lexicon(g).replace("\n", "\n  "))
    summary = dict(config=asdict(cfg), generation_seconds=round(gen_time, 2), lexicons=rows,
                   total_mismatches=sum(r["mismatches"] for r in rows),
                   total_seconds=round(sum(r["seconds"] for r in rows), 2))
    print(f"total: {summary['total_mismatches']} mismatches, {summary['total_seconds']} s "
          f"(+{gen_time:.1f} s generating)")
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump(summary, fh, indent=1)
    return summary


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(Config()).items():
        flag = "--" + name.replace("_", "-")
        if isinstance(default, bool):
            ap.add_argument(flag, action="store_true")
        else:
            ap.add_argument(flag, type=type(default), default=default)
    run(Config(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
