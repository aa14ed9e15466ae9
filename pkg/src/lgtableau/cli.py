"""Command-line interface.

Exit status: 0 success (provable, recognised, valid, found), 1 negative
answer, 2 usage or input error, 3 timeout.
"""
from __future__ import annotations

import argparse
import json
import signal
import sys
from contextlib import contextmanager
from pathlib import Path

from .checker import proof_problems
from .grammar import (
    MAX_DIRECT_LENGTH, DirectRecognizer, GrammarError, cfg_derivation_to_tableau, cyk_parse,
    extract_cfg, format_cfg, parse_lexicon,
)
from .semantics import format_model, search_countermodel
from .syntax import FormulaSyntaxError, parse_formula
from .tableau import dump_proof, format_proof, load_proof, proof_to_data, prove_sequent

OK, NO, USAGE, TIMEOUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Timeout(Exception):
    pass


@contextmanager
def _deadline(seconds):
    if not seconds:
        yield
        return

    def fire(signum, frame):
        raise Timeout()

    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def parse_sequent(text: str):
    left, sep, right = text.partition("|-")
    if not sep:
        raise UsageError(f"sequent must be written 'A |- B': {text!r}")
    out = []
    for side, text in (("left", left), ("right", right)):
        try:
            out.append(parse_formula(text))
        except FormulaSyntaxError as e:
            raise UsageError(f"{side} side: {e}") from None
    return tuple(out)


def _read_lexicon(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return parse_lexicon(text)
    except GrammarError as e:
        raise UsageError(f"{path}: {e}") from None


def cmd_prove(args, out) -> int:
    a, b = parse_sequent(args.sequent)
    p = prove_sequent(a, b)
    if p:
        if args.format == "structured":
            out.write(dump_proof(p) + "\n")
        else:
            out.write(format_proof(p) + "\n")
        return OK
    if args.format == "structured":
        data = {"provable": False}
        if args.countermodel:
            m = search_countermodel(a, b, args.countermodel)
            data["countermodel"] = format_model(m) if m else None
        out.write(json.dumps(data, indent=1) + "\n")
        return NO
    out.write("not provable\n")
    if args.countermodel:
        m = search_countermodel(a, b, args.countermodel)
        if m:
            out.write("countermodel:\n" + format_model(m))
        else:
            out.write(f"no countermodel with at most {args.countermodel} worlds found\n")
    return NO


def cmd_recognize(args, out) -> int:
    g = _read_lexicon(args.lexicon)
    sentence = args.sentence.split()
    if not sentence:
        raise UsageError("empty sentence")
    unknown = [w for w in sentence if w not in g.lexicon]
    if unknown:
        raise UsageError(f"unknown word {unknown[0]!r}")
    if args.direct:
        if args.max_len > MAX_DIRECT_LENGTH:
            raise UsageError(f"--max-len is capped at {MAX_DIRECT_LENGTH}")
        if len(sentence) > args.max_len:
            raise UsageError(f"sentence has {len(sentence)} words, --max-len is {args.max_len}")
        r = DirectRecognizer(g, fusion_only=args.fusion_only, max_length=args.max_len).find(sentence)
        if args.format == "structured":
            data = {"recognized": r is not None}
            if r:
                data["proof"] = proof_to_data(r.proof)
            out.write(json.dumps(data, indent=1) + "\n")
        elif r:
            out.write("recognized\n" + format_proof(r.proof) + "\n")
        else:
            out.write("not recognized\n")
        return OK if r else NO
    cfg = extract_cfg(g)
    d = cyk_parse(cfg, sentence)
    if args.format == "structured":
        data = {"recognized": d is not None}
        if d and args.tableau:
            data["proof"] = proof_to_data(cfg_derivation_to_tableau(g, d, cfg))
        out.write(json.dumps(data, indent=1) + "\n")
    elif d:
        out.write("recognized\n" + d.format() + "\n")
        if args.tableau:
            out.write(format_proof(cfg_derivation_to_tableau(g, d, cfg)) + "\n")
    else:
        out.write("not recognized\n")
    return OK if d else NO


def cmd_extract(args, out) -> int:
    g = _read_lexicon(args.lexicon)
    cfg = extract_cfg(g)
    text = format_cfg(cfg)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    print(f"{len(cfg.nonterminals)} nonterminals, {len(cfg.productions)} productions",
          file=sys.stderr)
    return OK


def cmd_countermodel(args, out) -> int:
    a, b = parse_sequent(args.sequent)
    if args.max_size < 1:
        raise UsageError("--max-size must be at least 1")
    m = search_countermodel(a, b, args.max_size, samples=args.samples, seed=args.seed)
    if m is None:
        out.write(f"no countermodel with at most {args.max_size} worlds found\n")
        return NO
    out.write(format_model(m))
    return OK


def cmd_check(args, out) -> int:
    try:
        p = load_proof(Path(args.proof).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {args.proof}: {e.strerror}") from None
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"{args.proof}: malformed proof ({e})") from None
    problems = proof_problems(p)
    if problems:
        out.write("invalid\n" + "\n".join(problems) + "\n")
        return NO
    out.write("valid\n")
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lgtab", description="Tableaux for the Lambek-Grishin calculus.")
    ap.add_argument("--timeout", type=float, default=None, help="give up after this many seconds")
    sub = ap.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "structured"), default="text")

    p = sub.add_parser("prove", parents=[fmt], help="decide a sequent A |- B")
    p.add_argument("sequent")
    p.add_argument("--countermodel", type=int, metavar="N", default=0,
                   help="on failure, search models with up to N worlds")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("recognize", parents=[fmt], help="recognise a sentence")
    p.add_argument("lexicon")
    p.add_argument("sentence")
    p.add_argument("--direct", action="store_true", help="search tableaux directly (exponential)")
    p.add_argument("--max-len", type=int, default=MAX_DIRECT_LENGTH)
    p.add_argument("--fusion-only", action="store_true", help="fusion-only recognition trees")
    p.add_argument("--tableau", action="store_true", help="also print the tableau of the parse")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("extract-cfg", help="write the equivalent context-free grammar")
    p.add_argument("lexicon")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("countermodel", help="search a finite countermodel")
    p.add_argument("sequent")
    p.add_argument("--max-size", type=int, default=4)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_countermodel)

    p = sub.add_parser("check-proof", help="validate a structured proof file")
    p.add_argument("proof")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        with _deadline(args.timeout):
            return args.func(args, out)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except Timeout:
        print("error: timed out", file=sys.stderr)
        return TIMEOUT


if __name__ == "__main__":
    sys.exit(main())
