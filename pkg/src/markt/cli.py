"""``markt`` command line: load models and suites, run one check, report.

Exit status: 0 when the relation holds, 1 when it fails, 2 on usage or
parse errors.
"""

import argparse
from fractions import Fraction
import json
import sys
import time
import warnings
from pathlib import Path

from markt import __version__
from markt.computations import EpsilonSpec
from markt.lts import DEFAULT_CAP, StateCapExceeded, derive_lts, to_ctmc
from markt.parser import parse_model
from markt.rationals import format_rational, parse_rational, parse_rational_list
from markt.report import Report, digest
from markt.similarity import (
    EPSILON_MODES, CompletenessWarning, SimilarityParams, check_behavioral, check_fast,
    check_mt_equiv, check_prob, check_slow, check_slow_simple, check_temporal,
    check_unified, min_epsilon_verdict,
)
from markt.suite import (
    NamedTest, TracePattern, dedupe, gen_suite, parse_alphabet, parse_suite,
)
from markt.terms import TAU, TermError
from markt.testing import precision, recall

PAIR_CHECKS = (
    "equiv", "slow", "slow-simple", "fast", "temporal", "temporal-pm", "prob",
    "behavioral", "behavioral-timed", "unified", "min-epsilon",
)


class UsageError(Exception):
    pass


def build_parser():
    parser = argparse.ArgumentParser(
        prog="markt", description="Exact and approximate Markovian testing checks.")
    parser.add_argument("--version", action="version", version=f"markt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in PAIR_CHECKS:
        p = sub.add_parser(name)
        p.add_argument("model1")
        p.add_argument("model2")
        p.add_argument("--suite", action="append", default=[],
                       help='suite file or pattern:"g.a.*" (repeatable)')
        p.add_argument("--alphabet", help="comma-separated alphabet for patterns")
        p.add_argument("--fail-sets", choices=("maximal", "minimal"), default="maximal")
        p.add_argument("--eps", help="scalar temporal tolerance")
        p.add_argument("--eps-vec", help="per-step temporal tolerances, comma-separated")
        p.add_argument("--nu", help="probability tolerance")
        p.add_argument("--prec", help="precision floor")
        p.add_argument("--rec", help="recall floor")
        p.add_argument("--mode", choices=sorted(EPSILON_MODES), default="slow",
                       help="relation searched by min-epsilon")
        p.add_argument("--two-sided", action="store_true",
                       help="temporal: use the two-sided tolerance band")
        _common(p)

    p = sub.add_parser("prec-rec")
    p.add_argument("test1")
    p.add_argument("test2")
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("info")
    p.add_argument("model1")
    _common(p)
    return parser


def _common(p):
    p.add_argument("--max-len", type=int)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--format", choices=("json", "text"), default="text")


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_model(path, cap):
    model = parse_model(_read(path))
    return derive_lts(model.main, model.env, cap)


def load_suite(sources, alphabet, fail_sets, models):
    if not sources:
        raise UsageError("no test suite given (use --suite)")
    named = []
    for src in sources:
        if src.startswith("pattern:"):
            if alphabet is None:
                alphabet = frozenset(a for lts in models for a in lts.actions if a != TAU)
            pattern = TracePattern.parse(src[len("pattern:"):], alphabet)
            named += [_named(t) for t in gen_suite(pattern, fail_sets)]
        else:
            named += parse_suite(_read(src), alphabet, fail_sets)
    return dedupe(named)


def _named(test):
    return NamedTest(".".join(test.success_trace), test)


def _epsilon(args):
    if args.eps and args.eps_vec:
        raise UsageError("give either --eps or --eps-vec")
    if args.eps_vec:
        return EpsilonSpec(parse_rational_list(args.eps_vec))
    return EpsilonSpec(parse_rational(args.eps) if args.eps else 0)


def _fraction(text, default):
    return default if text is None else parse_rational(text)


def run_pair(args):
    lts1, lts2 = load_model(args.model1, args.cap), load_model(args.model2, args.cap)
    alphabet = parse_alphabet(args.alphabet) if args.alphabet else None
    named = load_suite(args.suite, alphabet, args.fail_sets, (lts1, lts2))
    suite = [nt.test for nt in named]
    names = {nt.test: nt.name for nt in named}
    eps = _epsilon(args)
    nu = _fraction(args.nu, Fraction(0))
    p = _fraction(args.prec, Fraction(1))
    r = _fraction(args.rec, Fraction(1))
    kw = {"max_len": args.max_len, "cap": args.cap}

    command = args.command
    if command == "temporal" and args.two_sided:
        command = "temporal-pm"
    params = {}
    if command in ("slow", "slow-simple", "fast", "temporal", "temporal-pm", "unified"):
        params["epsilon"] = ",".join(format_rational(v) for v in eps.values)
    if command in ("prob", "unified"):
        params["nu"] = format_rational(nu)
    if command in ("behavioral", "behavioral-timed", "unified"):
        params["precision"], params["recall"] = format_rational(p), format_rational(r)
    if command == "min-epsilon":
        params["mode"] = args.mode
    if args.max_len is not None:
        params["max_len"] = str(args.max_len)

    start = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CompletenessWarning)
        if command == "equiv":
            verdict = check_mt_equiv(lts1, lts2, suite, **kw)
        elif command == "slow":
            verdict = check_slow(lts1, lts2, eps, suite, **kw)
        elif command == "slow-simple":
            verdict = check_slow_simple(lts1, lts2, eps, suite, **kw)
        elif command == "fast":
            verdict = check_fast(lts1, lts2, eps, suite, **kw)
        elif command in ("temporal", "temporal-pm"):
            verdict = check_temporal(lts1, lts2, eps, suite, command == "temporal-pm", **kw)
        elif command == "prob":
            verdict = check_prob(lts1, lts2, nu, suite, **kw)
        elif command in ("behavioral", "behavioral-timed"):
            verdict = check_behavioral(lts1, lts2, p, r, suite, command == "behavioral-timed", **kw)
        elif command == "unified":
            verdict = check_unified(lts1, lts2, SimilarityParams(p, r, eps, nu), suite, **kw)
        else:
            verdict = min_epsilon_verdict(lts1, lts2, suite, args.mode, **kw)
    seconds = round(time.perf_counter() - start, 6)

    inputs = {"model1": digest(_read(args.model1)), "model2": digest(_read(args.model2))}
    for i, src in enumerate(args.suite, 1):
        inputs[f"suite{i}"] = digest(src if src.startswith("pattern:") else _read(src))
    report = Report.from_verdict(verdict, names, params, inputs, seconds)
    print(report.to_json() if args.format == "json" else report.to_text())
    return 0 if verdict.holds else 1


def _first_test(path):
    named = parse_suite(_read(path))
    return named[0].test


def run_prec_rec(args):
    t1, t2 = _first_test(args.test1), _first_test(args.test2)
    prec, rec = precision(t1, t2), recall(t1, t2)
    if args.format == "json":
        print(json.dumps({"precision": format_rational(prec), "recall": format_rational(rec)},
                         sort_keys=True))
    else:
        print(f"precision: {format_rational(prec)}")
        print(f"recall: {format_rational(rec)}")
    return 0


def run_info(args):
    lts = load_model(args.model1, args.cap)
    ctmc = to_ctmc(lts)
    info = {
        "states": len(lts.states),
        "edges": len(lts.edges),
        "actions": sorted(lts.actions),
        "ctmc_transitions": [
            [s, t, format_rational(q)] for (s, t), q in ctmc.transitions.items()],
        "exit_rates": [format_rational(lts.rate_total(i)) for i in range(len(lts))],
    }
    if args.format == "json":
        print(json.dumps(info, indent=2, sort_keys=True))
    else:
        print(f"states: {info['states']}  edges: {info['edges']}  actions: {', '.join(info['actions'])}")
        for i, s in enumerate(lts.states):
            print(f"  [{i}] exit rate {info['exit_rates'][i]}  {s}")
        for e in lts.edges:
            print(f"  {e.source} --{e.action},{format_rational(e.rate)}--> {e.target}  ({e.deriv or '-'})")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "prec-rec":
            return run_prec_rec(args)
        if args.command == "info":
            return run_info(args)
        return run_pair(args)
    except (UsageError, TermError, ValueError, StateCapExceeded) as exc:
        print(f"markt: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
