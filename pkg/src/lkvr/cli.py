"""Command-line front end: ``lkvr sat|check|prove|oracle|fuzz``.

Exit codes depend on the verdict only (0 yes, 1 no); parse errors,
malformed files and flag misuse exit 2.  The first line of standard output
is the verdict token.
"""
from __future__ import annotations

import argparse
import random
import sys

from .formula import parse, size
from .generate import Pools, random_formula
from .proofs import load_proof, verify
from .semantics import dump_model, evaluate, load_model, oracle_sat
from .tableau import decide

__all__ = ["main", "build_parser", "fuzz_report"]


def _sat(args) -> int:
    f = parse(args.formula)
    trace = (lambda line: print(line, file=sys.stderr)) if args.trace else None
    verdict = decide(f, want_model=args.model is not None, trace=trace)
    print("SAT" if verdict else "UNSAT")
    if verdict and args.model:
        dump_model(verdict.model, args.model)
    return 0 if verdict else 1


def _check(args) -> int:
    m = load_model(args.model)
    if args.world not in m.worlds:
        raise ValueError(f"no world named {args.world!r} in {args.model}")
    ok = evaluate(m, args.world, parse(args.formula))
    print("true" if ok else "false")
    return 0 if ok else 1


def _prove(args) -> int:
    result = verify(load_proof(args.path))
    print(result)
    return 0 if result else 1


def _oracle(args) -> int:
    m = oracle_sat(parse(args.formula), args.max_worlds, args.max_values)
    print("FOUND" if m else "EXHAUSTED")
    if m and args.model:
        dump_model(m, args.model)
    return 0 if m else 1


def fuzz_report(seed: int, count: int, max_size: int) -> tuple[int, list[str]]:
    """Run the self-check on ``count`` seeded formulas.

    Returns the number of formulas passing every check and one message per
    failure, in formula order.
    """
    rng = random.Random(seed)
    pools = Pools(agents=2, props=3, names=2)
    good, problems = 0, []
    for k in range(count):
        f = random_formula(rng, max_size, pools)
        verdict = decide(f, want_model=True)
        bad = []
        n = size(f)
        if verdict.stats.max_depth > 2 * n * n:
            bad.append("depth bound exceeded")
        if verdict.stats.max_unlabeled_chain > 2 * n + 1:
            bad.append("unlabelled chain bound exceeded")
        if verdict and not evaluate(verdict.model, verdict.model.root, f):
            bad.append("extracted model does not satisfy the formula")
        if not verdict and oracle_sat(f, 3, 2) is not None:
            bad.append("oracle found a model for an UNSAT verdict")
        if bad:
            problems.append(f"#{k} {f}: {'; '.join(bad)}")
        else:
            good += 1
    return good, problems


def _fuzz(args) -> int:
    good, problems = fuzz_report(args.seed, args.count, args.size)
    print(f"{good}/{args.count} ok")
    for line in problems:
        print(line)
    return 0 if good == args.count else 1


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lkvr", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sat", help="decide satisfiability with the tableau")
    s.add_argument("formula")
    s.add_argument("--model", metavar="PATH", help="write the extracted model here when SAT")
    s.add_argument("--trace", action="store_true", help="per-node trace on stderr")
    s.set_defaults(run=_sat)

    s = sub.add_parser("check", help="evaluate a formula at a world of a model file")
    s.add_argument("model")
    s.add_argument("world")
    s.add_argument("formula")
    s.set_defaults(run=_check)

    s = sub.add_parser("prove", help="verify a proof file")
    s.add_argument("path")
    s.set_defaults(run=_prove)

    s = sub.add_parser("oracle", help="search small models exhaustively")
    s.add_argument("formula")
    s.add_argument("--max-worlds", type=_positive, required=True)
    s.add_argument("--max-values", type=_positive, required=True)
    s.add_argument("--model", metavar="PATH")
    s.set_defaults(run=_oracle)

    s = sub.add_parser("fuzz", help="self-check on random formulas")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=_positive, default=100)
    s.add_argument("--size", type=_positive, default=6)
    s.set_defaults(run=_fuzz)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ValueError, KeyError, OSError) as e:
        print(f"lkvr {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
