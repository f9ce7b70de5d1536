"""Command-line front end: ``unbiased {gen,verify,bench,factor}``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid arguments,
3 bit source exhausted, 4 rejection-round cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import struct
import sys
from fractions import Fraction
from typing import List, Optional

from . import numtheory, oracle, stats
from .sampler import (
    RoundCapExceeded,
    SampleReport,
    SamplerConfig,
    SourceExhaustedError,
    sample_uniform,
)
from .source import BiasParams, CountingSource, FileSource, SimulatedSource

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_EXHAUSTED, EXIT_CAP = 0, 1, 2, 3, 4

_RATIONAL = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v <= numtheory.U64_MAX:
        raise argparse.ArgumentTypeError(f"{text} is outside the unsigned 64-bit range")
    return v


def _bias(text: str) -> Fraction:
    """Decimal or ``num/den`` bias, kept exact as the decimal it was written as."""
    try:
        a = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 < a < 1:
        raise argparse.ArgumentTypeError(f"bias must lie strictly inside (0, 1), got {text}")
    return a


def parse_bias_grid(text: str) -> List[Fraction]:
    grid = []
    for item in text.split(","):
        m = _RATIONAL.match(item)
        if not m:
            raise UsageError(f"bias {item!r} is not a rational of the form num/den")
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise UsageError(f"bias {item!r} has a zero denominator")
        a = Fraction(num, den)
        if not 0 < a < 1:
            raise UsageError(f"bias {item.strip()} must lie strictly inside (0, 1)")
        grid.append(a)
    return grid


def _record(rep: SampleReport, fmt: str, telemetry: bool):
    if fmt == "csv":
        return f"{rep.value},{rep.flips_consumed}" if telemetry else str(rep.value)
    if fmt == "json":
        rec = {"value": rep.value}
        if telemetry:
            rec["flips"] = rep.flips_consumed
            rec["stages"] = [
                {
                    "prime": s.prime,
                    "rejected_rounds": s.rejected_rounds,
                    "accepted_round": "".join(str(f) for f in s.accepted_round_flips),
                }
                for s in rep.rounds
            ]
        return json.dumps(rec, separators=(",", ":"))
    return struct.pack("<Q", rep.value)


def cmd_gen(args) -> int:
    if args.n == 0:
        raise UsageError("--n must be at least 1")
    if (args.bias is None) == (args.bits is None):
        raise UsageError("give exactly one source: --bias (with --seed) or --bits")
    if args.max_rounds == 0:
        raise UsageError("--max-rounds must be positive")
    if args.bits is not None:
        try:
            inner = FileSource(args.bits)
        except OSError as exc:
            raise UsageError(f"cannot read {args.bits}: {exc.strerror}")
        except ValueError as exc:
            raise UsageError(str(exc))
    else:
        inner = SimulatedSource(BiasParams(args.bias), args.seed)
    src = CountingSource(inner)
    cfg = SamplerConfig(max_rounds_per_stage=args.max_rounds)
    out = sys.stdout.buffer if args.format == "raw" else sys.stdout
    done = 0
    try:
        for _ in range(args.count):
            rec = _record(sample_uniform(args.n, src, cfg), args.format, args.telemetry)
            out.write(rec if args.format == "raw" else rec + "\n")
            done += 1
    except SourceExhaustedError as exc:
        out.flush()
        print(
            f"error: bit source exhausted after {done} samples completed "
            f"({exc.flips_consumed} flips into the next sample)",
            file=sys.stderr,
        )
        return EXIT_EXHAUSTED
    except RoundCapExceeded as exc:
        out.flush()
        print(f"error: {exc} after {done} samples completed", file=sys.stderr)
        return EXIT_CAP
    out.flush()
    return EXIT_OK


def run_verification(max_p: int, grid: List[Fraction]) -> List[dict]:
    """Run the exact checks and return one record per check."""
    primes = [p for p in range(2, max_p + 1) if numtheory.is_prime(p)]
    results = []

    def add(name, ok, detail=""):
        results.append({"check": name, "pass": bool(ok), "detail": detail})

    for p in primes:
        res = oracle.check_lemma_partition(p)
        add(f"lemma_partition p={p}", res.ok, "" if res.ok else f"(k, m, count) = {res.witness}")
    for a in grid:
        for p in primes:
            add(f"prime_uniform p={p} a={a}", oracle.exact_prime_dist(p, a).is_uniform())
        bad = [n for n in range(1, 31) if not oracle.exact_composite_dist(n, a).is_uniform()]
        add(f"composite_uniform n<=30 a={a}", not bad, f"non-uniform n: {bad}" if bad else "")
        for p in primes:
            add(f"residue_equivalence p={p} a={a}", oracle.check_residue_equivalence(p, a))
    return results


def cmd_verify(args) -> int:
    if args.max_p > 19 or not numtheory.is_prime(args.max_p):
        raise UsageError(f"--max-p must be a prime <= 19, got {args.max_p}")
    grid = parse_bias_grid(args.bias_grid)
    results = run_verification(args.max_p, grid)
    ok = all(r["pass"] for r in results)
    if args.json:
        print(json.dumps({"pass": ok, "checks": results}, indent=2))
    else:
        for r in results:
            line = f"{'PASS' if r['pass'] else 'FAIL'}  {r['check']}"
            print(f"{line}  {r['detail']}" if r["detail"] else line)
        print(f"{sum(r['pass'] for r in results)}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_FAIL


def _decimal(q: Fraction, digits: int = 12) -> str:
    return f"{float(q):.{digits}g}"


def cmd_bench(args) -> int:
    if args.sweep is not None:
        if args.sweep < 2:
            raise UsageError("--sweep needs N >= 2")
        table = numtheory.cost_table(args.sweep)
        frac = numtheory.sublinearity_fraction(args.sweep, 0.5)
        shown = {n: int(table[n]) for n in range(2, min(args.sweep, 30) + 1)}
        report = {
            "sweep": args.sweep,
            "epsilon": 0.5,
            "sublinearity_fraction": float(frac),
            "sublinearity_count": frac.numerator * (args.sweep - 1) // frac.denominator,
            "c": shown,
            "max_c_over_n": float(max(table[n] / n for n in range(2, args.sweep + 1))),
        }
        if args.json:
            print(json.dumps(report, indent=2))
        else:
            print(f"sweep N={args.sweep}, epsilon=0.5")
            for n, c in shown.items():
                print(f"c({n}) = {c}")
            print(f"sublinearity_fraction = {report['sublinearity_fraction']:.6f}")
        return EXIT_OK

    if args.n == 0:
        raise UsageError("--n must be at least 1")
    a = args.bias
    theory = oracle.expected_flips_composite(args.n, a)
    run = oracle.empirical_dist(
        oracle.SamplerSpec("uniform", args.n, float(a)), args.samples, args.seed
    )
    mean = run.mean_flips
    rel = None if mean is None or theory == 0 else abs(mean - float(theory)) / float(theory)
    report = {
        "n": args.n,
        "bias": str(a),
        "samples": args.samples,
        "theoretical_flips": _decimal(theory),
        "empirical_mean_flips": mean,
        "relative_error": rel,
    }
    if args.n >= 2 and args.samples >= 5 * args.n:
        chi = stats.chi_square_uniform(run.counts)
        report["chi_square"] = {"statistic": chi.statistic, "dof": chi.dof,
                                "critical_999": chi.critical_999, "pass": chi.passed}
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"theoretical expected flips = {report['theoretical_flips']}")
        print(f"empirical mean flips       = {mean if mean is None else f'{mean:.6f}'}")
        print(f"relative error             = {rel if rel is None else f'{rel:.3e}'}")
        if "chi_square" in report:
            c = report["chi_square"]
            print(f"chi-square {c['statistic']:.3f} vs {c['critical_999']:.3f} "
                  f"(dof {c['dof']}): {'PASS' if c['pass'] else 'FAIL'}")
    return EXIT_OK


def cmd_factor(args) -> int:
    if args.n == 0:
        raise UsageError("n must be at least 1")
    fac = numtheory.factorize(args.n)
    print(fac)
    if args.n >= 2:
        print(f"c({args.n}) = {numtheory.cost_c(args.n)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unbiased", description="Exact uniform integers from a biased coin."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="draw uniform samples on [0, n)")
    g.add_argument("--n", type=_u64, required=True)
    g.add_argument("--count", type=_u64, default=1)
    g.add_argument("--bias", type=_bias, help="Head probability of the simulated coin")
    g.add_argument("--seed", type=_u64, default=0)
    g.add_argument("--bits", help="headered bit file to read flips from")
    g.add_argument("--format", choices=("csv", "json", "raw"), default="csv")
    g.add_argument("--max-rounds", type=_u64, default=10**7)
    g.add_argument("--telemetry", action="store_true", help="include flip counts")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="run the exact enumeration checks")
    v.add_argument("--max-p", type=_u64, default=13)
    v.add_argument("--bias-grid", default="1/10,1/3,1/2")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="compare empirical and expected flip cost")
    target = b.add_mutually_exclusive_group(required=True)
    target.add_argument("--n", type=_u64)
    target.add_argument("--sweep", type=_u64, metavar="N")
    b.add_argument("--bias", type=_bias, default=Fraction(1, 2))
    b.add_argument("--seed", type=_u64, default=0)
    b.add_argument("--samples", type=_u64, default=10**5)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("factor", help="print the prime factorization and c(n)")
    f.add_argument("n", type=_u64)
    f.set_defaults(func=cmd_factor)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
