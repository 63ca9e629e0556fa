"""Command-line front end.

Every successful run prints one JSON document on stdout.  Big integers and
rationals are decimal strings, floats are printed with 17 significant
digits, and keys keep a fixed order, so identical invocations give
byte-identical output.

Exit codes: 0 success, 2 usage or input error, 3 enumeration budget
exceeded, 4 I/O error, 5 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from subseqstats import __version__
from subseqstats import asymptotics as asy
from subseqstats import moments as mom
from subseqstats import montecarlo as mc
from subseqstats.counting import (
    DEFAULT_BRUTEFORCE_BUDGET,
    Sequence,
    count_all_direct,
    count_by_level,
    count_k,
    count_k_bruteforce,
)
from subseqstats.errors import BudgetExceededError, DegenerateDistributionError, InputError
from subseqstats.logreal import LogReal

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_IO = 4
EXIT_INTERNAL = 5

BUDGET_ENV = "SUBSEQ_BUDGET"
EXACT_LIMIT = 300
COMPARE_LIMIT = 10**7


class CrossCheckError(RuntimeError):
    """Two independent engines disagreed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# --- serialization ---------------------------------------------------------

def _rational(value) -> dict:
    value = Fraction(value)
    return {"num": str(value.numerator), "den": str(value.denominator)}


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, Fraction):
        obj = _rational(obj)
    elif isinstance(obj, LogReal):
        obj = obj.as_dict()
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0)


def envelope(command, inputs, result, exact_values=None, log_values=None) -> dict:
    return {
        "command": command,
        "version": __version__,
        "inputs": inputs,
        "result": result,
        "exact_values": exact_values or {},
        "log_values": log_values or {},
    }


# --- input files -----------------------------------------------------------

@dataclass
class InputSpec:
    path: str
    encoding: str = "chars"
    alphabet_size: int | None = None


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh.read().splitlines()]
    words = [ln for ln in lines if ln]
    return words or [""]


def read_words(specs: list[InputSpec]) -> tuple[list[Sequence], dict | None]:
    """Read one word per non-blank line from each file.

    ``chars``: every non-whitespace character is a symbol, numbered by first
    appearance across all files (the mapping is returned).  ``tokens``:
    whitespace-separated nonnegative integers.
    """
    encoding = specs[0].encoding
    alphabet = specs[0].alphabet_size
    raw = [w for spec in specs for w in _read_lines(spec.path)]
    if encoding == "chars":
        mapping: dict[str, int] = {}
        words = []
        for line in raw:
            word = []
            for ch in line:
                if ch.isspace():
                    continue
                word.append(mapping.setdefault(ch, len(mapping)))
            words.append(word)
    elif encoding == "tokens":
        mapping = None
        words = []
        for line in raw:
            try:
                word = [int(tok) for tok in line.split()]
            except ValueError as exc:
                raise InputError(f"non-integer token in {line!r}") from exc
            if any(s < 0 for s in word):
                raise InputError("token symbols must be nonnegative")
            words.append(word)
    else:
        raise InputError(f"unknown encoding {encoding!r}")
    if alphabet is None:
        alphabet = max((max(w, default=0) for w in words), default=0) + 1
        if mapping is not None:
            alphabet = max(alphabet, len(mapping))
    return [Sequence.from_symbols(w, alphabet) for w in words], mapping


def _budget(args, default: int) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"{BUDGET_ENV} must be an integer, got {env!r}") from exc
    return default


def _dist(args):
    if args.probs is not None:
        return mom.ProbVector(tuple(args.probs.split(",")))
    if args.alphabet is None:
        raise InputError("give --alphabet or --probs")
    return mom.ProbVector.uniform(args.alphabet)


def _dist_inputs(args) -> dict:
    if args.probs is not None:
        return {"probs": [str(mom.to_fraction(p)) for p in args.probs.split(",")]}
    return {"alphabet": args.alphabet}


# --- subcommands -----------------------------------------------------------

def cmd_count(args) -> dict:
    paths = [args.x] + ([args.y] if args.y else [])
    specs = [InputSpec(p, args.encoding, args.alphabet) for p in paths]
    words, mapping = read_words(specs)
    if len(words) != 2:
        raise InputError(f"expected exactly two words, found {len(words)}")
    x, y = words
    per_level = args.per_level or args.k is None
    budget = _budget(args, DEFAULT_BRUTEFORCE_BUDGET)

    result: dict = {"len_x": x.length, "len_y": y.length, "alphabet_size": x.alphabet_size}
    if mapping is not None:
        result["symbol_map"] = mapping
    if args.k is not None:
        value = count_k(x, y, args.k)
        result["k"] = args.k
        result["count"] = str(value)
        if args.bruteforce:
            oracle = count_k_bruteforce(x, y, args.k, budget)
            if oracle != value:
                raise CrossCheckError(f"dynamic program gave {value}, enumeration gave {oracle}")
            result["bruteforce_agrees"] = True
    if per_level:
        profile = count_by_level(x, y)
        total = sum(profile)
        direct = count_all_direct(x, y)
        if direct != total:
            raise CrossCheckError(f"leveled total {total} differs from direct recurrence {direct}")
        result["profile"] = [str(v) for v in profile]
        result["total"] = str(total)
    inputs = {"x": args.x, "y": args.y, "encoding": args.encoding, "k": args.k, "per_level": per_level}
    return envelope("count", inputs, result)


def cmd_moments(args, command="moments") -> dict:
    dist = _dist(args)
    bounds = args.bounds or command == "bounds"
    inputs = {"n": args.n, "k": args.k, **_dist_inputs(args), "bounds": bounds, "exhaustive": args.exhaustive}
    exact: dict = {}
    result: dict = {"collision_probability": dist.collision}
    if args.k is not None:
        result["quantity"] = "expected_count_k"
        exact["expected"] = mom.expected_count_k(args.n, args.k, dist)
    else:
        result["quantity"] = "expected_total"
        exact["expected"] = mom.expected_total(args.n, dist)
    if bounds:
        if len(set(dist.probs)) != 1:
            raise InputError("second-moment bounds are defined for uniform letters only")
        ks = [args.k] if args.k is not None else range(1, args.n + 1)
        per_k = []
        for k in ks:
            b = mom.second_moment_bounds(args.n, k, dist.size)
            per_k.append({"k": k, "lower": _rational(b.lower), "upper": _rational(b.upper)})
        if args.k is not None:
            exact["second_moment_lower"] = per_k[0]["lower"]
            exact["second_moment_upper"] = per_k[0]["upper"]
        else:
            result["bounds"] = per_k
    if args.exhaustive:
        if args.k is None:
            raise InputError("--exhaustive needs --k")
        budget = _budget(args, mom.DEFAULT_EXHAUSTIVE_BUDGET)
        first, second = mom.exhaustive_moments(args.n, dist, budget)[args.k - 1] if args.k <= args.n else (0, 0)
        if first != exact["expected"]:
            raise CrossCheckError(f"formula mean {exact['expected']} differs from enumeration {first}")
        exact["second_moment_exhaustive"] = Fraction(second)
    return envelope(command, inputs, result, exact)


def cmd_simulate(args) -> dict:
    dist = _dist(args)
    if args.samples < 2:
        raise InputError(f"--samples must be at least 2, got {args.samples}")
    if args.threads < 1:
        raise InputError(f"--threads must be positive, got {args.threads}")
    inputs = {
        "n": args.n,
        "k": args.k,
        **_dist_inputs(args),
        "samples": args.samples,
        "seed": args.seed,
        "threads": args.threads,
        "trend": args.trend,
    }
    if args.trend:
        try:
            ns = [int(v) for v in args.trend.split(",")]
        except ValueError as exc:
            raise InputError(f"--trend must be comma-separated integers, got {args.trend!r}") from exc
        trend = mc.clt_trend(ns, args.k, dist, args.samples, args.seed, args.threads)
        result = {
            "rng": mc.ALGORITHM,
            "trend": [{"n": n, "kolmogorov_distance": d} for n, d in trend],
            "decreasing_with_slack_0.01": mc.is_decreasing([d for _, d in trend], 0.01),
        }
        return envelope("simulate", inputs, result)
    if args.n is None:
        raise InputError("give --n or --trend")
    report = mc.simulate(args.n, args.k, dist, args.samples, args.seed, args.threads)
    result = report.as_dict()
    theory = result.pop("theoretical_mean")
    return envelope("simulate", inputs, result, {"theoretical_mean": theory})


def cmd_asymptotics(args) -> dict:
    params = asy.RegimeParams(args.n, args.a, args.alpha)
    regime = asy.regime_formula(args.n, args.a, args.alpha)
    master = asy.master_approx(args.n, params.a_n)
    logs: dict = {"regime_formula": regime, "master_approx": master}
    result = params.as_dict()
    ratios = {"regime_minus_master": regime.ln - master.ln}
    if args.n <= EXACT_LIMIT or (args.compare and args.n <= COMPARE_LIMIT):
        exact = asy.exact_log_expected_total(args.n, params.a_n)
        logs["exact"] = exact
        ratios["regime_minus_exact"] = regime.ln - exact.ln
        ratios["master_minus_exact"] = master.ln - exact.ln
    elif args.compare:
        print(f"exact sum skipped: n exceeds {COMPARE_LIMIT}", file=sys.stderr)
    result["log_ratios"] = ratios
    inputs = {"n": args.n, "a": args.a, "alpha": args.alpha, "compare": args.compare}
    return envelope("asymptotics", inputs, result, log_values=logs)


# --- wiring ----------------------------------------------------------------

def _add_dist_args(p):
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--alphabet", type=int, help="uniform alphabet size")
    grp.add_argument("--probs", help="comma-separated letter probabilities, e.g. 1/2,1/3,1/6")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subseqstats", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", help="count common subsequences of two words")
    p.add_argument("x", help="file with the first word (or both words, one per line)")
    p.add_argument("y", nargs="?", help="file with the second word")
    p.add_argument("--k", type=int, help="subsequence length")
    p.add_argument("--per-level", action="store_true", help="emit counts for every length and the total")
    p.add_argument("--encoding", choices=("chars", "tokens"), default="chars")
    p.add_argument("--alphabet", type=int, help="alphabet size (default: inferred)")
    p.add_argument("--bruteforce", action="store_true", help="cross-check --k by enumeration")
    p.add_argument("--budget", type=int, help=f"enumeration budget (env {BUDGET_ENV})")
    p.set_defaults(func=cmd_count)

    for name in ("moments", "bounds"):
        p = sub.add_parser(name, help="exact moments" if name == "moments" else "alias of moments --bounds")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int)
        _add_dist_args(p)
        p.add_argument("--bounds", action="store_true", help="also emit second-moment bounds")
        p.add_argument("--exhaustive", action="store_true", help="exact second moment by enumeration")
        p.add_argument("--budget", type=int, help=f"enumeration budget (env {BUDGET_ENV})")
        p.set_defaults(func=lambda a, _n=name: cmd_moments(a, _n))

    p = sub.add_parser("simulate", help="Monte Carlo normality check")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, required=True)
    _add_dist_args(p)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--trend", help="comma-separated increasing word lengths")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("asymptotics", help="growing-alphabet asymptotics of the expected total")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--compare", action="store_true", help="also evaluate the exact sum")
    p.set_defaults(func=cmd_asymptotics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc = args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, DegenerateDistributionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CrossCheckError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(dumps(doc) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
