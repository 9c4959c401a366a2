"""Command-line front end.

Exit codes: 0 for a definite answer, 2 when the dependence check is
inconclusive, 1 for bad input.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from typing import Sequence

from gmpy2 import mpq

from .arithfn import (
    ArithFn,
    PowerSeriesPoly,
    from_power_series,
    to_dirichlet_string,
    to_power_series,
)
from .derivations import rational_log
from .errors import ArithWronError, NonAdmissibleTuple
from .fraction import FracElem
from .ntheory import factorize, prime_index
from .scalar import scalar_eval
from .serialize import (
    SchemaError,
    arithfn_to_json,
    dumps,
    family_from_json,
    frac_to_json,
    loads,
    member_from_json,
    powerseries_from_json,
    powerseries_to_json,
)
from .verify import DEFAULT_SEED, SUITES, run_suite
from .wronskian import (
    AdmissibleTuple,
    DependenceConfig,
    DependentUpToPrecision,
    GaussianPivots,
    Inconclusive,
    Independent,
    check_admissible,
    generalized_wronskian,
    test_dependence,
    verdict_to_dict,
)

log = logging.getLogger("arithwron")

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2
RANDOM_BOUND = 10**6
MAX_RETRIES = 3


class InputError(ArithWronError):
    pass


# -- input -------------------------------------------------------------------


def _read_input(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_family(args) -> tuple[list, str]:
    obj = loads(_read_input(args.input))
    members = family_from_json(obj, args.precision)
    return members, obj.get("field", "rational")


# -- randomized scalars -------------------------------------------------------


class RandomAssignment(dict):
    """L_p -> random nonzero rational, drawn on first use."""

    def __init__(self, rng: random.Random):
        super().__init__()
        self.rng = rng

    def __missing__(self, p):
        while True:
            a = self.rng.randint(-RANDOM_BOUND, RANDOM_BOUND)
            if a:
                v = mpq(a, self.rng.randint(1, RANDOM_BOUND))
                self[p] = v
                return v


def _specialize_fn(f: ArithFn, assignment) -> ArithFn:
    return ArithFn._raw([scalar_eval(v, assignment) for v in f.values])


def specialize_family(family, assignment) -> list:
    """Substitute the assignment for every symbol in the family.

    Raises ZeroDivisionError when a symbolic denominator vanishes at the
    chosen point.
    """
    out = []
    for m in family:
        if isinstance(m, FracElem):
            out.append(FracElem(_specialize_fn(m.num, assignment), _specialize_fn(m.den, assignment)))
        else:
            out.append(_specialize_fn(m, assignment))
    return out


def randomized_dependence(family, config: DependenceConfig, rng: random.Random):
    """Dependence test with the L_p replaced by random rationals.

    A nonzero coefficient at a random point is nonzero symbolically, so an
    independence verdict stands.  Anything else is re-checked with symbols;
    a disagreement is an unlucky point and the run is retried.
    """
    symbolic = None
    for attempt in range(1, MAX_RETRIES + 1):
        assignment = RandomAssignment(rng)
        try:
            fam = specialize_family(family, assignment)
        except (ZeroDivisionError, ArithWronError):
            log.warning("evaluation point %d hit a vanishing denominator; retrying", attempt)
            continue
        cfg = DependenceConfig(
            precision=config.precision,
            tuple_bound=config.tuple_bound,
            mode=config.mode,
            strict=config.strict,
            log_fn=rational_log(assignment),
        )
        v = test_dependence(fam, cfg)
        if isinstance(v, Independent):
            return v
        if symbolic is None:
            symbolic = test_dependence(family, config)
        if not isinstance(symbolic, Independent):
            return symbolic
        log.warning(
            "unlucky evaluation at point %d: randomized verdict %s but symbolic independent; retrying",
            attempt,
            type(v).__name__,
        )
    log.warning("falling back to the symbolic verdict after %d points", MAX_RETRIES)
    return symbolic if symbolic is not None else test_dependence(family, config)


# -- formatting --------------------------------------------------------------


def _tuple_text(values) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


def verdict_text(v) -> str:
    lines = []
    if isinstance(v, Independent):
        lines.append("verdict: independent")
        if isinstance(v.certificate, GaussianPivots):
            lines.append(f"certificate: elimination pivots {_tuple_text(v.certificate.pivots)}")
        else:
            lines.append(
                f"certificate: tuple {v.certificate}, coefficient {v.value} at n = {v.index}"
            )
    elif isinstance(v, DependentUpToPrecision):
        lines.append("verdict: dependent-up-to-precision")
        lines.append(f"null vector: {_tuple_text(v.null_vector)}")
    else:
        lines.append("verdict: inconclusive")
        lines.append(f"reason: {v.reason}")
    lines.append(f"precision: {v.precision}")
    lines.append(f"tuples checked: {v.tuples_checked}")
    return "\n".join(lines)


def _emit(args, obj, text: str) -> None:
    print(dumps(obj) if args.format == "json" else text)


# -- subcommands -------------------------------------------------------------


def cmd_check(args) -> int:
    family, _ = _load_family(args)
    config = DependenceConfig(
        precision=args.precision, tuple_bound=args.tuple_bound, mode=args.mode, strict=args.strict
    )
    if args.scalars == "randomized":
        v = randomized_dependence(family, config, random.Random(args.seed))
    else:
        v = test_dependence(family, config)
    _emit(args, verdict_to_dict(v, args.mode), verdict_text(v))
    return EXIT_INCONCLUSIVE if isinstance(v, Inconclusive) else EXIT_OK


def parse_tuple(text: str) -> tuple:
    raw = text.strip().strip("()[]")
    try:
        return tuple(int(x) for x in raw.replace(" ", "").split(",") if x)
    except ValueError:
        raise InputError(f"tuple must be comma-separated integers, got {text!r}") from None


def cmd_wronskian(args) -> int:
    family, _ = _load_family(args)
    entries = parse_tuple(args.tuple)
    check_admissible(entries)
    if len(entries) != len(family):
        raise NonAdmissibleTuple(
            f"tuple has {len(entries)} entries but the family has {len(family)} members"
        )
    w = generalized_wronskian(family, AdmissibleTuple(entries))
    if isinstance(w, FracElem):
        obj = {"tuple": list(entries), "determinant": frac_to_json(w)}
        text = f"({to_dirichlet_string(w.num)}) / ({to_dirichlet_string(w.den)})"
    else:
        obj = {"tuple": list(entries), "determinant": arithfn_to_json(w)}
        text = to_dirichlet_string(w)
    obj["dirichlet"] = text
    _emit(args, obj, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.suite, seed=args.seed, precision=args.precision, tuple_bound=args.tuple_bound)
    obj = [
        {"name": r.name, "cases": r.cases, "failures": list(r.failures), "seed": r.seed, "passed": r.passed}
        for r in results
    ]
    ok = all(r.passed for r in results)
    text = "\n".join(r.line() for r in results)
    text += f"\n{sum(r.passed for r in results)}/{len(results)} checks passed"
    _emit(args, obj, text)
    return EXIT_OK if ok else EXIT_INPUT


def _default_vars(f: ArithFn) -> int:
    top = max((p for n in f.terms() for p, _ in factorize(n)), default=2)
    return prime_index(top)


def _convert_one(obj, args, path: str):
    if isinstance(obj, dict) and "vars" in obj:
        src = from_power_series(powerseries_from_json(obj, path), args.precision)
    else:
        src = member_from_json(obj, path, args.precision)
    if isinstance(src, FracElem):
        if args.to == "powerseries":
            raise InputError("fractions have no power-series form")
        if args.to == "dirichlet":
            s = f"({to_dirichlet_string(src.num)}) / ({to_dirichlet_string(src.den)})"
            return {"dirichlet": s}, s
        return frac_to_json(src), dumps(frac_to_json(src))
    if args.to == "arithfn":
        return arithfn_to_json(src), dumps(arithfn_to_json(src))
    if args.to == "powerseries":
        ps: PowerSeriesPoly = to_power_series(src, args.vars or _default_vars(src))
        return powerseries_to_json(ps), dumps(powerseries_to_json(ps))
    s = to_dirichlet_string(src)
    return {"dirichlet": s}, s


def cmd_convert(args) -> int:
    obj = loads(_read_input(args.input))
    if isinstance(obj, dict) and "members" in obj:
        raws = obj["members"]
        if not isinstance(raws, list) or not raws:
            raise SchemaError("members", "expected a non-empty list")
        pairs = [_convert_one(m, args, f"members[{i}]") for i, m in enumerate(raws)]
        _emit(args, {"members": [p[0] for p in pairs]}, "\n".join(p[1] for p in pairs))
    else:
        out, text = _convert_one(obj, args, "")
        _emit(args, out, text)
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_positive, default=64)
    common.add_argument("--tuple-bound", type=_positive, default=16)
    common.add_argument("--mode", choices=("full", "walker"), default="full")
    common.add_argument("--scalars", choices=("symbolic", "randomized"), default="symbolic")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--input", help="input file (default: stdin)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(
        prog="arithwron",
        description="Exact arithmetic functions, derivations and Wronskian dependence tests.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="test a family for linear dependence")
    c.add_argument("--strict", action="store_true", help="report Inconclusive instead of falling back to elimination")
    c.set_defaults(func=cmd_check)

    w = sub.add_parser("wronskian", parents=[common], help="compute one generalized Wronskian")
    w.add_argument("--tuple", required=True, help="row indices, e.g. 1,2,3")
    w.set_defaults(func=cmd_wronskian)

    v = sub.add_parser("verify", parents=[common], help="run a property suite")
    v.add_argument("suite", nargs="?", default="all", choices=sorted(SUITES) + ["all"])
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("convert", parents=[common], help="convert between representations")
    k.add_argument("--to", required=True, choices=("arithfn", "powerseries", "dirichlet"))
    k.add_argument("--vars", type=_positive, help="number of power-series variables")
    k.set_defaults(func=cmd_convert)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (ArithWronError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
