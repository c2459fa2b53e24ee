"""Command-line front end: ``cartan-eds {chars,verify,table1,print,models}``."""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__
from .cartan import CharacterError, compute_characters_multi, format_table, sample_point
from .dsl import ParseError, parse_file, print_eds
from .eds import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    CheckResult,
    cauchy_space_dim,
    closure_check_certificate,
    closure_check_pointwise,
)
from .exterior import Metric
from .models import GOLDEN_TABLE1, MODELS, ModelSpec, build, cartan_poincare, essential_identities

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MODEL = 3
EXIT_DISAGREE = 4
EXIT_CHECK = 5

FAMILY_TITLES = {
    "maxwell": "Maxwell characters in n dimensions",
    "su2ym": "SU(2)-Yang-Mills characters in n dimensions",
}


class ModelError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=1, help="first seed; trial k uses seed+k")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--range", dest="value_range", type=int, default=10,
                   help="random integers are drawn from [-R, R]")
    p.add_argument("--points", choices=("integers", "primes"), default="integers",
                   help="coordinate sampler for the random point")
    p.add_argument("--modular-check", action="store_true",
                   help="cross-check every polar rank modulo three random primes")
    p.add_argument("--signature", choices=("mostly-plus", "mostly-minus", "time-first"),
                   default="mostly-plus")
    p.add_argument("--format", choices=("text", "json"), default="text")


def _add_model(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--model", choices=sorted(MODELS))
    group.add_argument("--eds", metavar="PATH", help="system definition file (.eds)")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="largest exterior power basis size for pointwise checks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cartan-eds", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chars", help="compute a Cartan character table")
    _add_model(p)
    _add_common(p)

    p = sub.add_parser("verify", help="closure, identity and Cauchy checks")
    _add_model(p)
    _add_common(p)

    p = sub.add_parser("table1", help="recompute all eight Maxwell / SU(2) tables")
    _add_common(p)

    p = sub.add_parser("print", help="emit a built-in model as .eds text")
    p.add_argument("--model", choices=sorted(MODELS), required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--signature", choices=("mostly-plus", "mostly-minus", "time-first"),
                   default="mostly-plus")

    sub.add_parser("models", help="list built-in model families")
    return parser


def _spec(args) -> ModelSpec:
    info = MODELS[args.model]
    lo, hi = info.n_range
    n = args.n if args.model != "contact" else 2
    if not lo <= n <= hi:
        raise ModelError(f"{args.model} supports n in {lo}..{hi}, got {n}")
    metric = Metric.lorentz(n, args.signature) if args.model != "contact" else None
    return ModelSpec(args.model, n, metric)


def _load(args):
    """Returns ``(label, eds, spec_or_None)``."""
    if getattr(args, "eds", None):
        return args.eds, parse_file(args.eds), None
    spec = _spec(args)
    try:
        eds = build(spec)
    except ValueError as exc:
        raise ModelError(str(exc)) from exc
    return f"{spec.family}:n={spec.n}", eds, spec


def _config(args) -> dict:
    keys = ("model", "eds", "n", "seed", "trials", "value_range", "points",
            "modular_check", "signature", "budget")
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def _seeds(args) -> list[int]:
    if args.trials < 1:
        raise ModelError("--trials must be >= 1")
    return [args.seed + k for k in range(args.trials)]


def _options(args) -> dict:
    return {
        "value_range": args.value_range,
        "point_values": args.points,
        "modular_check": args.modular_check,
    }


def _emit(record: dict, lines: list[str], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def _record(args, command: str) -> dict:
    return {"tool": "cartan-eds", "version": __version__, "command": command, "config": _config(args)}


def cmd_chars(args) -> int:
    label, eds, _ = _load(args)
    table = compute_characters_multi(eds, _seeds(args), **_options(args))
    record = _record(args, "chars")
    record.update(
        model=label, N=table.N, n=table.n, characters=list(table.s), gauge=table.s_n,
        cartan_ok=table.cartan_ok, seeds=list(table.seeds), agreement=table.agreement,
        table=format_table(table), checks=[],
    )
    lines = [
        format_table(table),
        f"N={table.N} n={table.n} characters={list(table.s)} gauge={table.s_n} "
        f"cartan_ok={str(table.cartan_ok).lower()} seeds={list(table.seeds)} "
        f"agreement={str(table.agreement).lower()}",
    ]
    _emit(record, lines, args.format)
    if not table.agreement:
        return EXIT_DISAGREE
    return EXIT_OK if table.cartan_ok else EXIT_CHECK


def _check_dict(kind: str, r: CheckResult) -> dict:
    return {"check": kind, "name": r.name, "status": r.status, "detail": r.detail}


def cmd_verify(args) -> int:
    label, eds, spec = _load(args)
    seeds = _seeds(args)
    checks: list[dict] = []
    for r in closure_check_certificate(eds).values():
        checks.append(_check_dict("closure-certificate", r))
    if spec is not None and spec.family != "contact":
        for r in essential_identities(spec):
            checks.append(_check_dict("identity", r))
        _, ok = cartan_poincare(spec)
        checks.append(_check_dict(
            "cartan-poincare",
            CheckResult("dLambda-theta^psi", "pass" if ok else "fail"),
        ))
    for seed in seeds:
        point = sample_point(eds.N, random.Random(seed), args.value_range, args.points)
        try:
            for r in closure_check_pointwise(eds, point, args.budget).values():
                checks.append(_check_dict("closure-pointwise", CheckResult(r.name, r.status, f"seed {seed}")))
        except BudgetExceeded as exc:
            checks.append({"check": "closure-pointwise", "name": "*", "status": "skipped",
                           "detail": f"skipped (budget): {exc}"})
        try:
            dim = cauchy_space_dim(eds, point, args.budget)
            # built-in models have no Cauchy characteristics; for files the value is informational
            status = "pass" if (spec is None or dim == 0) else "fail"
            checks.append({"check": "cauchy", "name": "dim", "status": status,
                           "detail": f"seed {seed}: dim={dim}", "value": dim})
        except BudgetExceeded as exc:
            checks.append({"check": "cauchy", "name": "dim", "status": "skipped",
                           "detail": f"skipped (budget): {exc}"})
    record = _record(args, "verify")
    record.update(model=label, N=eds.N, n=eds.n, seeds=seeds, checks=checks)
    failed = [c for c in checks if c["status"] == "fail"]
    record["ok"] = not failed
    lines = [f"{c['status']:>10}  {c['check']}: {c['name']}  {c['detail']}".rstrip() for c in checks]
    lines.append(f"{label}: {'all applicable checks pass' if not failed else f'{len(failed)} check(s) failed'}")
    _emit(record, lines, args.format)
    return EXIT_CHECK if failed else EXIT_OK


def cmd_table1(args) -> int:
    seeds = _seeds(args)
    rows = []
    lines = []
    for family in ("maxwell", "su2ym"):
        lines.append(FAMILY_TITLES[family])
        for n, expected in GOLDEN_TABLE1[family].items():
            metric = Metric.lorentz(n, args.signature)
            table = compute_characters_multi(build(ModelSpec(family, n, metric)), seeds, **_options(args))
            got = format_table(table)
            match = got == expected and table.agreement
            rows.append({"model": family, "n": n, "expected": expected, "computed": got,
                         "agreement": table.agreement, "match": match})
            lines.append(f"  {got:>20}  {'ok' if match else f'MISMATCH (expected {expected})'}")
    matched = sum(r["match"] for r in rows)
    lines.append(f"{matched}/{len(rows)} rows match")
    record = _record(args, "table1")
    record.update(rows=rows, ok=matched == len(rows), seeds=seeds)
    _emit(record, lines, args.format)
    return EXIT_OK if matched == len(rows) else EXIT_CHECK


def cmd_print(args) -> int:
    _, eds, _ = _load(args)
    sys.stdout.write(print_eds(eds))
    return EXIT_OK


def cmd_models(args) -> int:
    for name, info in sorted(MODELS.items()):
        lo, hi = info.n_range
        print(f"{name:8} n={lo}..{hi}  {info.description}")
    return EXIT_OK


COMMANDS = {
    "chars": cmd_chars,
    "verify": cmd_verify,
    "table1": cmd_table1,
    "print": cmd_print,
    "models": cmd_models,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ModelError, OSError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except CharacterError as exc:
        print(f"character computation failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
