"""Command-line interface.

Every invocation prints exactly one JSON document to stdout:

    {"command": ..., "config": ..., "result": ..., "timing_ms": ...}

with sorted keys and every rational as an exact "p/q" string. For a fixed
(command, flags, seed) the payload is byte-identical across runs except
for timing_ms. Exit codes: 0 success, 1 a requested verification failed
(--expect mismatch, failed algebra check, exhausted search budget),
2 usage or malformed input.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import jsonio
from .algebra import build_compact_algebra, export_structure_table, verify_algebra
from .catalog import catalog_list, get_entry, run_survey_rank2
from .decomp import (
    SEARCH_BUDGET_DEFAULT,
    TriPartition,
    canonical_encoding,
    canonicalize,
    enumerate_special_with_stats,
    is_special,
    standard_partition,
)
from .engine import SAMPLES_DEFAULT, SEED_DEFAULT, go_sample_check, make_metric
from .errors import GokitError, InvalidMetric, SearchBudgetExceeded
from .roots import build_root_system, system_to_json

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2


class _Failure(Exception):
    """Carries a result payload plus the exit code it should map to."""

    def __init__(self, result: dict, code: int, config: dict | None = None):
        super().__init__(str(result))
        self.result = result
        self.code = code
        self.config = config


def _resolve_budget(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get("GOKIT_BUDGET")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _Failure(
                {"error": {"type": "Usage", "message": f"GOKIT_BUDGET={env!r} is not an integer"}},
                EXIT_USAGE,
            )
    return SEARCH_BUDGET_DEFAULT


def _parse_eigenvalues(text: str):
    try:
        parts = [p.strip() for p in text.split(",")]
        return tuple(jsonio.decode_rational(p) for p in parts)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise _Failure(
            {"error": {"type": "Usage", "message": f"bad eigenvalue list {text!r}: {exc}"}},
            EXIT_USAGE,
        )


def _cmd_rootsys_gen(args) -> tuple[dict, dict, int]:
    st = build_root_system(args.family, args.rank)
    result = system_to_json(st)
    result["simple_roots"] = [jsonio.encode_vector(r) for r in st.simple_roots]
    result["num_roots"] = len(st.roots)
    result["num_lines"] = len(st.lines())
    return {"family": args.family, "rank": args.rank}, result, EXIT_OK


def _cmd_decomp_enumerate(args) -> tuple[dict, dict, int]:
    budget = _resolve_budget(args.budget)
    config = {"family": args.family, "rank": args.rank, "budget": budget}
    st = build_root_system(args.family, args.rank)
    try:
        found, stats = enumerate_special_with_stats(st, budget=budget)
    except SearchBudgetExceeded as exc:
        raise _Failure(
            {
                "error": {"type": "SearchBudgetExceeded", "message": str(exc)},
                "nodes": exc.nodes,
                "budget": exc.budget,
            },
            EXIT_VERIFICATION,
            config=config,
        )
    reps: list[TriPartition] = []
    seen = set()
    for tp in found:
        enc = canonical_encoding(tp)
        if enc not in seen:
            seen.add(enc)
            reps.append(canonicalize(tp))
    result = {
        "raw_count": stats.raw_count,
        "classes": len(reps),
        "class_representatives": [tp.to_json_dict() for tp in reps],
        "nodes": stats.nodes,
    }
    return config, result, EXIT_OK


def _cmd_decomp_check(args) -> tuple[dict, dict, int]:
    config = {"input": args.input, "diagnostics": args.diagnostics}
    if args.expect is not None:
        config["expect"] = args.expect
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            doc = jsonio.loads(fh.read())
    except OSError as exc:
        raise _Failure(
            {"error": {"type": "Usage", "message": f"cannot read {args.input!r}: {exc}"}},
            EXIT_USAGE,
        )
    except ValueError as exc:
        raise _Failure(
            {"error": {"type": "Usage", "message": f"bad JSON in {args.input!r}: {exc}"}},
            EXIT_USAGE,
        )
    tp = TriPartition.from_json_dict(doc)
    report = is_special(tp, diagnostics=args.diagnostics)
    result = report.to_json_dict()
    code = EXIT_OK
    if args.expect is not None:
        expected = args.expect == "true"
        result["expected"] = expected
        if report.verdict != expected:
            code = EXIT_VERIFICATION
    return config, result, code


def _cmd_decomp_standard(args) -> tuple[dict, dict, int]:
    st = build_root_system(args.family, args.rank)
    tp = standard_partition(st)
    report = is_special(tp)
    result = {"partition": tp.to_json_dict(), "special": report.verdict}
    return {"family": args.family, "rank": args.rank}, result, EXIT_OK


def _cmd_algebra_verify(args) -> tuple[dict, dict, int]:
    config = {"family": args.family, "rank": args.rank}
    table = build_compact_algebra(build_root_system(args.family, args.rank))
    if args.export is not None:
        config["export"] = args.export
        with open(args.export, "w", encoding="utf-8") as fh:
            fh.write(jsonio.dumps(export_structure_table(table)))
    report = verify_algebra(table)
    return config, report.to_json_dict(), EXIT_OK if report.ok else EXIT_VERIFICATION


def _cmd_go_check(args) -> tuple[dict, dict, int]:
    xs = _parse_eigenvalues(args.x)
    config = {
        "space": args.space,
        "x": [jsonio.encode_rational(v) for v in xs],
        "samples": args.samples,
        "seed": args.seed,
    }
    if args.expect is not None:
        config["expect"] = args.expect
    try:
        entry = get_entry(args.space)
    except KeyError as exc:
        raise _Failure({"error": {"type": "Usage", "message": str(exc)}}, EXIT_USAGE)
    space, blocks = entry.build()
    if len(xs) != len(blocks):
        raise _Failure(
            {
                "error": {
                    "type": "Usage",
                    "message": f"{args.space} takes {len(blocks)} eigenvalues, got {len(xs)}",
                }
            },
            EXIT_USAGE,
        )
    try:
        metric = make_metric(space, blocks, xs)
    except InvalidMetric as exc:
        result = {"status": "InvalidMetric", "message": str(exc)}
        code = EXIT_VERIFICATION if args.expect is not None else EXIT_OK
        return config, result, code
    verdict = go_sample_check(space, metric, n_samples=args.samples, seed=args.seed)
    result = verdict.to_json_dict()
    result["space"] = args.space
    code = EXIT_OK
    if args.expect is not None:
        want = "NotGO" if args.expect == "notgo" else "NoCounterexampleFound"
        result["expectation_met"] = verdict.status == want
        if verdict.status != want:
            code = EXIT_VERIFICATION
    return config, result, code


def _cmd_go_survey(args) -> tuple[dict, dict, int]:
    config = {"samples": args.samples, "seed": args.seed}
    return config, run_survey_rank2(n_samples=args.samples, seed=args.seed), EXIT_OK


def _cmd_catalog_list(args) -> tuple[dict, dict, int]:
    entries = [
        {
            "id": e.id,
            "family": e.family,
            "rank": e.rank,
            "description": e.description,
            "claim": e.claim,
            "arity": e.arity,
            "rank2_survey": e.rank2_survey,
            "expected": dict(e.expected),
        }
        for e in catalog_list()
    ]
    return {}, {"entries": entries}, EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gokit",
        description="exact verification toolkit for geodesic-orbit structures",
    )
    top = parser.add_subparsers(dest="group", required=True)

    def add_system_flags(p):
        p.add_argument("--family", required=True, choices=list("ABCDFG"))
        p.add_argument("--rank", required=True, type=int)

    rootsys = top.add_parser("rootsys", help="root-system construction")
    rsub = rootsys.add_subparsers(dest="sub", required=True)
    gen = rsub.add_parser("gen", help="emit a root system as JSON")
    add_system_flags(gen)
    gen.set_defaults(func=_cmd_rootsys_gen, command="rootsys gen")

    decomp = top.add_parser("decomp", help="special decompositions")
    dsub = decomp.add_subparsers(dest="sub", required=True)
    enum = dsub.add_parser("enumerate", help="enumerate special decompositions")
    add_system_flags(enum)
    enum.add_argument("--budget", type=int, default=None,
                      help="search node budget (default: GOKIT_BUDGET or built-in)")
    enum.set_defaults(func=_cmd_decomp_enumerate, command="decomp enumerate")
    check = dsub.add_parser("check", help="check one partition file")
    check.add_argument("--input", required=True, help="partition JSON file")
    check.add_argument("--expect", choices=["true", "false"], default=None)
    check.add_argument("--diagnostics", action="store_true")
    check.set_defaults(func=_cmd_decomp_check, command="decomp check")
    std = dsub.add_parser("standard", help="emit the standard B/C partition")
    add_system_flags(std)
    std.set_defaults(func=_cmd_decomp_standard, command="decomp standard")

    algebra = top.add_parser("algebra", help="compact-form structure tables")
    asub = algebra.add_subparsers(dest="sub", required=True)
    verify = asub.add_parser("verify", help="verify the structure table")
    add_system_flags(verify)
    verify.add_argument("--export", default=None, help="also write the table to this file")
    verify.set_defaults(func=_cmd_algebra_verify, command="algebra verify")

    go = top.add_parser("go", help="geodesic-orbit checks")
    gsub = go.add_subparsers(dest="sub", required=True)
    gcheck = gsub.add_parser("check", help="sample-check one catalog space")
    gcheck.add_argument("--space", required=True, help="catalog entry id")
    gcheck.add_argument("--x", required=True,
                        help="comma-separated block eigenvalues, e.g. 1,3 or 1,5/2")
    gcheck.add_argument("--samples", type=int, default=SAMPLES_DEFAULT)
    gcheck.add_argument("--seed", type=int, default=SEED_DEFAULT)
    gcheck.add_argument("--expect", choices=["go", "notgo"], default=None)
    gcheck.set_defaults(func=_cmd_go_check, command="go check")
    survey = gsub.add_parser("survey-rank2", help="eigenvalue-grid survey of rank-2 entries")
    survey.add_argument("--samples", type=int, default=SAMPLES_DEFAULT)
    survey.add_argument("--seed", type=int, default=SEED_DEFAULT)
    survey.set_defaults(func=_cmd_go_survey, command="go survey-rank2")

    catalog = top.add_parser("catalog", help="curated space catalog")
    csub = catalog.add_subparsers(dest="sub", required=True)
    clist = csub.add_parser("list", help="list catalog entries")
    clist.set_defaults(func=_cmd_catalog_list, command="catalog list")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    try:
        config, result, code = args.func(args)
    except _Failure as f:
        config = f.config if f.config is not None else {
            k: v for k, v in vars(args).items()
            if k not in ("func", "command", "group", "sub") and v is not None
        }
        result, code = f.result, f.code
    except GokitError as exc:
        config = {k: v for k, v in vars(args).items()
                  if k not in ("func", "command", "group", "sub") and v is not None}
        result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        code = EXIT_USAGE
    doc = {
        "command": args.command,
        "config": config,
        "result": result,
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    sys.stdout.write(jsonio.dumps(doc))
    return code


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
