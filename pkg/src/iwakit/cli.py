"""Command-line front door tying the pipelines together.

Exit codes separate failure kinds: 0 success, 2 for usage errors (argparse's
own code), 3 when a computation is blocked on an unmet or unresolved
hypothesis, 1 for computational and I/O failures.  Every JSON payload
carries "schema": 1, sorted keys, and no timestamps, so identical inputs
and cache state give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .classify import bulk_classify, classification_csv
from .counting import TraceCache
from .density import (
    alpha_closed_form,
    asymptotic_report,
    beta_stated_form,
    delange_exponents,
    density_record,
    table_csv,
)
from .elliptic import (
    WeierstrassModel,
    conductor,
    format_model,
    minimal_model,
    parse_model,
    reduction_type,
)
from .eulerchar import (
    HypothesisNotMetError,
    SupersingularTwistError,
    TwistNotGoodError,
    euler_char_factors,
    euler_factors_record,
)
from .fields import CyclicExtension, count_extensions, enumerate_extensions, extension_record
from .kida import (
    HypothesisBlockedError,
    check_hypotheses,
    hypothesis_record,
    kida_record,
    lambda_transfer,
)
from .ntheory import factorize
from .refdata import ingest_reference, reference_record

__all__ = ["main", "EXIT_OK", "EXIT_FAILURE", "EXIT_USAGE", "EXIT_BLOCKED"]

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2  # argparse exits with this on its own
EXIT_BLOCKED = 3

BLOCKED_ERRORS = (
    HypothesisBlockedError,
    HypothesisNotMetError,
    TwistNotGoodError,
    SupersingularTwistError,
)


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------


def _curve_arg(text: str) -> WeierstrassModel:
    try:
        return parse_model(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _prime_list_arg(text: str) -> tuple[int, ...]:
    # keeps the user's order so --exponents stays aligned prime by prime
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _int_list_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _grid_arg(text: str) -> tuple[int, ...]:
    # accepts scientific notation for convenience: "1e3,1e4" -> (1000, 10000)
    out = []
    for part in text.split(","):
        try:
            value = float(part)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad grid point {part!r}") from exc
        if value != int(value):
            raise argparse.ArgumentTypeError(f"grid point {part!r} is not an integer")
        out.append(int(value))
    return tuple(out)


def _bool_arg(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _cache_from(args: argparse.Namespace) -> TraceCache:
    directory = getattr(args, "cache_dir", None) or os.environ.get("IWAKIT_CACHE_DIR")
    return TraceCache(directory=directory)


def _extension_from(args: argparse.Namespace) -> CyclicExtension:
    p = args.p
    tame = args.ramified or ()
    exponents = args.exponents
    if exponents is None:
        exponents = (1,) * len(tame)
    if len(exponents) != len(tame):
        raise ValueError(
            f"{len(tame)} ramified primes but {len(exponents)} exponents"
        )
    pairs = sorted(zip(tame, exponents))
    wild_exponent = getattr(args, "wild_exponent", None)
    wild = bool(getattr(args, "wild", False)) or wild_exponent is not None
    if wild and wild_exponent is None:
        wild_exponent = 1
    # a character and its powers cut out the same field, so reduce mod p and
    # rescale the whole vector to the normalized representative
    vector = [e for _, e in pairs] + ([wild_exponent] if wild else [])
    if any(e % p == 0 for e in vector):
        raise ValueError(f"an exponent divisible by {p} cuts out no degree-{p} character")
    inverse = pow(vector[0], -1, p)
    vector = [(e * inverse) % p for e in vector]
    return CyclicExtension(
        p=p,
        tame_ramified=tuple(ell for ell, _ in pairs),
        wild_at_p=wild,
        exponents=tuple(vector[: len(pairs)]),
        wild_exponent=vector[-1] if wild else None,
    )


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps({"schema": 1, **payload}, sort_keys=True, indent=2) + "\n"
    _write_text(text, out)


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _curve_keys(model: WeierstrassModel) -> dict:
    minimal, _ = minimal_model(model)
    return {"curve": format_model(model), "minimal_model": format_model(minimal)}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_classify(args: argparse.Namespace) -> int:
    cache = _cache_from(args)
    records = bulk_classify(args.curve, args.p, args.bound, cache=cache, jobs=args.jobs)
    if args.format == "csv":
        _write_text(classification_csv(records), args.out)
        return EXIT_OK
    counts = {"Q1": 0, "Q2": 0, "Q3": 0, "script_Q": 0}
    for rec in records:
        counts[rec.category] += 1
        if rec.in_script_q:
            counts["script_Q"] += 1
    payload = {
        "subcommand": "classify",
        **_curve_keys(args.curve),
        "p": args.p,
        "bound": args.bound,
        "counts": counts,
        "primes": [
            {
                "ell": rec.ell,
                "class": rec.category,
                "a_ell": rec.a_ell,
                "in_script_Q": rec.in_script_q,
            }
            for rec in records
        ],
    }
    _emit(payload, args.out)
    return EXIT_OK


def _resolve_lambda_base(args: argparse.Namespace, report) -> int:
    if args.lambda_base is not None:
        if report.base_mu_lambda_zero is True and args.lambda_base != 0:
            raise ValueError(
                "base mu and lambda vanish, so --lambda-base must be 0"
            )
        return args.lambda_base
    if report.base_mu_lambda_zero is True:
        return 0
    raise HypothesisBlockedError(
        "lambda over the base field is not determined; pass --lambda-base"
    )


def _cmd_kida(args: argparse.Namespace) -> int:
    ext = _extension_from(args)
    report = check_hypotheses(
        args.curve, args.p, ext, mu_lambda_zero_at_base=args.mu_lambda_zero
    )
    lambda_base = _resolve_lambda_base(args, report)
    result = lambda_transfer(
        lambda_base, args.p, ext, args.curve, report=report, override=args.override
    )
    payload = {
        "subcommand": "kida",
        **_curve_keys(args.curve),
        "extension": extension_record(ext),
        # the transfer depends only on the ramification data, so every
        # normalized character with the same tame set and wild flag shares it
        "fields_sharing_result": _sharing_count(ext),
        "hypotheses": hypothesis_record(report),
        "transfer": kida_record(result),
    }
    _emit(payload, args.out)
    return EXIT_OK


def _sharing_count(ext: CyclicExtension) -> int:
    slots = len(ext.tame_ramified) + (1 if ext.wild_at_p else 0)
    return (ext.p - 1) ** (slots - 1)


def _cmd_euler_char(args: argparse.Namespace) -> int:
    dataset = ingest_reference(args.reference) if args.reference else None
    minimal, _ = minimal_model(args.curve)
    if dataset is not None:
        record = reference_record(minimal, args.p, dataset=dataset)
    else:
        record = reference_record(minimal, args.p)
    sha_order = None
    sha_explicit = args.sha is not None
    if sha_explicit and args.sha != "unknown":
        sha_order = int(args.sha)
    rank_zero = args.analytic_rank_zero
    source_note = None
    if record is not None:
        if not sha_explicit and record["sha_p_order"] != "unknown":
            sha_order = record["sha_p_order"]
        if rank_zero is None:
            rank_zero = record["analytic_rank"] == 0
        source_note = record["source_note"]
    # reference resolution already happened here, against the chosen dataset
    factors = euler_char_factors(
        args.curve, args.p, sha_order=sha_order,
        analytic_rank_zero=rank_zero, use_reference=False,
    )
    payload = {
        "subcommand": "euler-char",
        **_curve_keys(args.curve),
        "p": args.p,
        "factors": euler_factors_record(factors),
        "external": {
            "analytic_rank_zero": factors.analytic_rank_zero,
            "sha_p_order": factors.sha_p_order,
            "source_note": source_note,
        },
    }
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_enumerate_fields(args: argparse.Namespace) -> int:
    primes = args.ramified or ()
    fields = enumerate_extensions(args.p, primes, wild_at_p=args.wild)
    payload = {
        "subcommand": "enumerate-fields",
        "p": args.p,
        "ramified": list(primes),
        "wild_at_p": args.wild,
        "count": len(fields),
        "tame_count_formula": count_extensions(args.p, primes) if primes else 0,
        "fields": [extension_record(ext) for ext in fields],
    }
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_density(args: argparse.Namespace) -> int:
    cache = _cache_from(args)
    report = asymptotic_report(
        args.curve, args.p, args.grid, cache=cache, jobs=args.jobs, method=args.method
    )
    if args.g_csv:
        _write_text(table_csv(report.g_table, "g"), args.g_csv)
    if args.m_csv:
        _write_text(table_csv(report.M_table, "M"), args.m_csv)
    payload = {
        "subcommand": "density",
        **_curve_keys(args.curve),
        **density_record(report),
    }
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    cache = _cache_from(args)
    model = args.curve
    p = args.p
    minimal, _ = minimal_model(model)
    bad = [ell for ell, _ in factorize(conductor(minimal))]
    reduction = []
    for ell in bad:
        local = reduction_type(minimal, ell)
        reduction.append({
            "ell": ell,
            "type": local.type,
            "kodaira": local.kodaira,
            "tamagawa": local.tamagawa,
            "conductor_exponent": local.conductor_exponent,
        })
    records = bulk_classify(model, p, args.bound, cache=cache, jobs=args.jobs)
    counts = {"Q1": 0, "Q2": 0, "Q3": 0, "script_Q": 0}
    for rec in records:
        counts[rec.category] += 1
        if rec.in_script_q:
            counts["script_Q"] += 1
    try:
        euler: dict = euler_factors_record(euler_char_factors(model, p))
    except ValueError as exc:
        key = "blocked" if isinstance(exc, BLOCKED_ERRORS) else "error"
        euler = {key: str(exc)}
    payload = {
        "subcommand": "report",
        **_curve_keys(model),
        "p": p,
        "conductor": conductor(minimal),
        "reduction": reduction,
        "classification": {"bound": args.bound, "counts": counts},
        "euler": euler,
        "density_constants": {
            "alpha": str(alpha_closed_form(p)),
            "delange_pair": [str(v) for v in delange_exponents(p, alpha_closed_form(p))],
            "beta_stated": str(beta_stated_form(p)),
        },
    }
    if args.ramified:
        try:
            ext = _extension_from(args)
            report = check_hypotheses(model, p, ext, mu_lambda_zero_at_base=None)
            lambda_base = _resolve_lambda_base(args, report)
            result = lambda_transfer(lambda_base, p, ext, model, report=report)
            payload["kida"] = {
                "extension": extension_record(ext),
                "hypotheses": hypothesis_record(report),
                "transfer": kida_record(result),
            }
        except ValueError as exc:
            key = "blocked" if isinstance(exc, BLOCKED_ERRORS) else "error"
            payload["kida"] = {key: str(exc)}
    _emit(payload, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser, *, curve: bool = True) -> None:
    if curve:
        sub.add_argument("--curve", type=_curve_arg, required=True,
                         help="coefficients a1,a2,a3,a4,a6")
    sub.add_argument("--p", type=int, required=True, help="odd prime")
    sub.add_argument("--out", default=None, help="write output here instead of stdout")


def _add_cache(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--cache-dir", default=None,
                     help="trace cache directory (or IWAKIT_CACHE_DIR)")
    sub.add_argument("--jobs", type=int, default=1, help="worker count")


def _add_extension(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--ramified", type=_prime_list_arg, default=(),
                     help="tame ramified primes, comma separated")
    sub.add_argument("--exponents", type=_int_list_arg, default=None,
                     help="character exponents per tame prime (default all 1)")
    sub.add_argument("--wild", action="store_true", help="also ramify at p")
    sub.add_argument("--wild-exponent", type=int, default=None,
                     help="wild character exponent (implies --wild)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iwakit",
        description="Iwasawa-theoretic invariants of elliptic curves over cyclic fields",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    classify = sub.add_parser("classify", help="classify primes up to a bound")
    _add_common(classify)
    _add_cache(classify)
    classify.add_argument("--bound", type=int, required=True)
    classify.add_argument("--format", choices=("json", "csv"), default="json")
    classify.set_defaults(func=_cmd_classify)

    kida = sub.add_parser("kida", help="transfer lambda across a cyclic extension")
    _add_common(kida)
    _add_extension(kida)
    kida.add_argument("--lambda-base", type=int, default=None,
                      help="lambda over the base field (external input)")
    kida.add_argument("--mu-lambda-zero", type=_bool_arg, default=None,
                      help="assert base mu = lambda = 0 from external knowledge")
    kida.add_argument("--override", action="store_true",
                      help="proceed past unresolved hypotheses")
    kida.set_defaults(func=_cmd_kida)

    euler = sub.add_parser("euler-char", help="Euler characteristic factor audit")
    _add_common(euler)
    euler.add_argument("--sha", default=None,
                       help="p-part of the Tate-Shafarevich order, or 'unknown'")
    euler.add_argument("--analytic-rank-zero", type=_bool_arg, default=None)
    euler.add_argument("--reference", default=None,
                       help="JSON reference dataset replacing the bundled one")
    euler.set_defaults(func=_cmd_euler_char)

    fields = sub.add_parser("enumerate-fields", help="cyclic degree-p fields by ramification")
    _add_common(fields, curve=False)
    _add_extension(fields)
    fields.set_defaults(func=_cmd_enumerate_fields)

    density = sub.add_parser("density", help="density constants and asymptotic fit")
    _add_common(density)
    _add_cache(density)
    density.add_argument("--grid", type=_grid_arg, required=True,
                         help="increasing X grid, e.g. 1e3,1e4,1e5,1e6")
    density.add_argument("--method", choices=("dfs", "sieve"), default="dfs")
    density.add_argument("--g-csv", default=None, help="write the g table as CSV here")
    density.add_argument("--m-csv", default=None, help="write the M table as CSV here")
    density.set_defaults(func=_cmd_density)

    report = sub.add_parser("report", help="composite summary for one curve and p")
    _add_common(report)
    _add_cache(report)
    _add_extension(report)
    report.add_argument("--bound", type=int, default=1000,
                        help="classification bound for the summary counts")
    report.add_argument("--lambda-base", type=int, default=None)
    report.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BLOCKED_ERRORS as exc:
        print(f"blocked: {exc}", file=sys.stderr)
        return EXIT_BLOCKED
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
