"""Command-line interface: ``momentzeros <command> [options]``.

Commands: generate, matrix, basis, inverse, predict, stats, verify.
Exit status is 0 on success (or when every verified equivalence holds),
1 when a verification finds a mismatch, and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path
from typing import Sequence

from .exact import format_rational
from .inversepattern import (
    ZeroPattern,
    congenital_zero_predicate,
    grouped_congenital_predicate,
    inverse_via_factorization,
    predicate_pattern,
    zero_pattern,
)
from .measures import (
    AtomicMeasure,
    Grouping,
    MomentSequence,
    atomic_moments,
    disk_moments,
    grouped_product_moments,
    laguerre_product_moments,
)
from .momentmatrix import build_moment_matrix, matrix_csv
from .multiindex import GLexBasis
from .orthopoly import NotPositiveDefiniteError, gram_schmidt
from .stats import (
    corollary62_check,
    covariance_block,
    partial_correlation_report,
    random_atomic_measure,
)
from . import suites

log = logging.getLogger("momentzeros")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace("[", "").replace("]", "").split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load_atoms(path: str) -> AtomicMeasure:
    data = _read_json(path)
    try:
        return AtomicMeasure.from_dict(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: bad atomic measure: {exc}") from None


def load_moments(path: str) -> MomentSequence:
    data = _read_json(path)
    try:
        return MomentSequence.from_dict(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: bad moment sequence: {exc}") from None


def _block_sequence(spec: str, d: int) -> MomentSequence:
    family, _, param = spec.partition(":")
    if family == "laguerre":
        return laguerre_product_moments(_ints(param), d)
    if family == "disk":
        return disk_moments(int(param or 0), d)
    if family == "atoms":
        return atomic_moments(load_atoms(param), d)
    raise UsageError(f"unknown block family {family!r} (laguerre:S|disk:T|atoms:FILE)")


def build_sequence(args) -> MomentSequence:
    """Moment sequence of order ``2d`` from ``--moments`` or the family flags."""
    d = args.d
    if getattr(args, "moments", None):
        y = load_moments(args.moments)
        if y.order < 2 * d:
            raise UsageError(f"{args.moments}: order {y.order} is below 2d = {2 * d}")
        return y.truncate(2 * d)
    family = args.family
    if family == "laguerre":
        if not args.sigma:
            raise UsageError("--family laguerre needs --sigma")
        return laguerre_product_moments(args.sigma, d)
    if family == "disk":
        return disk_moments(args.t or 0, d)
    if family == "atoms":
        if not args.atoms:
            raise UsageError("--family atoms needs --atoms FILE")
        return atomic_moments(load_atoms(args.atoms), d)
    if family == "random":
        rng = random.Random(args.seed)
        return atomic_moments(random_atomic_measure(rng, args.n, args.atom_count), d)
    if family == "grouped":
        if not args.grouping or not args.block:
            raise UsageError("--family grouped needs --grouping and one --block per group")
        g = Grouping.parse(args.grouping)
        return grouped_product_moments(g, [_block_sequence(b, d) for b in args.block], 2 * d)
    raise UsageError(f"unknown family {family!r}")


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_generate(args) -> int:
    _emit(args, _dump(build_sequence(args).to_dict()))
    return EXIT_OK


def cmd_matrix(args) -> int:
    M = build_moment_matrix(build_sequence(args), args.d)
    _emit(args, M.to_csv() if args.format == "csv" else _dump(M.to_dict()))
    return EXIT_OK


def cmd_basis(args) -> int:
    B = gram_schmidt(build_moment_matrix(build_sequence(args), args.d))
    _emit(args, _dump(B.to_dict()))
    return EXIT_OK


def cmd_inverse(args) -> int:
    M = build_moment_matrix(build_sequence(args), args.d)
    Z = inverse_via_factorization(gram_schmidt(M), M)
    if args.format == "csv":
        text = matrix_csv(Z.basis, Z.entries)
    elif args.format == "structured":
        text = _dump(Z.to_dict())
    else:
        text = zero_pattern(Z).render()
    _emit(args, text)
    return EXIT_OK


def cmd_predict(args) -> int:
    basis = GLexBasis(args.n, args.d)
    if args.grouping:
        g = Grouping.parse(args.grouping)
        pred = lambda a, b: grouped_congenital_predicate(a, b, args.d, g)
    else:
        pred = lambda a, b: congenital_zero_predicate(a, b, args.d)
    pattern = ZeroPattern(basis, predicate_pattern(basis, pred))
    if args.format == "structured":
        text = _dump({
            "kind": "predicted_zeros", "n": args.n, "d": args.d,
            "grouping": args.grouping or Grouping.singletons(args.n).format(),
            "zeros": [[list(a), list(b)] for a, b in pattern.pairs()],
        })
    else:
        text = pattern.render()
    _emit(args, text)
    return EXIT_OK


def cmd_stats(args) -> int:
    if args.d != 1:
        raise UsageError("stats works on M_1; use --d 1")
    y = build_sequence(args)
    if args.action == "conditional":
        if args.i is None or args.j is None:
            raise UsageError("stats conditional needs --i and --j")
        report = corollary62_check(y, args.i - 1, args.j - 1)
        _emit(args, _dump(report))
        return EXIT_OK if report["agree"] else EXIT_MISMATCH
    V = covariance_block(build_moment_matrix(y, 1))
    if args.action == "covariance":
        _emit(args, V.to_csv() if args.format == "csv" else _dump(
            {"kind": "covariance", "variables": list(V.names),
             "rows": [[format_rational(x) for x in row] for row in V.R]}))
        return EXIT_OK
    _emit(args, _dump(partial_correlation_report(V)))
    return EXIT_OK


def _label(args) -> str:
    parts = [args.family, f"d={args.d}"]
    if args.family == "laguerre" and args.sigma:
        parts.append(f"sigma={args.sigma}")
    if args.family == "disk":
        parts.append(f"t={args.t or 0}")
    if args.family == "random":
        parts.append(f"seed={args.seed}")
    return " ".join(parts)


def _verify_one(args) -> "suites.Report":
    name = args.suite
    if name == "thm31":
        return suites.suite_thm31(args.n, args.d, args.samples or 10, args.seed, args.jobs)
    if name == "thm41":
        return suites.suite_thm41(args.d, args.grouping or "1|2,3",
                                  args.sigma[0] if args.sigma else 2,
                                  1 if args.t is None else args.t)
    if name == "thm51":
        if args.family == "random":
            return suites.suite_thm51("random", args.d, seed=args.seed)
        return suites.verify_full_triangularity_equiv(
            gram_schmidt(build_moment_matrix(build_sequence(args), args.d)), args.d,
            label=_label(args))
    if name == "thm61":
        if not args.grouping:
            raise UsageError("verify thm61 needs --grouping X|Y")
        return suites.suite_thm61(build_sequence(args), args.d, Grouping.parse(args.grouping),
                                  label=_label(args))
    if name == "cor62":
        return suites.suite_cor62(args.seed, args.samples or 20)
    if name == "ci":
        return suites.suite_ci(args.d, args.seed, args.samples or 20)
    if name == "closed":
        return suites.suite_closed_forms(d=args.d)
    if name == "lemma32":
        return suites.suite_lemma32(args.n, args.d)
    if name == "det":
        return suites.suite_determinantal(args.samples or 5, args.seed, args.n, args.d)
    raise UsageError(f"unknown suite {name!r}")


def cmd_verify(args) -> int:
    runs = []
    if args.config:
        data = _read_json(args.config)
        for k, entry in enumerate(data.get("runs", [])):
            try:
                sub = build_parser().parse_args(["verify"] + [str(a) for a in entry])
            except SystemExit:
                raise UsageError(f"{args.config}: run #{k}: bad arguments {entry}") from None
            runs.append(sub)
    elif args.suite:
        runs.append(args)
    else:
        raise UsageError("verify needs a suite name or --config")
    reports = []
    for run in runs:
        if run.config:
            raise UsageError("nested --config is not allowed")
        rep = _verify_one(run)
        reports.append(rep.to_dict())
        label = rep.notes[0] if rep.notes else (rep.instances[0].get("instance", "") if rep.instances else "")
        print(f"{'PASS' if rep.passed else 'FAIL'} {rep.suite} {label}",
              file=sys.stderr)
    passed = all(r["passed"] for r in reports)
    _emit(args, _dump({"kind": "verification", "passed": passed, "reports": reports}))
    return EXIT_OK if passed else EXIT_MISMATCH


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=2, help="variable count (random/predict)")
    p.add_argument("--d", type=int, default=2, help="matrix order d (moments up to 2d)")
    p.add_argument("--family", default="laguerre",
                   choices=["laguerre", "disk", "atoms", "random", "grouped"])
    p.add_argument("--sigma", type=_ints, help="Laguerre parameters, e.g. 1,2")
    p.add_argument("--t", type=int, help="disk weight exponent (default 0)")
    p.add_argument("--atoms", help="atomic measure file")
    p.add_argument("--atom-count", type=int, default=10)
    p.add_argument("--moments", help="precomputed moment sequence file")
    p.add_argument("--grouping", help="variable blocks, 1-based, e.g. '1|2,3'")
    p.add_argument("--block", action="append", help="per-block family: laguerre:S, disk:T, atoms:FILE")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", "-o", help="write to file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="momentzeros", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a moment sequence")
    _add_source(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("matrix", help="moment matrix M_d")
    _add_source(p)
    p.add_argument("--format", choices=["structured", "csv"], default="structured")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("basis", help="monic orthogonal basis (rows of C and norms h)")
    _add_source(p)
    p.add_argument("--format", choices=["structured"], default="structured")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("inverse", help="inverse moment matrix or its zero grid")
    _add_source(p)
    p.add_argument("--format", choices=["grid", "structured", "csv"], default="grid")
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("predict", help="predicted congenital zeros")
    _add_source(p)
    p.add_argument("--format", choices=["grid", "structured"], default="grid")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("stats", help="covariance / partial correlation at d = 1")
    p.add_argument("action", choices=["partial", "covariance", "conditional"])
    _add_source(p)
    p.set_defaults(d=1)
    p.add_argument("--i", type=int, help="first variable (1-based)")
    p.add_argument("--j", type=int, help="second variable (1-based)")
    p.add_argument("--format", choices=["structured", "csv"], default="structured")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", nargs="?",
                   choices=["thm31", "thm41", "thm51", "thm61", "cor62", "ci", "closed", "lemma32", "det"])
    _add_source(p)
    p.add_argument("--samples", type=int, help="instance count (suite-specific default)")
    p.add_argument("--config", help="JSON file with {'runs': [[suite, flags...], ...]}")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except NotPositiveDefiniteError as exc:
        print(f"error: moment matrix is not positive definite: {exc}", file=sys.stderr)
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
