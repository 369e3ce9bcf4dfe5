"""Command-line front end.

Exit codes: 0 equivalent / all minors equal / success, 1 not equivalent /
minor mismatch, 2 usage or input error. Standard output carries only JSON;
errors go to standard error as one JSON line.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .decide import analyze, enumerate_witnesses
from .errors import InputFileError, KernelEquivError
from .fields import DEFAULT_EQ_TOL, DEFAULT_ZERO_TOL, FieldSpec
from .kernels import (
    conjugate_kernel,
    dump_kernel,
    gen_cd_kernel,
    gen_random_kernel,
    gen_sine_kernel,
    random_sign_vector,
    read_kernel_file,
)
from .oracle import compare_minors, default_workers

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D401 - argparse hook
        raise UsageError(message)


def _emit(payload, out) -> None:
    out.write(json.dumps(payload, separators=(",", ":")) + "\n")


def _fail(kind: str, message: str, err) -> int:
    err.write(json.dumps({"error": kind, "message": message}, separators=(",", ":")) + "\n")
    return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kernel-equiv", description="Equivalence of symmetric DPP kernels.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def pair_command(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("kernel_k")
        p.add_argument("kernel_q")
        p.add_argument("--json", action="store_true", help="JSON output (always on)")
        p.add_argument("--verbose", action="store_true", help="human summary on stderr")
        return p

    check = pair_command("check", "decide equivalence and print a report")
    check.add_argument("--dump-graph", action="store_true")
    check.add_argument("--dump-transition", action="store_true")
    check.add_argument("--find-minor", action="store_true")
    check.add_argument("--all", action="store_true", help="report every failed necessary check")

    pair_command("witness", "print the canonical conjugation function")
    pair_command("enumerate", "print every conjugation function, one per line")

    oracle = pair_command("oracle", "brute-force comparison of principal minors")
    oracle.add_argument("--max-size", type=int, default=None)
    oracle.add_argument("--workers", type=int, default=None)

    gen = sub.add_parser("gen", help="write a generated kernel file")
    gen.add_argument("--kind", choices=("random", "sine", "cd"), default="random")
    gen.add_argument("--field", choices=("rational", "gfp", "approx"), default="rational")
    gen.add_argument("--p", type=int, default=None)
    gen.add_argument("--zero-tol", type=float, default=DEFAULT_ZERO_TOL)
    gen.add_argument("--eq-tol", type=float, default=DEFAULT_EQ_TOL)
    gen.add_argument("--n", type=int, default=None)
    gen.add_argument("--density", type=float, default=1.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--points", type=float, nargs="+", default=None)
    gen.add_argument("--degree", type=int, default=None)
    gen.add_argument(
        "--conjugate-seed",
        type=int,
        default=None,
        help="emit the conjugate of the kernel by a random sign vector from this seed",
    )
    gen.add_argument("--out", default=None, help="write to a file instead of stdout")
    gen.add_argument("--json", action="store_true", help="JSON output (always on)")
    gen.add_argument("--verbose", action="store_true")
    return parser


def _field_from_args(args) -> FieldSpec:
    if args.field == "gfp":
        if args.p is None:
            raise UsageError("--field gfp requires --p")
        return FieldSpec.gfp(args.p)
    if args.p is not None:
        raise UsageError("--p only applies to --field gfp")
    if args.field == "approx":
        return FieldSpec.approx(args.zero_tol, args.eq_tol)
    return FieldSpec.rational()


def _run_gen(args, out, err) -> int:
    if args.kind == "random":
        if args.n is None:
            raise UsageError("--kind random requires --n")
        if args.n < 1:
            raise UsageError("--n must be positive")
        if not 0 < args.density <= 1:
            raise UsageError("--density must lie in (0, 1]")
        K = gen_random_kernel(args.n, _field_from_args(args), args.density, args.seed)
    else:
        if args.points is None:
            raise UsageError(f"--kind {args.kind} requires --points")
        if args.field != "approx" and args.field != "rational":
            raise UsageError(f"--kind {args.kind} produces approx kernels")
        spec = FieldSpec.approx(args.zero_tol, args.eq_tol)
        if args.kind == "sine":
            K = gen_sine_kernel(args.points, spec)
        else:
            if args.degree is None or args.degree < 1:
                raise UsageError("--kind cd requires --degree >= 1")
            K = gen_cd_kernel(args.degree, args.points, spec)
    if args.conjugate_seed is not None:
        K = conjugate_kernel(K, random_sign_vector(K.n, args.conjugate_seed))
    text = dump_kernel(K)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputFileError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        out.write(text)
    if args.verbose:
        err.write(f"generated {K.n}x{K.n} kernel over {K.spec.kind}\n")
    return EXIT_OK


def _summary(verdict) -> str:
    if verdict.equivalent:
        tag = " (heuristic)" if verdict.heuristic else ""
        return (
            f"equivalent{tag}: witness {list(verdict.witness)}, "
            f"{verdict.component_count} component(s), {verdict.witness_count} witness(es)\n"
        )
    return f"not equivalent: {verdict.to_json()['certificate']}\n"


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), err)
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR

    try:
        if args.command == "gen":
            return _run_gen(args, out, err)

        K = read_kernel_file(args.kernel_k)
        Q = read_kernel_file(args.kernel_q)

        if args.command == "oracle":
            workers = args.workers if args.workers is not None else default_workers()
            if workers < 1:
                raise UsageError("--workers must be positive")
            report = compare_minors(K, Q, args.max_size, workers=workers)
            _emit(report.to_json(K.spec), out)
            if args.verbose:
                err.write(f"checked {report.subsets_checked} subsets\n")
            return EXIT_OK if report.all_equal else EXIT_NEGATIVE

        find_minor = getattr(args, "find_minor", False)
        want_all = getattr(args, "all", False)
        result = analyze(K, Q, find_minor=find_minor, all_failures=want_all)
        verdict = result.verdict
        if args.verbose:
            err.write(_summary(verdict))

        if args.command == "check":
            report = verdict.to_json()
            if want_all:
                report["failures"] = [f.to_json() for f in verdict.all_failures]
            if args.dump_graph:
                report["graph"] = None if result.graph is None else result.graph.to_json()
            if args.dump_transition:
                T = result.transition
                report["transition"] = None if T is None else T.to_json()
            _emit(report, out)
        elif args.command == "witness":
            _emit(list(verdict.witness) if verdict.equivalent else None, out)
        else:
            if verdict.equivalent:
                for g in enumerate_witnesses(verdict, result.graph):
                    _emit(list(g), out)
        return EXIT_OK if verdict.equivalent else EXIT_NEGATIVE
    except UsageError as exc:
        return _fail("usage", str(exc), err)
    except KernelEquivError as exc:
        return _fail(exc.code, str(exc), err)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
