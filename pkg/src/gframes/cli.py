"""Command line front end.

Exit codes: 0 success (and, for ``analyze``, the family is a frame),
2 analyzed family fails the frame condition, 3 a verification or
reconstruction check failed, 1 usage, schema, or data errors.

``GFRAME_TOL`` in the environment supplies a default for ``--tol``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import serialization as ser
from .controlled import controlled_classify, reconstruct, validate_commutation
from .errors import GFrameError, NotAFrame, SchemaError
from .frames import FRAME, classify
from .generators import generate
from .module_space import ModuleVector, vec_norm
from .rng import complex_normal, stream
from .algebra import DEFAULT_TOL
from .verifier import (ADJOINT_TOL, NORM_BOUND_TOL, SCALAR_TIGHT_TOL,
                       default_batch, run_suite, suite_passed)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_FRAME = 2
EXIT_CHECK_FAILED = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; this tool reserves 2 for "not a frame"
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="gframes",
                description="Analyze, generate and verify controlled "
                            "operator-valued frames over matrix algebras.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    pa = sub.add_parser("analyze", help="classify a scenario file and report bounds")
    pa.add_argument("path", help="scenario JSON file")
    pa.add_argument("--tol", type=float, default=None,
                    help="absolute spectral tolerance (default 1e-9)")
    pa.add_argument("--out", default=None, help="write the report here instead of stdout")

    pv = sub.add_parser("verify", help="run the randomized property suite")
    pv.add_argument("--batch", default=None,
                    help="JSON file with a list of generator specs")
    pv.add_argument("--default", action="store_true",
                    help="use the built-in batch (the default when --batch is absent)")
    pv.add_argument("--tol", type=float, default=None, help="check tolerance")
    pv.add_argument("--threads", type=int, default=1,
                    help="worker threads; results are byte-identical for any count")
    pv.add_argument("--out", default=None, help="write the report here instead of stdout")

    pg = sub.add_parser("generate", help="generate a scenario from a spec")
    pg.add_argument("--spec", required=True,
                    help="generator spec: a JSON file path or an inline JSON object")
    pg.add_argument("--threads", type=int, default=1,
                    help="worker threads; output bytes are identical for any count")
    pg.add_argument("--out", default=None, help="write the scenario here instead of stdout")

    pr = sub.add_parser("reconstruct",
                        help="round-trip a vector through analysis and synthesis")
    pr.add_argument("path", help="scenario JSON file")
    src = pr.add_mutually_exclusive_group(required=True)
    src.add_argument("--vector", default=None, help="JSON file with the input vector")
    src.add_argument("--random", type=int, default=None, metavar="SEED",
                     help="draw the input vector from this seed")
    pr.add_argument("--tol", type=float, default=None,
                    help="acceptance tolerance for the relative error")
    pr.add_argument("--out", default=None, help="write the report here instead of stdout")
    return p


def _env_tol() -> float | None:
    raw = os.environ.get("GFRAME_TOL")
    if raw is None or raw == "":
        return None
    try:
        v = float(raw)
    except ValueError:
        raise GFrameError(f"GFRAME_TOL is not a number: {raw!r}")
    if not (v > 0):
        raise GFrameError(f"GFRAME_TOL must be positive, got {raw!r}")
    return v


def _resolve_tol(arg_tol: float | None) -> float | None:
    if arg_tol is not None:
        if not (arg_tol > 0):
            raise GFrameError(f"--tol must be positive, got {arg_tol}")
        return arg_tol
    return _env_tol()


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GFrameError(f"cannot read {path}: {exc.strerror or exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"invalid JSON ({exc.msg} at line {exc.lineno})")


def _write_report(obj, out_path: str | None) -> None:
    text = ser.dumps(obj)
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _bounds_obj(bounds):
    if bounds is None:
        return None
    return [bounds.lower, bounds.upper]


def _verdict_fields(verdict):
    return verdict.kind, _bounds_obj(verdict.bounds), dict(verdict.witnesses)


def cmd_analyze(args) -> int:
    tol = _resolve_tol(args.tol)
    if tol is None:
        tol = 1e-9
    obj = _load_json(args.path)
    scenario = ser.scenario_from_obj(obj, tol=tol)
    family, pair = scenario.family, scenario.pair

    verdict = classify(family, tol=tol)
    kind, bounds, witnesses = _verdict_fields(verdict)

    commutation = validate_commutation(family, pair.c, pair.cp,
                                       tol=pair.commutation.tol)
    controlled_kind = None
    controlled_bounds = None
    controlled_witnesses = {}
    cond_cc = None
    if commutation.passed:
        cv = controlled_classify(scenario, tol=tol)
        controlled_kind, controlled_bounds, controlled_witnesses = _verdict_fields(cv)
        if cv.kind == FRAME:
            cond_cc = cv.bounds.upper / cv.bounds.lower

    cond_plain = bounds[1] / bounds[0] if kind == FRAME else None
    report = {
        "version": ser.REPORT_VERSION,
        "verdict": kind,
        "bounds": bounds,
        "witnesses": witnesses,
        "controlled_verdict": controlled_kind,
        "controlled_bounds": controlled_bounds,
        "controlled_witnesses": controlled_witnesses,
        "commutation": {
            "cc_commutator": commutation.cc_commutator,
            "per_point": list(commutation.per_point),
            "tol": commutation.tol,
            "passed": commutation.passed,
        },
        "condition_numbers": {
            "C": pair.c.condition_number,
            "Cprime": pair.cp.condition_number,
            "frame_operator": cond_plain,
            "controlled_frame_operator": cond_cc,
        },
    }
    _write_report(report, args.out)
    sys.stderr.write(f"verdict: {kind}\n")
    return EXIT_OK if kind == FRAME else EXIT_NOT_FRAME


def cmd_verify(args) -> int:
    tol = _resolve_tol(args.tol)
    if args.threads < 1:
        raise GFrameError(f"--threads must be >= 1, got {args.threads}")
    if args.batch is not None and args.default:
        raise GFrameError("--batch and --default are mutually exclusive")
    if args.batch is not None:
        batch = ser.batch_from_obj(_load_json(args.batch))
    else:
        batch = default_batch()
    kwargs = {} if tol is None else {"tol": tol}
    results = run_suite(batch, workers=args.threads, **kwargs)
    for r in results:
        sys.stderr.write(f"{r.check_id}: {r.status} "
                         f"({r.passes}/{r.scenarios_run})\n")
    # no thread count in the report: output bytes must not depend on it
    effective = DEFAULT_TOL if tol is None else tol
    report = {
        "version": ser.REPORT_VERSION,
        "tolerances": {
            "check": effective,
            "norm_bound": NORM_BOUND_TOL,
            "adjoint": ADJOINT_TOL,
            "scalar_tight": SCALAR_TIGHT_TOL,
        },
        "results": [ser.check_result_to_obj(r) for r in results],
    }
    _write_report(report, args.out)
    return EXIT_OK if suite_passed(results) else EXIT_CHECK_FAILED


def cmd_generate(args) -> int:
    if args.threads < 1:
        raise GFrameError(f"--threads must be >= 1, got {args.threads}")
    raw = args.spec.strip()
    if raw.startswith("{"):
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaError("--spec", f"invalid JSON ({exc.msg})")
    else:
        obj = _load_json(args.spec)
    spec = ser.spec_from_obj(obj)
    scenario = generate(spec)
    _write_report(ser.scenario_to_obj(scenario), args.out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    tol = _resolve_tol(args.tol)
    if tol is None:
        tol = 1e-8
    obj = _load_json(args.path)
    scenario = ser.scenario_from_obj(obj)
    family = scenario.family
    if args.vector is not None:
        x = ser.vector_from_obj(_load_json(args.vector))
        if x.algebra_dim != family.algebra_dim or x.rank != family.module_rank:
            raise SchemaError("vector", "shape does not match the scenario")
    else:
        rng = stream(args.random, 0)
        n, d = family.algebra_dim, family.module_rank
        x = ModuleVector(n, d, complex_normal(rng, (n, d * n)))

    try:
        result = reconstruct(scenario, x)
    except NotAFrame as exc:
        sys.stderr.write(f"gframes: not a frame: {exc}\n")
        return EXIT_NOT_FRAME
    err = result.error
    scale = max(1.0, vec_norm(x))
    rel = err / scale
    cv = controlled_classify(scenario)
    cond = cv.bounds.upper / cv.bounds.lower if cv.kind == FRAME else float("inf")
    passed = rel <= tol * max(1.0, cond)
    report = {
        "version": ser.REPORT_VERSION,
        "error": err,
        "relative_error": rel,
        "condition_number": cond,
        "tol": tol,
        "passed": passed,
    }
    _write_report(report, args.out)
    sys.stderr.write(f"reconstruction {'ok' if passed else 'FAILED'}: "
                     f"relative error {rel:.3e}\n")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    handler = {"analyze": cmd_analyze, "verify": cmd_verify,
               "generate": cmd_generate, "reconstruct": cmd_reconstruct}[args.command]
    try:
        return handler(args)
    except SchemaError as exc:
        sys.stderr.write(f"gframes: schema error: {exc}\n")
        return EXIT_USAGE
    except (GFrameError, ValueError) as exc:
        sys.stderr.write(f"gframes: error: {exc}\n")
        return EXIT_USAGE


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
