"""Command-line interface: ``micz <command> [options]``.

Exit codes: 0 success, 1 postcondition not met, 2 invalid input,
3 integrator failure, 4 orbit-class error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import conic, dynamics, lorentz
from .errors import (
    InvalidParams,
    InvalidTransform,
    NearCollision,
    OriginPoint,
    SignFlip,
    StepLimitExceeded,
    WrongClass,
)
from .orbit_params import (
    CLASS_TOL,
    EuclideanOrbitParams,
    MinkowskiOrbitParams,
    classify,
    eccentricity,
    energy_euclidean,
    energy_minkowski,
    is_circle,
    params_from_dict,
    to_euclidean,
    to_minkowski,
    validate_euclidean,
    validate_minkowski,
)
from .verify import run_verify

EXIT_POSTCONDITION = 1
EXIT_INPUT = 2
EXIT_INTEGRATOR = 3
EXIT_CLASS = 4


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_params(path: str):
    """Load and validate a params file holding either representation."""
    p = params_from_dict(_read_json(path))
    if isinstance(p, EuclideanOrbitParams):
        validate_euclidean(p)
    else:
        validate_minkowski(p)
    return p


def _as_minkowski(p) -> MinkowskiOrbitParams:
    return p if isinstance(p, MinkowskiOrbitParams) else to_minkowski(p)


def _as_euclidean(p) -> EuclideanOrbitParams:
    return p if isinstance(p, EuclideanOrbitParams) else to_euclidean(p)


def dumps(obj) -> str:
    # json writes floats with repr, the shortest round-trip decimal form
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _emit(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def cmd_convert(args) -> int:
    p = load_params(args.input)
    target = args.to or ("minkowski" if isinstance(p, EuclideanOrbitParams) else "euclidean")
    out = _as_minkowski(p) if target == "minkowski" else _as_euclidean(p)
    _emit(dumps(out.to_dict()), args.output)
    return 0


def info(p, tol: float = CLASS_TOL) -> dict:
    q = _as_minkowski(p)
    e = _as_euclidean(p)
    E = energy_euclidean(p) if isinstance(p, EuclideanOrbitParams) else energy_minkowski(p)
    return {
        "mu": e.mu,
        "energy": E,
        "eccentricity": eccentricity(e),
        "class": classify(q, tol).value,
        "is_circle": is_circle(e, tol),
    }


def cmd_info(args) -> int:
    _emit(dumps(info(load_params(args.input), args.tol)), args.output)
    return 0


def cmd_sample(args) -> int:
    q = _as_minkowski(load_params(args.input))
    pts = conic.sample_orbit(q, args.n, args.range_cap, args.tol)
    rows = [(r[0], r[1], r[2], math.sqrt(r @ r)) for r in pts]
    _emit(_csv(["x", "y", "z", "x0"], rows), args.output)
    return 0


def _load_state(path: str) -> dynamics.PhaseState:
    data = _read_json(path)
    if isinstance(data, dict) and {"q", "v", "mu"} <= set(data):
        try:
            return dynamics.PhaseState(data.get("t", 0.0), data["q"], data["v"], data["mu"])
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed state: {exc}") from exc
    p = params_from_dict(data)
    if isinstance(p, MinkowskiOrbitParams):
        validate_minkowski(p)
        p = to_euclidean(p)
    return dynamics.synthesize_initial_state(p)


def cmd_integrate(args) -> int:
    s0 = _load_state(args.input)
    cfg = dynamics.IntegratorConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                                    max_steps=args.max_steps)
    tr = dynamics.integrate(s0, args.T, cfg)
    rows = ((t, *q, *v) for t, q, v in zip(tr.t, tr.q, tr.v))
    _emit(_csv(["t", "qx", "qy", "qz", "vx", "vy", "vz"], rows), args.output)
    report = dumps(dynamics.drift_report(tr).to_dict())
    if args.report:
        _emit(report, args.report)
    else:
        sys.stderr.write(report)
    return 0


def _symmetry_result(g, p, target, output) -> int:
    residual = lorentz.params_distance(lorentz.act(g, p), target)
    _emit(dumps(g.to_dict()), output)
    sys.stderr.write(f"residual {residual!r}\n")
    return 0 if residual < 1e-7 else EXIT_POSTCONDITION


def cmd_canonicalize(args) -> int:
    q = _as_minkowski(load_params(args.input))
    g = lorentz.canonicalize(q, args.tol)
    return _symmetry_result(g, q, lorentz.canonical_pair(classify(q, args.tol)), args.output)


def cmd_transport(args) -> int:
    q1 = _as_minkowski(load_params(args.input))
    q2 = _as_minkowski(load_params(args.target))
    return _symmetry_result(lorentz.transport(q1, q2, args.tol), q1, q2, args.output)


def cmd_verify(args) -> int:
    report = run_verify(args.seed, args.count, args.perturb)
    _emit(dumps(report), args.output)
    return 0 if report["passed"] else EXIT_POSTCONDITION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="micz", description="MICZ-Kepler orbit toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text, needs_input=True):
        sp = sub.add_parser(name, help=help_text)
        if needs_input:
            sp.add_argument("-i", "--input", required=True, help="params JSON file, '-' for stdin")
        sp.add_argument("-o", "--output", default=None, help="output file (default stdout)")
        sp.add_argument("--tol", type=float, default=CLASS_TOL,
                        help="orbit-class tolerance on a.a (default %(default)g)")
        sp.set_defaults(func=func)
        return sp

    sp = command("convert", cmd_convert, "convert between (A, L) and (a, l)")
    sp.add_argument("--to", choices=["minkowski", "euclidean"],
                    help="target representation (default: the other one)")
    command("info", cmd_info, "charge, energy, eccentricity and class of an orbit")
    sp = command("sample", cmd_sample, "CSV of points along the orbit")
    sp.add_argument("--n", type=int, default=200)
    sp.add_argument("--range-cap", type=float, default=conic.RANGE_CAP,
                    help="open orbits stop at x0 <= cap / a0 (default %(default)g)")
    sp = command("integrate", cmd_integrate, "integrate the equation of motion")
    sp.add_argument("--T", type=float, default=50.0, help="time span")
    sp.add_argument("--rel-tol", type=float, default=1e-10)
    sp.add_argument("--abs-tol", type=float, default=1e-12)
    sp.add_argument("--max-steps", type=int, default=1_000_000)
    sp.add_argument("--report", default=None, help="drift report JSON path (default stderr)")
    command("canonicalize", cmd_canonicalize, "element sending the orbit to its canonical pair")
    sp = command("transport", cmd_transport, "element sending one orbit to another")
    sp.add_argument("--target", required=True, help="params JSON of the target orbit")
    sp = command("verify", cmd_verify, "run the invariant suite", needs_input=False)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--perturb", type=float, default=0.0,
                    help="add this to l1 of the validation samples (negative control)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InvalidParams, InvalidTransform, OriginPoint, ValueError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INPUT
    except (StepLimitExceeded, NearCollision) as exc:
        sys.stderr.write(f"integration failed: {exc}\n")
        return EXIT_INTEGRATOR
    except (WrongClass, SignFlip) as exc:
        sys.stderr.write(f"class error: {exc}\n")
        return EXIT_CLASS


if __name__ == "__main__":
    sys.exit(main())
