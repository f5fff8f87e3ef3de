"""Command-line front end; every command prints a single JSON document.

Exit codes: 0 success, 1 a verification failed, 2 input or usage error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import catalog as cat
from .flow import FlowPreconditionError, flow_to_level, flowed
from .hyperkahler import LevelSpec, moment_maps
from .involutions import (SignatureError, SpecError, apply, brane_type, descent_report,
                          is_involution)
from .monad import ADHMError, P2Point, PointError, adhm_residual, monad_at, sample_points
from .orbits import NotStableError, is_identity, is_moduli_fixed
from .quiver import InvalidGroupElement, QuiverError, ShapeError
from .serialization import (InputError, decode_representation, decode_spec, dumps,
                            encode_group, encode_moments, encode_representation,
                            load_json)
from .stability import stability_report
from .tangent import (NotExactFixedPoint, TangentPreconditionError, default_level,
                      fixed_subspace, quotient_tangent)

USAGE_ERRORS = (InputError, QuiverError, ShapeError, SpecError, InvalidGroupElement, ADHMError,
                PointError, NotStableError, FlowPreconditionError, TangentPreconditionError,
                SignatureError, cat.CatalogError)


def _load_rep(path):
    if path is None:
        raise InputError("--input is required")
    data = load_json(path)
    return data, decode_representation(data)


def _load_spec(args, data=None, dims=None):
    if args.spec is not None:
        return decode_spec(load_json(args.spec), dims)
    if data is not None and "spec" in data:
        return decode_spec(data["spec"], dims)
    raise InputError("--spec is required")


def _norms(values):
    return {v: float(np.linalg.norm(M)) for v, M in values.items()}


def cmd_check(args):
    data, X = _load_rep(args.input)
    mv = moment_maps(X)
    report = {"valid": True,
              "moment_norms": {k: _norms(getattr(mv, k)) for k in ("mu1", "mu2", "mu3", "muC")},
              "stability": stability_report(X)}
    if X.quiver.is_jordan:
        report["adhm_residual"] = float(np.linalg.norm(adhm_residual(X)))
    if args.verbose_moments:
        report["moments"] = encode_moments(mv)
    ok = True
    expected = data.get("expected")
    if expected is not None and "spec" in data:
        spec = decode_spec(data["spec"], X.dims)
        checks = {}
        if "adhm_zero" in expected:
            checks["adhm_zero"] = (report.get("adhm_residual", 0.0) <= 1e-10) == expected["adhm_zero"]
        if "regular" in expected:
            checks["regular"] = report["stability"]["regular"] == expected["regular"]
        if "brane_type" in expected:
            checks["brane_type"] = brane_type(spec) == expected["brane_type"]
        if "fixed" in expected:
            w = is_moduli_fixed(spec, X) if report["stability"]["stable"] else None
            checks["fixed"] = (w is not None and is_identity(w)) == expected["fixed"]
        report["expected_checks"] = checks
        ok = all(checks.values())
    report["ok"] = ok
    return report, 0 if ok else 1


def cmd_involution(args):
    if args.action == "classify":
        spec = _load_spec(args)
        sig = spec.letter_signature()
        return {"word": spec.letters, "signature": list(sig), "brane_type": brane_type(sig)}, 0
    data, X = _load_rep(args.input)
    spec = _load_spec(args, data, X.dims)
    if args.action == "apply":
        return encode_representation(apply(spec, X)), 0
    if args.action == "check":
        ok, report = is_involution(spec, X.quiver, X.dims, trials=args.samples or 3, seed=args.seed)
        report["is_involution"] = bool(ok)
        return report, 0 if ok else 1
    if args.action == "descent":
        return descent_report(spec, X), 0
    if args.action == "fixed":
        w = is_moduli_fixed(spec, X)
        out = {"fixed": w is not None, "exact": bool(w is not None and is_identity(w))}
        if w is not None:
            out["witness"] = encode_group(w)
        return out, 0 if w is not None else 1
    raise InputError(f"unknown action {args.action!r}")


def cmd_stability(args):
    _, X = _load_rep(args.input)
    return stability_report(X), 0


def cmd_flow(args):
    data, X = _load_rep(args.input)
    level = LevelSpec(0.5 if args.level is None else args.level)
    res = flow_to_level(X, level, tol=args.tol or 1e-10, max_iters=args.max_iters, track_complex=True)
    out = res.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(encode_representation(flowed(X, res)), args.pretty))
    return out, 0 if res.converged else 1


def cmd_tangent(args):
    data, X = _load_rep(args.input)
    spec = _load_spec(args, data, X.dims)
    level = default_level(spec) if args.level is None else args.level
    res = flow_to_level(X, level, tol=args.tol or 1e-10, max_iters=args.max_iters, symmetrize_for=spec)
    Y = flowed(X, res)
    frame = quotient_tangent(Y, level)
    try:
        fixed = fixed_subspace(spec, Y, frame)
    except NotExactFixedPoint as exc:
        return {"ambient_real_dim": frame.ambient_dim, "quotient_real_dim": frame.quotient_dim,
                "fixed_real_dim": None, "brane_type": brane_type(spec), "error": str(exc)}, 1
    return {"ambient_real_dim": frame.ambient_dim, "quotient_real_dim": frame.quotient_dim,
            "fixed_real_dim": fixed.real_dim, "brane_type": fixed.type_tag, "level": level}, 0


def _parse_point(text):
    try:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError
        coords = []
        for p in parts:
            re, im = p.split(",")
            coords.append(complex(float(re), float(im)))
        return P2Point.of(coords)
    except ValueError as exc:
        raise InputError("--point expects re,im:re,im:re,im") from exc


def _monad_record(X, p):
    ev = monad_at(X, p)
    return {"point": [[z.real, z.imag] for z in p.vector.tolist()],
            "fiber_dim": ev.fiber_dim, "alpha_rank": ev.alpha_rank, "beta_rank": ev.beta_rank}


def cmd_monad(args):
    _, X = _load_rep(args.input)
    residual = float(np.linalg.norm(adhm_residual(X)))
    if residual > 1e-8 * max(1.0, X.norm() ** 2):
        raise ADHMError("input does not satisfy the ADHM equation")
    if args.point:
        return _monad_record(X, _parse_point(args.point)), 0
    pts = sample_points(args.samples or 20, args.seed, include_special=False)
    return {"samples": [_monad_record(X, p) for p in pts]}, 0


def cmd_catalog(args):
    entry = cat.build(args.name, args.k or 1, args.seed)
    if entry is None:
        return {"name": args.name, "found": False}, 1
    bundle = entry.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(bundle, args.pretty))
        return {"name": entry.name, "found": True, "out": args.out,
                "dims": {"V": entry.X.dims.V, "W": entry.X.dims.W}}, 0
    return bundle, 0


def build_parser():
    p = argparse.ArgumentParser(prog="quiverbranes", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input")
    common.add_argument("--spec")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float)
    common.add_argument("--level", type=float)
    common.add_argument("--samples", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--out")
    common.add_argument("--pretty", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("check", parents=[common])
    s.add_argument("--verbose-moments", action="store_true")
    s = sub.add_parser("involution", parents=[common])
    s.add_argument("--action", choices=["classify", "apply", "check", "descent", "fixed"], default="classify")
    sub.add_parser("stability", parents=[common])
    s = sub.add_parser("tangent", parents=[common])
    s.add_argument("--max-iters", type=int, default=10_000)
    s = sub.add_parser("flow", parents=[common])
    s.add_argument("--max-iters", type=int, default=10_000)
    s = sub.add_parser("monad", parents=[common])
    s.add_argument("--point")
    s = sub.add_parser("catalog", parents=[common])
    s.add_argument("--name", choices=list(cat.NAMES), required=True)
    return p


COMMANDS = {"check": cmd_check, "involution": cmd_involution, "stability": cmd_stability,
            "tangent": cmd_tangent, "flow": cmd_flow, "monad": cmd_monad, "catalog": cmd_catalog}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = COMMANDS[args.command](args)
    except USAGE_ERRORS as exc:
        report, code = {"error": type(exc).__name__, "message": str(exc)}, 2
    print(dumps(report, args.pretty))
    return code


if __name__ == "__main__":
    sys.exit(main())
