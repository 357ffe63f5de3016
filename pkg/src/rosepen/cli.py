"""Command line front end.

Subcommands wire the library end to end over a single JSON interchange
format: build (system -> Fiedler pencil), zeros (system or REP spec ->
classified zero report), verify (equivalence certificates, optionally for
every bijection), ciss, smith, and realize.

Exit codes: 0 success, 2 parse/validation error, 3 invalid sigma,
4 singular E, 5 singular pencil, 6 failed certificate.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys as _sys
from itertools import permutations

from . import io as rio
from ._linalg import EXACT, FLOAT
from .eigen import classify_zeros, pencil_determinant, solve_rep
from .equivalence import CertificateError, build_certificate
from .fiedler import Bijection, ciss, pencil_direct
from .polymat import poly_matrix_det, smith_form
from .system import SingularStateError, assemble_system_matrix, realize

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SIGMA = 3
EXIT_SINGULAR_E = 4
EXIT_SINGULAR_PENCIL = 5
EXIT_CERTIFICATE = 6

DEFAULT_MAX_M = 5


def _fail(code, message):
    print(f"rosepen: {message}", file=_sys.stderr)
    return code


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def _parse_sigma(text, m):
    try:
        sigma = Bijection.from_string(text)
    except (ValueError, TypeError) as exc:
        raise InvalidSigma(str(exc)) from exc
    if sigma.m != m:
        raise InvalidSigma(f"sigma has length {sigma.m} but the system degree is {m}")
    return sigma


class InvalidSigma(ValueError):
    pass


def cmd_build(args):
    try:
        doc = _load_json(args.input)
        sys = rio.decode_system(doc, args.mode)
    except (OSError, json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        return _fail(EXIT_PARSE, f"cannot load system: {exc}")
    try:
        if args.sigma:
            sigma = _parse_sigma(args.sigma, sys.m)
            default = False
        else:
            sigma = Bijection.first_companion_order(sys.m)
            default = True
    except InvalidSigma as exc:
        return _fail(EXIT_SIGMA, f"invalid sigma: {exc}")
    pencil = pencil_direct(sys, sigma)
    payload = rio.encode_pencil(pencil)
    payload["sigma"] = list(sigma.inverse_order)
    payload["sigma_default"] = default
    _emit(rio.dumps(payload), args.out)
    return EXIT_OK


def cmd_zeros(args):
    if args.mode == FLOAT and args.backend == "exact":
        return _fail(EXIT_PARSE, "the exact backend needs exact-mode input")
    try:
        doc = _load_json(args.input)
        kind = rio.detect_kind(doc)
        if kind == "system":
            sys = rio.decode_system(doc, args.mode)
            spec = None
        elif kind == "repspec":
            spec = rio.decode_rep_spec(doc, args.mode)
            sys = None
        else:
            raise ValueError(f"zeros expects a system or REP spec, got {kind}")
    except (OSError, json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        return _fail(EXIT_PARSE, f"cannot load input: {exc}")
    try:
        if spec is not None:
            import warnings

            with warnings.catch_warnings():
                # probe realization only for the pencil degree; solve_rep
                # will re-realize and emit any user-facing warnings itself
                warnings.simplefilter("ignore")
                m = realize(spec).m
            sigma = _parse_sigma(args.sigma, m) if args.sigma else None
            report = solve_rep(spec, sigma=sigma, backend=args.backend)
        else:
            sigma = _parse_sigma(args.sigma, sys.m) if args.sigma else None
            report = classify_zeros(sys, sigma=sigma, backend=args.backend)
    except InvalidSigma as exc:
        return _fail(EXIT_SIGMA, f"invalid sigma: {exc}")
    except SingularStateError as exc:
        return _fail(EXIT_SINGULAR_E, str(exc))
    if report.singular:
        return _fail(EXIT_SINGULAR_PENCIL, "singular pencil: spectrum undefined")
    _emit(rio.dumps(rio.encode_zero_report(report)), args.out)
    return EXIT_OK


def _verify_payload(doc, order, pencil_doc):
    """One certificate check; importable at module level for process pools."""
    sys = rio.decode_system(doc, EXACT)
    sigma = Bijection(tuple(order))
    pencil = (
        rio.decode_pencil(pencil_doc, EXACT)
        if pencil_doc is not None
        else pencil_direct(sys, sigma)
    )
    digest = hashlib.sha256(
        rio.dumps(rio.encode_pencil(pencil)).encode()
    ).hexdigest()
    entry = {
        "sigma": list(order),
        "pencil_sha256": digest,
        "residual_zero": False,
        "det_constant": None,
    }
    try:
        build_certificate(sys, sigma, pencil=pencil)
        entry["residual_zero"] = True
    except CertificateError as exc:
        entry["error"] = str(exc)
        return entry
    det_s = poly_matrix_det(assemble_system_matrix(sys))
    if not det_s.is_zero:
        q, rem = divmod(pencil_determinant(pencil), det_s)
        if rem.is_zero and q.degree == 0:
            entry["det_constant"] = rio.encode_scalar(q.coefficient(0))
    return entry


def cmd_verify(args):
    try:
        doc = _load_json(args.input)
        sys = rio.decode_system(doc, EXACT)
        pencil_doc = _load_json(args.pencil) if args.pencil else None
        if pencil_doc is not None:
            rio.decode_pencil(pencil_doc, EXACT)
    except (OSError, json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        return _fail(EXIT_PARSE, f"cannot load input: {exc}")
    if sys.m < 2:
        return _fail(EXIT_PARSE, "certificates need a system of degree m >= 2")
    max_m = int(os.environ.get("ROSEPEN_MAX_M", DEFAULT_MAX_M))
    if args.all:
        if args.pencil:
            return _fail(EXIT_PARSE, "--pencil cannot be combined with --all")
        if sys.m > max_m:
            return _fail(
                EXIT_PARSE,
                f"m={sys.m} exceeds the exhaustive-sweep bound {max_m} "
                "(override with ROSEPEN_MAX_M)",
            )
        orders = [tuple(p) for p in permutations(range(sys.m))]
    else:
        try:
            if not args.sigma:
                raise InvalidSigma("verify needs --sigma or --all")
            orders = [_parse_sigma(args.sigma, sys.m).inverse_order]
        except InvalidSigma as exc:
            return _fail(EXIT_SIGMA, f"invalid sigma: {exc}")

    payloads = [(doc, order, pencil_doc) for order in orders]
    if args.jobs > 1 and len(payloads) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_star, payloads))
    else:
        results = [_verify_payload(*p) for p in payloads]

    summary = {
        "m": sys.m,
        "results": results,
        "distinct_pencils": len({r["pencil_sha256"] for r in results}),
        "all_passed": all(r["residual_zero"] for r in results),
    }
    _emit(rio.dumps(summary), args.out)
    return EXIT_OK if summary["all_passed"] else EXIT_CERTIFICATE


def _verify_star(payload):
    return _verify_payload(*payload)


def cmd_ciss(args):
    try:
        sigma = Bijection.from_string(args.sigma)
    except (ValueError, TypeError) as exc:
        return _fail(EXIT_SIGMA, f"invalid sigma: {exc}")
    structure = ciss(sigma)
    payload = {
        "sigma": list(sigma.inverse_order),
        "m": sigma.m,
        "ciss": list(structure.pairs),
        "consecutions": structure.consecution_total,
        "inversions": structure.inversion_total,
    }
    _emit(rio.dumps(payload), args.out)
    return EXIT_OK


def cmd_smith(args):
    try:
        doc = _load_json(args.input)
        kind = rio.detect_kind(doc)
        if kind == "polymatrix":
            matrix = rio.decode_poly_matrix(doc, EXACT)
        elif kind == "system":
            matrix = assemble_system_matrix(rio.decode_system(doc, EXACT))
        else:
            raise ValueError(f"smith expects a polynomial matrix or system, got {kind}")
    except (OSError, json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        return _fail(EXIT_PARSE, f"cannot load input: {exc}")
    _emit(rio.dumps(rio.encode_smith_form(smith_form(matrix))), args.out)
    return EXIT_OK


def cmd_realize(args):
    try:
        doc = _load_json(args.input)
        spec = rio.decode_rep_spec(doc, EXACT)
    except (OSError, json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        return _fail(EXIT_PARSE, f"cannot load REP spec: {exc}")
    sys = realize(spec)
    payload = rio.encode_system(sys)
    payload["minimal"] = sys.minimal
    _emit(rio.dumps(payload), args.out)
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="rosepen",
        description="Fiedler pencils of Rosenbrock system polynomials: "
        "construction, verification, and rational eigenproblem solving.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="assemble a Fiedler pencil from a system")
    p.add_argument("--input", required=True)
    p.add_argument("--sigma", help="comma-separated product order, e.g. 1,0,2,3")
    p.add_argument("--mode", choices=(EXACT, FLOAT), default=EXACT)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("zeros", help="solve and classify the zeros of a system or REP spec")
    p.add_argument("--input", required=True)
    p.add_argument("--sigma")
    p.add_argument("--backend", choices=("exact", "numeric"), default="exact")
    p.add_argument("--mode", choices=(EXACT, FLOAT), default=EXACT)
    p.add_argument("--out")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("verify", help="build equivalence certificates")
    p.add_argument("--input", required=True)
    p.add_argument("--sigma")
    p.add_argument("--all", action="store_true", help="sweep every bijection")
    p.add_argument("--pencil", help="verify this pencil JSON instead of rebuilding")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ciss", help="consecution-inversion structure sequence")
    p.add_argument("--sigma", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ciss)

    p = sub.add_parser("smith", help="Smith form of a polynomial matrix or system matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_smith)

    p = sub.add_parser("realize", help="state-space realization of an REP spec")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_realize)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    _sys.exit(main())
