"""``asymtto`` command-line interface: one JSON request in, one JSON document out.

Usage::

    asymtto COMMAND [FILE] [--tol-membership X] [--tol-rank X] [--grid N] [--seed S]

The payload is read from ``FILE`` (or standard input when omitted or
``-``).  Exit codes: 0 success, 1 a ``check``/``verify`` that did not pass,
2 malformed input, 3 numerical failure.  Errors are reported on standard
error as ``{"error": {"type": ..., "message": ..., "exit_code": ...}}``.
"""
from __future__ import annotations

import argparse
import json
import sys

import jsonschema
import numpy as np

from . import atto, jsonio, oracle
from .blaschke import BlaschkeProduct
from .errors import InputError, NumericalError
from .modelspace import BasisSpec, clark_system, gram
from .numerics import DEFAULT_TOL, ToleranceConfig
from .verify import verify_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2, 3

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_COMPLEX_LIST = {"type": "array", "items": _COMPLEX}
_PRODUCT = {
    "type": "object",
    "properties": {"zeros": {**_COMPLEX_LIST, "minItems": 1}},
    "required": ["zeros"],
}
_BASIS = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["kernel", "conjugate_kernel", "clark", "modified_clark"]},
        "lambda": _COMPLEX,
    },
    "required": ["kind"],
}
_ENTRY = {"anyOf": [_COMPLEX, {"type": "null"}]}
_MATRIX = {
    "type": "object",
    "properties": {
        "alpha": _PRODUCT,
        "beta": _PRODUCT,
        "basis_in": _BASIS,
        "basis_out": _BASIS,
        "l": {"type": ["integer", "null"], "minimum": 0},
        "entries": {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _ENTRY}},
    },
    "required": ["alpha", "beta", "basis_in", "basis_out", "entries"],
}
_PAIR = {"alpha": _PRODUCT, "beta": _PRODUCT}

SCHEMAS = {
    "clark": {
        "type": "object",
        "properties": {"alpha": _PRODUCT, "lambda": _COMPLEX},
        "required": ["alpha"],
    },
    "matrix": {
        "type": "object",
        "properties": {
            **_PAIR,
            "basis_in": _BASIS,
            "basis_out": _BASIS,
            "symbol": {
                "type": "object",
                "properties": {"chi": _COMPLEX_LIST, "psi": _COMPLEX_LIST},
                "required": ["chi", "psi"],
            },
            "boundary_combo": {
                "type": "object",
                "properties": {"points": _COMPLEX_LIST, "coeffs": _COMPLEX_LIST},
                "required": ["points", "coeffs"],
            },
            "rank_one": {
                "type": "object",
                "properties": {"kind": {"enum": list(atto.RANK_ONE_KINDS)}, "w": _COMPLEX},
                "required": ["kind", "w"],
            },
        },
        "required": ["alpha", "beta", "basis_in", "basis_out"],
        "oneOf": [{"required": ["symbol"]}, {"required": ["boundary_combo"]}, {"required": ["rank_one"]}],
    },
    "check": _MATRIX,
    "complete": {
        "type": "object",
        "properties": {
            **_MATRIX["properties"],
            "pivot": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
            "orientation": {"enum": ["row", "col"]},
        },
        "required": _MATRIX["required"],
    },
    "dim": {
        "type": "object",
        "properties": {**_PAIR, "points": _COMPLEX_LIST},
        "required": ["alpha", "beta"],
    },
    "verify": {
        "type": "object",
        "properties": {
            **_PAIR,
            "trials": {"type": "integer", "minimum": 1},
            "max_degree": {"type": "integer", "minimum": 1},
        },
    },
    "gram": {
        "type": "object",
        "properties": {"alpha": _PRODUCT, "basis": _BASIS},
        "required": ["alpha", "basis"],
    },
}


def _complex_list(obj):
    return np.array([jsonio.dec(v) for v in obj], dtype=complex)


def _cmd_clark(payload, cfg, args):
    alpha = BlaschkeProduct.from_json(payload["alpha"])
    lam = jsonio.dec(payload.get("lambda", [1.0, 0.0]))
    return clark_system(alpha, lam, cfg).to_json(), EXIT_OK


def _cmd_matrix(payload, cfg, args):
    alpha = BlaschkeProduct.from_json(payload["alpha"])
    beta = BlaschkeProduct.from_json(payload["beta"])
    bin_ = BasisSpec.from_json(payload["basis_in"])
    bout = BasisSpec.from_json(payload["basis_out"])
    if "symbol" in payload:
        c = _complex_list(payload["symbol"]["chi"])
        d = _complex_list(payload["symbol"]["psi"])
        if len(c) != alpha.degree or len(d) != beta.degree:
            raise InputError("symbol coefficient counts must match the degrees of alpha and beta")
        M = atto.matrix_from_symbol(atto.SymbolPair.from_coeffs(alpha, beta, c, d), bin_, bout, cfg)
    elif "boundary_combo" in payload:
        combo = atto.BoundaryCombo(
            _complex_list(payload["boundary_combo"]["points"]), _complex_list(payload["boundary_combo"]["coeffs"])
        )
        M = atto.matrix_from_boundary_combo(alpha, beta, combo, bin_, bout, cfg)
    else:
        r1 = payload["rank_one"]
        M = atto.rank_one_matrix(alpha, beta, jsonio.dec(r1["w"]), r1["kind"], bin_, bout, cfg)
    return M.to_json(), EXIT_OK


def _cmd_check(payload, cfg, args):
    M = atto.AttoMatrix.from_json(payload)
    if not np.all(np.isfinite(M.entries)):
        raise InputError("check needs every entry; use 'complete' for partial matrices")
    res = atto.membership_check(M, cfg)
    return res.to_json(), EXIT_OK if res.is_member else EXIT_FAIL


def _cmd_complete(payload, cfg, args):
    alpha = BlaschkeProduct.from_json(payload["alpha"])
    beta = BlaschkeProduct.from_json(payload["beta"])
    M = atto.complete_matrix(
        jsonio.dec_matrix(payload["entries"]),
        alpha,
        beta,
        BasisSpec.from_json(payload["basis_in"]),
        BasisSpec.from_json(payload["basis_out"]),
        l=payload.get("l"),
        pivot=tuple(payload.get("pivot", (0, 0))),
        orientation=payload.get("orientation", "row"),
        cfg=cfg,
    )
    return M.to_json(), EXIT_OK


def _cmd_dim(payload, cfg, args):
    alpha = BlaschkeProduct.from_json(payload["alpha"])
    beta = BlaschkeProduct.from_json(payload["beta"])
    m, n = alpha.degree, beta.degree
    if "points" in payload:
        pts = _complex_list(payload["points"])
    else:
        pts = atto.default_trial_points(alpha, beta, m + n + 2, np.random.default_rng(args.seed), cfg=cfg)
    out = {"rank": atto.dimension_estimate(alpha, beta, pts, cfg), "expected": m + n - 1}
    sub = atto.subspace_dims(alpha, beta, cfg)
    out["subspace_dims"] = {
        "analytic": sub["dim_analytic"],
        "coanalytic": sub["dim_coanalytic"],
        "intersection": sub["dim_intersection"],
    }
    return out, EXIT_OK


def _cmd_verify(payload, cfg, args):
    alpha = BlaschkeProduct.from_json(payload["alpha"]) if "alpha" in payload else None
    beta = BlaschkeProduct.from_json(payload["beta"]) if "beta" in payload else None
    rep = verify_report(
        payload.get("trials", 25),
        args.seed,
        alpha,
        beta,
        max_degree=payload.get("max_degree", 4),
        cfg=cfg,
        N=args.grid,
    )
    return rep, EXIT_OK if rep["all_pass"] else EXIT_FAIL


def _cmd_gram(payload, cfg, args):
    alpha = BlaschkeProduct.from_json(payload["alpha"])
    G = gram(alpha, BasisSpec.from_json(payload["basis"]), cfg)
    return {"gram": jsonio.enc(G), "condition_number": float(np.linalg.cond(G))}, EXIT_OK


COMMANDS = {
    "clark": _cmd_clark,
    "matrix": _cmd_matrix,
    "check": _cmd_check,
    "complete": _cmd_complete,
    "dim": _cmd_dim,
    "verify": _cmd_verify,
    "gram": _cmd_gram,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="asymtto", description="Asymmetric truncated Toeplitz operator toolkit (JSON in, JSON out).")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("input", nargs="?", default="-", help="payload file (default: standard input)")
    p.add_argument("--tol-membership", type=float, default=DEFAULT_TOL.membership_rel)
    p.add_argument("--tol-rank", type=float, default=DEFAULT_TOL.rank_rel)
    p.add_argument("--grid", type=int, default=oracle.DEFAULT_N, help="oracle grid size (power of two)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json"], default="json")
    return p


def _read_payload(path):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _error(exc, code, stream):
    doc = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
    print(json.dumps(doc, sort_keys=True), file=stream)
    return code


def run(argv=None, stdout=None, stderr=None) -> int:
    """Execute one request and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.grid < 2 or args.grid & (args.grid - 1):
            raise InputError("--grid must be a power of two")
        cfg = ToleranceConfig(membership_rel=args.tol_membership, rank_rel=args.tol_rank)
        payload = _read_payload(args.input)
        try:
            jsonschema.validate(payload, SCHEMAS[args.command])
        except jsonschema.ValidationError as exc:
            raise InputError(f"payload does not match the {args.command} schema: {exc.message}") from exc
        doc, code = COMMANDS[args.command](payload, cfg, args)
    except (InputError, ValueError) as exc:
        return _error(exc, EXIT_INPUT, stderr)
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _error(exc, EXIT_NUMERICAL, stderr)
    print(json.dumps(doc, sort_keys=True, indent=2), file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
