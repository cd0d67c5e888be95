"""Command-line front end: ``liegeom <command> [options]``.

Algebras come from a JSON file, from stdin (``-i -`` or no ``-i``), or from
the catalog by name. Reports are JSON on stdout or ``-o``. Exit codes:
0 success, 1 I/O or schema error, 2 validation failure, 3 search failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import numpy as np

from . import __version__, tolerances
from .algebra import LieAlgebra, profile, validate
from .catalog import NAMES, catalog
from .curvature import (
    SIGN_CONVENTION,
    MetricFrame,
    contracted_bianchi,
    first_bianchi,
    orthonormalize,
    ricci_closed_form,
    ricci_from_connection,
)
from .errors import (
    InvalidBasisChangeError,
    LiegeomError,
    SchemaError,
    SearchFailedError,
    SPDLossError,
    UnknownAlgebraError,
    ValidationError,
)
from .extension import solve_einstein_extension
from .flow import bracket_stationarity, integrate
from .hcgravity import HCParameters, check_solution, solve_parameters
from .jsonio import dumps
from .soliton import SearchConfig, detect_su2, find_negative_scalar_metric, solve_nilsoliton, soliton_project

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_SEARCH = 0, 1, 2, 3

COMMANDS = (
    "validate",
    "classify",
    "curvature",
    "soliton",
    "extend",
    "flow",
    "hc-solve",
    "hc-check",
    "search-negR",
    "detect-su2",
    "catalog",
)


class _Fail(Exception):
    def __init__(self, code: int, message: str, detail: Optional[dict] = None):
        super().__init__(message)
        self.code = code
        self.detail = detail or {}


def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or name not in tolerances.names():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE with NAME in {', '.join(tolerances.names())}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name}: {value!r} is not a number") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liegeom", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"liegeom {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE")
        if name != "catalog":
            sp.add_argument("-i", "--input", default="-", help="algebra JSON path, '-' for stdin, or a catalog name")
            sp.add_argument("--param", type=float, action="append", default=[], help="catalog parameter")
            sp.add_argument("--metric", help="JSON metric: matrix g, or {'g': ...} or {'s': ...}")
        return sp

    add("validate", "Jacobi identity check")
    add("classify", "nilpotent / solvable / semisimple / unimodular profile")
    add("curvature", "connection, Riemann, Ricci (both routes), scalar curvature")
    sp = add("soliton", "nilsoliton certificate, searching metrics if needed")
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--max-iter", type=int, default=1000)
    sp = add("extend", "Einstein rank-one solvable extension of a nilpotent algebra")
    sp.add_argument("--restarts", type=int, default=8)
    sp = add("flow", "Ricci flow of a left-invariant metric")
    sp.add_argument("--t-max", type=float, required=True)
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--normalize", default="none", help="none, unit_volume (volume), unit_bracket_norm (bracket)")
    sp.add_argument("--sample-every", type=int, default=1)
    sp.add_argument("--csv", help="write the sampled trajectory as CSV")
    add("hc-solve", "all (alpha, beta, Lambda) solving the quadratic-curvature equation")
    sp = add("hc-check", "residual of the quadratic-curvature equation at given parameters")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--lambda", dest="lambda_cc", type=float, required=True)
    sp = add("search-negR", "search for a metric of negative scalar curvature")
    sp.add_argument("--target", type=float, default=0.0, help="accept scalar curvature below this value")
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--max-iter", type=int, default=1000)
    sp = add("detect-su2", "heuristic search for an su(2) subalgebra")
    sp.add_argument("--restarts", type=int, default=64)
    sp.add_argument("--max-iter", type=int, default=1000)
    sp = add("catalog", "print a bundled algebra (or list the names)")
    sp.add_argument("--name", choices=NAMES)
    sp.add_argument("--param", type=float, action="append", default=[])
    return p


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _parse_json(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{where}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_algebra(source: str, params=()) -> LieAlgebra:
    if source != "-" and not os.path.exists(source) and source in NAMES:
        return catalog(source, params)
    if source != "-" and not os.path.exists(source):
        raise UnknownAlgebraError(f"{source!r} is neither a file nor a catalog name; known: {', '.join(NAMES)}")
    return LieAlgebra.from_json(_parse_json(_read_text(source), source))


def load_metric(path: Optional[str], n: int) -> MetricFrame:
    if path is None:
        return MetricFrame.identity(n)
    doc = _parse_json(_read_text(path), path)
    key = "g"
    if isinstance(doc, dict):
        key = "s" if "s" in doc else "g"
        if key not in doc:
            raise SchemaError(f"{path}: metric object needs field 'g' or 's'")
        doc = doc[key]
    try:
        m = np.array(doc, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{path}: field '{key}' must be a numeric matrix") from None
    if m.shape != (n, n):
        raise SchemaError(f"{path}: field '{key}' must be {n}x{n}, got shape {m.shape}")
    if key == "s":
        return MetricFrame(m)
    if np.abs(m - m.T).max() > 1e-12 * max(1.0, np.abs(m).max()):
        raise ValidationError(f"{path}: metric g is not symmetric")
    return MetricFrame.from_metric(m)


def _require_jacobi(alg: LieAlgebra) -> None:
    rep = validate(alg)
    if not rep.ok:
        raise _Fail(
            EXIT_VALIDATION,
            f"Jacobi identity fails: residual {rep.max_residual:.3e} at (i,j,k,l) = {rep.worst}",
            {"max_residual": rep.max_residual, "worst": list(rep.worst)},
        )


def _cfg(args, **extra) -> SearchConfig:
    kw = {"seed": args.seed}
    for name in ("restarts", "max_iter"):
        if getattr(args, name, None) is not None:
            kw[name] = getattr(args, name)
    kw.update(extra)
    return SearchConfig(**kw)


def _frame_json(m: MetricFrame) -> dict:
    return {"s": m.s.tolist(), "g": m.g.tolist()}


def _run(args) -> tuple[dict, Optional[str], int]:
    """Returns (report body, optional CSV text, exit code)."""
    if args.command == "catalog":
        if args.name is None:
            return {"names": list(NAMES)}, None, EXIT_OK
        alg = catalog(args.name, args.param)
        body = alg.to_json()
        body["name"] = args.name
        body["params"] = list(args.param)
        return body, None, EXIT_OK

    alg = load_algebra(args.input, args.param)
    if args.command == "validate":
        rep = validate(alg)
        body = {"ok": rep.ok, "max_residual": rep.max_residual, "worst": list(rep.worst)}
        if not rep.ok:
            body["error"] = f"Jacobi identity fails: residual {rep.max_residual:.3e} at (i,j,k,l) = {rep.worst}"
        return body, None, EXIT_OK if rep.ok else EXIT_VALIDATION

    _require_jacobi(alg)
    frame = load_metric(args.metric, alg.dim)
    ortho = orthonormalize(alg, frame)

    if args.command == "classify":
        return profile(alg).to_json(), None, EXIT_OK

    if args.command == "curvature":
        rep = ricci_closed_form(ortho)
        body = rep.to_json()
        body["ricci_from_connection"] = ricci_from_connection(ortho).tolist()
        body["first_bianchi"] = first_bianchi(ortho)
        body["contracted_bianchi"] = contracted_bianchi(ortho)
        body["metric"] = _frame_json(frame)
        return body, None, EXIT_OK

    if args.command == "soliton":
        cert = soliton_project(ortho)
        found = frame
        if not cert.verified:
            try:
                m, cert = solve_nilsoliton(ortho, _cfg(args))
            except SearchFailedError as exc:
                best = exc.best[1].to_json() if exc.best else None
                raise _Fail(EXIT_SEARCH, str(exc), {"best": best}) from None
            # the search frame lives on top of the input frame: g_total = (m s)^T (m s)
            found = MetricFrame(m.s @ frame.s)
        return {"certificate": cert.to_json(), "metric": _frame_json(found)}, None, EXIT_OK

    if args.command == "extend":
        ext = solve_einstein_extension(ortho, _cfg(args))
        return ext.to_json(), None, EXIT_OK

    if args.command == "flow":
        traj = integrate(alg, frame.g, args.t_max, args.dt, args.normalize, args.sample_every)
        body = traj.summary()
        body["bracket_stationarity"] = bracket_stationarity(alg, traj)
        body["t_max"], body["dt"] = args.t_max, args.dt
        return body, traj.to_csv(), EXIT_OK

    if args.command == "hc-solve":
        return solve_parameters(ortho).to_json(), None, EXIT_OK

    if args.command == "hc-check":
        params = HCParameters(args.alpha, args.beta, args.lambda_cc)
        body = check_solution(ortho, params).to_json()
        body["parameters"] = {"alpha": params.alpha, "beta": params.beta, "lambda_cc": params.lambda_cc}
        return body, None, EXIT_OK

    if args.command == "search-negR":
        try:
            m, scal = find_negative_scalar_metric(ortho, _cfg(args), target=args.target)
        except SearchFailedError as exc:
            raise _Fail(EXIT_SEARCH, str(exc), {"best_scalar": exc.residual}) from None
        return {"scalar": scal, "target": args.target, "metric": _frame_json(MetricFrame(m.s @ frame.s))}, None, 0

    if args.command == "detect-su2":
        return detect_su2(ortho, _cfg(args)).to_json(), None, EXIT_OK

    raise AssertionError(args.command)


def _envelope(args, body: dict, status: str, message: Optional[str] = None) -> dict:
    doc = {
        "tool": "liegeom",
        "version": __version__,
        "command": args.command,
        "seed": args.seed,
        "sign_convention": SIGN_CONVENTION,
        "status": status,
    }
    if message is not None:
        doc["error"] = message
    doc.update(body)
    return doc


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = dict(args.tol)
    code, csv_text = EXIT_OK, None
    try:
        with tolerances.override(**overrides):
            body, csv_text, code = _run(args)
        doc = _envelope(args, body, "ok" if code == EXIT_OK else "failed")
    except _Fail as exc:
        code, doc = exc.code, _envelope(args, exc.detail, "failed", str(exc))
    except (ValidationError, InvalidBasisChangeError) as exc:
        code, doc = EXIT_VALIDATION, _envelope(args, {}, "failed", str(exc))
    except (SearchFailedError, SPDLossError) as exc:
        code, doc = EXIT_SEARCH, _envelope(args, {}, "failed", str(exc))
    except (SchemaError, UnknownAlgebraError, OSError, LiegeomError, ValueError) as exc:
        print(f"liegeom: error: {exc}", file=sys.stderr)
        return EXIT_IO
    if code != EXIT_OK:
        print(f"liegeom: {doc.get('error', 'failed')}", file=sys.stderr)
    try:
        _write(getattr(args, "output", None), dumps(doc))
        if csv_text is not None and getattr(args, "csv", None):
            _write(args.csv, csv_text)
    except OSError as exc:
        print(f"liegeom: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
