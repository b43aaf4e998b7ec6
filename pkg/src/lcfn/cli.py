"""``lcfn``: coefficient tables, polynomials, generalised powers and LC-function values."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import appell, lcfun, verify
from .errors import DomainError, LcfnError, ToleranceError
from .genpower import PowerConfig, gen_power
from .numerics import QuadratureSpec
from .series import DEFAULT_ORDER, NUMERIC_ORDER, as_rational, builtin

__all__ = ["main", "build_parser", "to_jsonable"]

ORDER_ENV = "LCFN_DEFAULT_ORDER"
VERBS = ("coeffs", "poly", "power", "lc", "special", "verify", "table")


class UsageError(Exception):
    exit_code = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"expected re,im: {text!r}")
    try:
        re_ = float(parts[0])
        im = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected re,im: {text!r}") from exc
    if not (math.isfinite(re_) and math.isfinite(im)):
        raise argparse.ArgumentTypeError(f"non-finite value: {text!r}")
    return complex(re_, im)


def _grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError) as exc:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}") from exc
    if count < 1 or len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}")
    return lo, hi, count


def default_order() -> int:
    raw = os.environ.get(ORDER_ENV)
    if raw is None:
        return DEFAULT_ORDER
    try:
        value = int(raw)
    except ValueError as exc:
        raise UsageError(f"{ORDER_ENV} must be an integer, got {raw!r}") from exc
    if value < 0:
        raise UsageError(f"{ORDER_ENV} must be non-negative")
    return value


_NEGATIVE_VALUE = re.compile(r"^-[\d.]")
_VALUE_OPTIONS = frozenset({"--a", "--c", "--x", "--s", "--z", "--grid", "--im", "--n", "--m", "--tol", "--seed", "--order"})


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--z -0.5,1`` as ``--z=-0.5,1`` so argparse does not read it as a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and _NEGATIVE_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lcfn", description=__doc__)
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("--fn", choices=("beta", "beta_a", "exp_c", "file"))
    parser.add_argument("--a", type=_rational, default=Fraction(1))
    parser.add_argument("--c", type=_rational, default=Fraction(0))
    parser.add_argument("--file")
    parser.add_argument("--n", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--x", type=_rational)
    parser.add_argument("--s", type=_complex, help="point s as re,im (power)")
    parser.add_argument("--z", type=_complex, help="exponent or argument z as re,im")
    parser.add_argument("--grid", type=_grid, help="real parts start:stop:count (table)")
    parser.add_argument("--im", type=float, default=0.0, help="imaginary part for table rows")
    parser.add_argument("--order", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--suite", choices=tuple(verify.SUITES) + ("all",), default="all")
    return parser


# --------------------------------------------------------------------------
# Serialisation
# --------------------------------------------------------------------------


def _rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def to_jsonable(value):
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, Fraction):
        return _rat(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialise {type(value).__name__}")


def _scalar_cell(value) -> list[str]:
    if isinstance(value, Fraction):
        return [_rat(value)]
    if isinstance(value, complex):
        return [repr(value.real), repr(value.imag)]
    return [str(value)]


def _emit(payload: dict, rows: list[list] | None, header: list[str] | None, fmt: str, out) -> None:
    if fmt == "json" or rows is None:
        json.dump(to_jsonable(payload), out, sort_keys=True)
        out.write("\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    out.write(buf.getvalue())


# --------------------------------------------------------------------------
# Verbs
# --------------------------------------------------------------------------


def _system(args, order: int) -> appell.AppellSystem:
    if args.fn is None:
        raise UsageError("--fn is required")
    if args.fn == "file":
        if not args.file:
            raise UsageError("--fn file needs --file")
        return appell.AppellSystem(builtin("coeff_file", path=args.file))
    if args.file:
        raise UsageError("--file only goes with --fn file")
    params = {"beta_a": {"a": args.a}, "exp_c": {"c": args.c}}.get(args.fn, {})
    return appell.system(args.fn, order, **params)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for {args.verb}")


def _order(args) -> int:
    order = args.order if args.order is not None else default_order()
    if order < 0:
        raise UsageError("--order must be non-negative")
    return order


def cmd_coeffs(args, out):
    sys_ = _system(args, _order(args))
    c = list(sys_.c_numbers.coeffs)
    p = list(sys_.p_numbers.coeffs)
    payload = {"function": sys_.f.name, "order": sys_.order, "c_numbers": c, "p_numbers": p}
    rows = [[n, _rat(cn), _rat(pn)] for n, (cn, pn) in enumerate(zip(c, p))]
    _emit(payload, rows, ["n", "c", "p"], args.format, out)


def cmd_poly(args, out):
    _require(args, "n")
    sys_ = _system(args, max(_order(args), args.n))
    cp = appell.c_poly(sys_, args.n)
    pp = appell.p_poly(sys_, args.n)
    payload = {"function": sys_.f.name, "n": args.n, "c_poly": list(cp.coeffs), "p_poly": list(pp.coeffs)}
    if args.x is not None:
        payload["x"] = args.x
        payload["c_value"] = cp(args.x)
        payload["p_value"] = pp(args.x)
    width = max(len(cp.coeffs), len(pp.coeffs))
    pad = lambda cs: list(cs) + [Fraction(0)] * (width - len(cs))  # noqa: E731
    rows = [[k, _rat(a), _rat(b)] for k, (a, b) in enumerate(zip(pad(cp.coeffs), pad(pp.coeffs)))]
    _emit(payload, rows, ["power", "c_coeff", "p_coeff"], args.format, out)


def _numeric_system(args) -> appell.AppellSystem:
    return _system(args, max(_order(args), NUMERIC_ORDER) if args.fn != "file" else 0)


def cmd_power(args, out):
    _require(args, "s", "z")
    sys_ = _numeric_system(args)
    cfg = PowerConfig(tol=args.tol) if args.tol else None
    value = gen_power(sys_, args.s, args.z, cfg)
    payload = {"function": sys_.f.name, "s": args.s, "z": args.z, "value": value}
    _emit(payload, [[*_scalar_cell(args.s), *_scalar_cell(args.z), *_scalar_cell(value)]],
          ["s_re", "s_im", "z_re", "z_im", "re", "im"], args.format, out)


def _contour(args) -> lcfun.ContourSpec:
    if args.tol:
        return lcfun.ContourSpec(quad=QuadratureSpec(tol=args.tol))
    return lcfun.ContourSpec()


def _lc_value(sys_, z, spec) -> lcfun.LcEvaluation:
    return lcfun.lc_continued(sys_, z, spec)


def cmd_lc(args, out):
    _require(args, "z")
    sys_ = _numeric_system(args)
    ev = _lc_value(sys_, args.z, _contour(args))
    payload = {
        "function": sys_.f.name,
        "z": args.z,
        "value": ev.value,
        "method": ev.method,
        "error_estimate": ev.error_estimate,
    }
    _emit(payload, [[*_scalar_cell(args.z), *_scalar_cell(ev.value), ev.method, repr(ev.error_estimate)]],
          ["z_re", "z_im", "re", "im", "method", "error_estimate"], args.format, out)


def cmd_special(args, out):
    _require(args, "n")
    if args.n < 0:
        raise DomainError("--n must be non-negative")
    sys_ = _system(args, max(_order(args), args.n + 1))
    ev = lcfun.lc_special_value(sys_, args.n)
    payload = {"function": sys_.f.name, "n": args.n, "value": ev.exact}
    _emit(payload, [[args.n, _rat(ev.exact)]], ["n", "value"], args.format, out)


def cmd_table(args, out):
    _require(args, "grid")
    lo, hi, count = args.grid
    sys_ = _numeric_system(args)
    spec = _contour(args)
    points = np.linspace(lo, hi, count) if count > 1 else np.array([lo])
    rows, entries = [], []
    for re_ in points:
        z = complex(float(re_), args.im)
        try:
            ev = _lc_value(sys_, z, spec)
            entries.append({"z": z, "value": ev.value, "method": ev.method, "error_estimate": ev.error_estimate})
            rows.append([*_scalar_cell(z), *_scalar_cell(ev.value), ev.method, repr(ev.error_estimate)])
        except DomainError as exc:
            entries.append({"z": z, "value": None, "method": "error", "error": str(exc)})
            rows.append([*_scalar_cell(z), "", "", "error", ""])
    payload = {"function": sys_.f.name, "rows": entries}
    _emit(payload, rows, ["z_re", "z_im", "re", "im", "method", "error_estimate"], args.format, out)


def cmd_verify(args, out):
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    if args.seed is None and any(n in verify.RANDOMIZED for n in names):
        raise UsageError("--seed is required for randomized suites")
    reports = [verify.run_suite(n, args.seed) for n in names]
    payload = {
        "seed": args.seed,
        "passed": all(r.passed for r in reports),
        "suites": [
            {
                "suite": r.suite,
                "passed": r.passed,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in r.checks],
            }
            for r in reports
        ],
    }
    rows = [[r.suite, c.name, "pass" if c.passed else "fail", c.detail] for r in reports for c in r.checks]
    _emit(payload, rows, ["suite", "check", "status", "detail"], args.format, out)
    if not payload["passed"]:
        raise ToleranceError("verification failed")


COMMANDS = {
    "coeffs": cmd_coeffs,
    "poly": cmd_poly,
    "power": cmd_power,
    "lc": cmd_lc,
    "special": cmd_special,
    "verify": cmd_verify,
    "table": cmd_table,
}


def _error(kind: str, message: str, code: int, err, **extra) -> int:
    doc = {"error": kind, "message": message, "exit_code": code}
    doc.update(to_jsonable(extra))
    json.dump(doc, err, sort_keys=True)
    err.write("\n")
    return code


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        argv = list(sys.argv[1:] if argv is None else argv)
        args = build_parser().parse_args(_attach_negative_values(argv))
        COMMANDS[args.verb](args, out)
    except UsageError as exc:
        return _error("usage", str(exc), 1, err)
    except LcfnError as exc:
        extra = {}
        if getattr(exc, "residue", None) is not None:
            extra["residue"] = exc.residue
        return _error(type(exc).__name__, str(exc), exc.exit_code, err, **extra)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
