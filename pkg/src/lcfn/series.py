"""Truncated exponential generating functions and the generating-function registry.

An :class:`EgfSeries` stores ``c_0 .. c_N`` for ``f(t) = sum c_n t**n / n!``.
Two coefficient fields are supported: ``"exact"`` (``fractions.Fraction``)
and ``"approx"`` (Python ``complex``).  Everything is immutable.
"""

from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import (
    CoefficientFileError,
    DomainError,
    FieldMismatchError,
    UnknownFunctionError,
)

__all__ = [
    "EXACT",
    "APPROX",
    "DEFAULT_ORDER",
    "NUMERIC_ORDER",
    "EgfSeries",
    "GenFunction",
    "ValidationReport",
    "as_complex",
    "as_rational",
    "egf_product",
    "egf_scale_arg",
    "egf_underline",
    "egf_exp",
    "egf_expm1_over_t",
    "p_series",
    "f_alpha",
    "underline",
    "gf_difference",
    "bernoulli_numbers",
    "builtin",
    "load_coeff_file",
    "dump_coeff_file",
    "validate_closed_form",
]

EXACT = "exact"
APPROX = "approx"
DEFAULT_ORDER = 32
# order used when a system feeds the floating-point evaluators
NUMERIC_ORDER = 200

Scalar = Union[Fraction, complex]
Evaluator = Callable[[np.ndarray], np.ndarray]


def as_complex(value) -> complex:
    """Coerce to ``complex``, rejecting NaN and infinities."""
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite complex value {value!r}")
    return z


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to ``Fraction``.

    Floats are refused: the exact layer must not inherit binary rounding.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _is_exact_scalar(value) -> bool:
    return isinstance(value, (Fraction, numbers.Integral)) and not isinstance(value, bool)


@dataclass(frozen=True)
class EgfSeries:
    field: str
    coeffs: tuple

    def __post_init__(self):
        if self.field not in (EXACT, APPROX):
            raise ValueError(f"unknown field {self.field!r}")
        if not self.coeffs:
            raise ValueError("an EGF series needs at least one coefficient")
        if self.field == EXACT:
            coeffs = tuple(as_rational(c) for c in self.coeffs)
        else:
            coeffs = tuple(as_complex(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def exact(cls, coeffs: Iterable) -> "EgfSeries":
        return cls(EXACT, tuple(coeffs))

    @classmethod
    def approx(cls, coeffs: Iterable) -> "EgfSeries":
        return cls(APPROX, tuple(coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return self.field == EXACT

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> "EgfSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return EgfSeries(self.field, self.coeffs[: order + 1])

    def to_approx(self) -> "EgfSeries":
        if self.field == APPROX:
            return self
        return EgfSeries(APPROX, tuple(complex(float(c)) for c in self.coeffs))

    def ordinary(self) -> np.ndarray:
        """Coefficients ``c_n / n!`` of the ordinary power series, as complex."""
        out = np.zeros(len(self.coeffs), dtype=complex)
        fact = 1
        for n, c in enumerate(self.coeffs):
            if n:
                fact *= n
            if self.field == EXACT:
                out[n] = float(c / fact)
            elif c != 0:
                # log domain: n! overflows a double past n = 170
                out[n] = (c / abs(c)) * math.exp(math.log(abs(c)) - math.lgamma(n + 1))
        return out

    def evaluate(self, t):
        """Partial sum ``sum_{n<=N} c_n t**n / n!`` (Horner)."""
        t = np.asarray(t, dtype=complex)
        a = self.ordinary()
        acc = np.full(t.shape, a[-1], dtype=complex)
        for c in a[-2::-1]:
            acc = acc * t + c
        return acc


def _same_field(a: EgfSeries, b: EgfSeries) -> None:
    if a.field != b.field:
        raise FieldMismatchError(f"cannot combine {a.field} and {b.field} series")


def egf_product(a: EgfSeries, b: EgfSeries) -> EgfSeries:
    """Binomial convolution: the EGF of the product of the two functions."""
    _same_field(a, b)
    order = min(a.order, b.order)
    out = []
    for n in range(order + 1):
        if a.is_exact:
            acc = sum((math.comb(n, k) * a[k] * b[n - k] for k in range(n + 1)), Fraction(0))
        else:
            acc = sum(math.comb(n, k) * a[k] * b[n - k] for k in range(n + 1))
        out.append(acc)
    return EgfSeries(a.field, tuple(out))


def egf_scale_arg(f: EgfSeries, alpha) -> EgfSeries:
    """Series of ``f(alpha t)``: coefficient ``n`` is multiplied by ``alpha**n``.

    A rational ``alpha`` keeps an exact series exact; anything else moves
    the result to the approximate field.
    """
    if alpha == 0:
        raise DomainError("the scale factor must be non-zero")
    if f.is_exact and _is_exact_scalar(alpha):
        alpha = Fraction(alpha)
        return EgfSeries(EXACT, tuple(c * alpha**n for n, c in enumerate(f.coeffs)))
    alpha = as_complex(alpha)
    g = f.to_approx()
    out, power = [], 1 + 0j
    for c in g.coeffs:
        out.append(c * power)
        power *= alpha
    return EgfSeries(APPROX, tuple(out))


def egf_exp(c, order: int, field: str = EXACT) -> EgfSeries:
    """EGF of ``exp(c t)``, i.e. coefficients ``c**n``."""
    if field == EXACT:
        c = as_rational(c)
        return EgfSeries(EXACT, tuple(c**n for n in range(order + 1)))
    c = as_complex(c)
    return EgfSeries(APPROX, tuple(c**n for n in range(order + 1)))


def egf_expm1_over_t(order: int, field: str = EXACT) -> EgfSeries:
    # (e^t - 1)/t = sum t^n / (n+1)!, so the EGF coefficients are 1/(n+1)
    coeffs = tuple(Fraction(1, n + 1) for n in range(order + 1))
    s = EgfSeries(EXACT, coeffs)
    return s if field == EXACT else s.to_approx()


def egf_underline(f: EgfSeries) -> EgfSeries:
    """Series of ``exp(-t) f(-t)``; applying it twice gives ``f`` back."""
    return egf_product(egf_exp(-1, f.order, f.field), egf_scale_arg(f, -1))


def p_series(f: EgfSeries) -> EgfSeries:
    """P-numbers: the EGF of ``(e^t - 1) f(t) / t``.

    ``P_n = (1/(n+1)) sum_{k<=n} binom(n+1, k) C_k``.
    """
    out = []
    for n in range(f.order + 1):
        if f.is_exact:
            acc = sum((math.comb(n + 1, k) * f[k] for k in range(n + 1)), Fraction(0))
            out.append(acc / (n + 1))
        else:
            acc = sum(math.comb(n + 1, k) * f[k] for k in range(n + 1))
            out.append(acc / (n + 1))
    return EgfSeries(f.field, tuple(out))


@lru_cache(maxsize=8)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum((math.comb(m + 1, k) * b[k] for k in range(m)), Fraction(0))
        b.append(-acc / (m + 1))
    return tuple(b)


def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """Exact ``B_0 .. B_n`` (convention ``B_1 = -1/2``)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    # reuse a larger cached table when one exists
    size = max(n, 64)
    return _bernoulli_table(size)[: n + 1]


# --------------------------------------------------------------------------
# Generating functions
# --------------------------------------------------------------------------

# below this modulus the truncated series replaces the closed form, which
# sidesteps removable singularities such as t / (e^t - 1) at t = 0
_SERIES_SWITCH = 1e-3


@dataclass(frozen=True, eq=False)
class GenFunction:
    """A generating function ``f`` with optional closed forms.

    ``closed_form`` evaluates ``f`` and ``p_closed_form`` evaluates
    ``p_f(t) = (e^t - 1) f(t) / t``, both vectorised over complex arrays.
    ``p_override`` lets transforms supply P-numbers directly (possibly to a
    higher order than ``series``) instead of recomputing them from the
    C-numbers, which in floating point would cancel catastrophically.
    """

    name: str
    series: EgfSeries
    closed_form: Evaluator | None = None
    p_closed_form: Evaluator | None = None
    radius_hint: Fraction | float | None = None
    p_override: EgfSeries | None = field(default=None, repr=False)

    @property
    def has_closed_form(self) -> bool:
        return self.closed_form is not None and self.p_closed_form is not None

    @cached_property
    def p_numbers(self) -> EgfSeries:
        if self.p_override is not None:
            return self.p_override
        return p_series(self.series)

    @cached_property
    def _p_egf_small(self) -> EgfSeries:
        return self.p_numbers.truncate(min(self.p_numbers.order, DEFAULT_ORDER))

    def _blend(self, closed: Evaluator | None, small: EgfSeries, t) -> np.ndarray:
        if closed is None:
            raise DomainError(f"{self.name} has no closed-form evaluator")
        t = np.asarray(t, dtype=complex)
        near = np.abs(t) < _SERIES_SWITCH
        with np.errstate(all="ignore"):
            out = np.asarray(closed(np.where(near, 1.0, t)), dtype=complex)
        out = np.broadcast_to(out, t.shape).copy()
        if np.any(near):
            out[near] = small.evaluate(t[near])
        return out

    def evaluate(self, t) -> np.ndarray:
        return self._blend(self.closed_form, self.series.truncate(min(self.series.order, DEFAULT_ORDER)), t)

    def evaluate_p(self, t) -> np.ndarray:
        return self._blend(self.p_closed_form, self._p_egf_small, t)


def _beta_closed(t: np.ndarray) -> np.ndarray:
    return t / np.expm1(t)


def f_alpha(f: GenFunction, alpha, order: int | None = None) -> GenFunction:
    """The transform ``f_(alpha)(t) = beta(t) p_f(alpha t)``.

    Its P-numbers are ``alpha**n P_{f,n}``; they are attached directly at
    the order of ``f``'s own P-numbers.
    """
    if alpha == 0:
        raise DomainError("alpha must be non-zero")
    order = f.series.order if order is None else order
    field_ = EXACT if (f.series.is_exact and _is_exact_scalar(alpha)) else APPROX
    beta_s = EgfSeries(EXACT, bernoulli_numbers(order))
    if field_ == APPROX:
        beta_s = beta_s.to_approx()
    p_scaled = egf_scale_arg(f.p_numbers, alpha)
    series = egf_product(beta_s, p_scaled.truncate(order))

    closed = p_closed = None
    if f.p_closed_form is not None:
        a = complex(alpha)
        base_p = f.p_closed_form

        def p_closed(t, _p=base_p, _a=a):
            return _p(_a * np.asarray(t, dtype=complex))

        def closed(t, _p=base_p, _a=a):
            t = np.asarray(t, dtype=complex)
            return _beta_closed(t) * _p(_a * t)

    radius = None
    if f.radius_hint is not None:
        if f.radius_hint == math.inf:
            radius = math.inf
        elif _is_exact_scalar(alpha) and isinstance(f.radius_hint, Fraction):
            radius = f.radius_hint / abs(Fraction(alpha))
        else:
            radius = float(f.radius_hint) / abs(complex(alpha))
    return GenFunction(
        name=f"{f.name}_({alpha})",
        series=series,
        closed_form=closed,
        p_closed_form=p_closed,
        radius_hint=radius,
        p_override=p_scaled,
    )


def underline(f: GenFunction) -> GenFunction:
    """``t -> exp(-t) f(-t)`` with its P-numbers ``(-1)**n P_{f,n}``."""
    closed = p_closed = None
    if f.closed_form is not None:
        base = f.closed_form

        def closed(t, _f=base):
            t = np.asarray(t, dtype=complex)
            return np.exp(-t) * _f(-t)

    if f.p_closed_form is not None:
        base_p = f.p_closed_form

        def p_closed(t, _p=base_p):
            return _p(-np.asarray(t, dtype=complex))

    return GenFunction(
        name=f"underline({f.name})",
        series=egf_underline(f.series),
        closed_form=closed,
        p_closed_form=p_closed,
        radius_hint=f.radius_hint,
        p_override=egf_scale_arg(f.p_numbers, -1),
    )


def gf_difference(f: GenFunction, g: GenFunction, name: str | None = None) -> GenFunction:
    """``f - g``; closed forms are combined when both sides have them."""
    _same_field(f.series, g.series)
    order = min(f.series.order, g.series.order)
    series = EgfSeries(f.series.field, tuple(a - b for a, b in zip(f.series.coeffs[: order + 1], g.series.coeffs)))
    closed = p_closed = None
    if f.has_closed_form and g.has_closed_form:
        fc, gc, fp, gp = f.closed_form, g.closed_form, f.p_closed_form, g.p_closed_form

        def closed(t):
            return fc(t) - gc(t)

        def p_closed(t):
            return fp(t) - gp(t)

    radius = None
    if f.radius_hint is not None and g.radius_hint is not None:
        radius = min(f.radius_hint, g.radius_hint)
    return GenFunction(
        name=name or f"{f.name}-{g.name}",
        series=series,
        closed_form=closed,
        p_closed_form=p_closed,
        radius_hint=radius,
    )


# --------------------------------------------------------------------------
# Builtins
# --------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _beta(order: int) -> GenFunction:
    return GenFunction(
        name="beta",
        series=EgfSeries(EXACT, bernoulli_numbers(order)),
        closed_form=_beta_closed,
        p_closed_form=lambda t: np.ones_like(np.asarray(t, dtype=complex)),
        radius_hint=math.inf,
    )


@lru_cache(maxsize=32)
def _beta_a(a: Fraction, order: int) -> GenFunction:
    if not 0 < a <= 1:
        raise DomainError(f"beta_a needs 0 < a <= 1, got {a}")
    shift = a - 1
    series = egf_product(EgfSeries(EXACT, bernoulli_numbers(order)), egf_exp(shift, order))
    c = float(shift)

    def closed(t):
        t = np.asarray(t, dtype=complex)
        return t * np.exp(c * t) / np.expm1(t)

    def p_closed(t):
        return np.exp(c * np.asarray(t, dtype=complex))

    radius = math.inf if shift == 0 else 1 / abs(shift)
    return GenFunction(
        name=f"beta_a({a})",
        series=series,
        closed_form=closed,
        p_closed_form=p_closed,
        radius_hint=radius,
    )


@lru_cache(maxsize=32)
def _exp_c(c: Fraction, order: int) -> GenFunction:
    cf = float(c)

    def closed(t):
        return np.exp(cf * np.asarray(t, dtype=complex))

    def p_closed(t):
        t = np.asarray(t, dtype=complex)
        return np.exp(cf * t) * np.expm1(t) / t

    growth = max(abs(c), abs(c + 1))
    return GenFunction(
        name=f"exp_c({c})",
        series=egf_exp(c, order),
        closed_form=closed,
        p_closed_form=p_closed,
        radius_hint=1 / growth,
    )


def builtin(name: str, order: int = DEFAULT_ORDER, **params) -> GenFunction:
    """Registry lookup.

    ``beta``; ``beta_a`` (``a`` rational, ``0 < a <= 1``); ``exp_c``
    (``c`` rational); ``coeff_file`` (``path``).
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if name == "beta":
        return _beta(order)
    if name == "beta_a":
        return _beta_a(as_rational(params.get("a", 1)), order)
    if name == "exp_c":
        return _exp_c(as_rational(params.get("c", 0)), order)
    if name in ("coeff_file", "file"):
        if "path" not in params:
            raise CoefficientFileError("coeff_file needs a path")
        return load_coeff_file(params["path"])
    raise UnknownFunctionError(f"unknown generating function {name!r}")


def _parse_int(value, what: str) -> int:
    if isinstance(value, bool):
        raise CoefficientFileError(f"{what} must be an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise CoefficientFileError(f"{what} must be a decimal integer string, got {value!r}")


def load_coeff_file(path) -> GenFunction:
    """Read ``{"name": ..., "coeffs": [{"num": "p", "den": "q"}, ...]}``."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CoefficientFileError(f"cannot read coefficient file {path}: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("coeffs"), list) or not doc["coeffs"]:
        raise CoefficientFileError("expected an object with a non-empty 'coeffs' array")
    coeffs = []
    for i, entry in enumerate(doc["coeffs"]):
        if not isinstance(entry, dict) or "num" not in entry:
            raise CoefficientFileError(f"coeffs[{i}] must be an object with 'num' and 'den'")
        num = _parse_int(entry["num"], f"coeffs[{i}].num")
        den = _parse_int(entry.get("den", "1"), f"coeffs[{i}].den")
        if den == 0:
            raise CoefficientFileError(f"coeffs[{i}] has a zero denominator")
        coeffs.append(Fraction(num, den))
    name = doc.get("name", Path(path).stem)
    if not isinstance(name, str):
        raise CoefficientFileError("'name' must be a string")
    return GenFunction(name=name, series=EgfSeries(EXACT, tuple(coeffs)))


def dump_coeff_file(f: GenFunction | EgfSeries, path, name: str | None = None) -> None:
    series = f.series if isinstance(f, GenFunction) else f
    if not series.is_exact:
        raise FieldMismatchError("only exact series can be written to a coefficient file")
    doc = {
        "name": name or (f.name if isinstance(f, GenFunction) else "series"),
        "coeffs": [{"num": str(c.numerator), "den": str(c.denominator)} for c in series.coeffs],
    }
    Path(path).write_text(json.dumps(doc, indent=1))


# --------------------------------------------------------------------------
# Closed form vs series
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    rows: tuple  # (t, closed, partial, abs_diff, allowed)


def _tail_proxy(series: EgfSeries, t: float) -> float:
    """Heuristic size of the omitted terms ``n in (N, N+64]``.

    Coefficients past ``N`` are unknown, so they are extrapolated
    geometrically from the growth rate of the trailing window ``[N/2, N]``.
    """
    a = np.abs(series.ordinary())
    N = series.order
    window = range(max(1, N // 2), N + 1)
    rate = max((a[n] ** (1.0 / n) for n in window if a[n] > 0), default=0.0)
    if rate == 0.0:
        return 0.0
    x = rate * abs(t)
    exps = np.arange(N + 1, N + 65)
    return float(np.max(np.exp(exps * math.log(x)))) if x > 0 else 0.0


def validate_closed_form(g: GenFunction, points: Sequence[float], tol: float) -> ValidationReport:
    if g.closed_form is None:
        raise DomainError(f"{g.name} has no closed form to validate")
    rows, ok = [], True
    for t in points:
        closed = complex(g.evaluate(np.asarray([t]))[0])
        partial = complex(g.series.evaluate(np.asarray([t]))[0])
        diff = abs(closed - partial)
        allowed = tol + _tail_proxy(g.series, t)
        if not diff <= allowed:
            ok = False
        rows.append((t, closed, partial, diff, allowed))
    return ValidationReport(ok, tuple(rows))
