"""The LC-function ``L(z,f) = sum_{n >= n_f} n^(-z,f)`` and its companions.

Evaluators:

* :func:`lc_series`: the defining series for ``Re z > 1``, with the tail
  summed through Hurwitz zeta values.
* :func:`lc_mellin`: the integral ``(1/Gamma(z)) int t^(z-2) e^((1-n_f)t) f_(t) dt``.
* :func:`hankel_I` / :func:`lc_continued`: analytic continuation to the whole
  plane minus ``z = 1`` through a Hankel contour.
* :func:`lc_special_value`: exact rational values at ``z = 0, -1, -2, ...``.
* :func:`hankel_J` / :func:`fc_function` / :func:`lc_formula_check`: the
  FC-functions and the Hurwitz-type formula linking them to ``L``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .appell import AppellSystem, c_poly
from .errors import DomainError, PoleError, ToleranceError, ValidationError
from .genpower import DEFAULT_POWER, PowerConfig, gen_power_array
from .numerics import (
    DEFAULT_QUAD,
    QuadratureResult,
    QuadratureSpec,
    complex_gamma,
    hurwitz_zeta,
    integrate_hankel,
    integrate_semi_infinite,
)
from .series import EXACT, as_complex

__all__ = [
    "ContourSpec",
    "LcEvaluation",
    "FormulaCheck",
    "SERIES_MARGIN",
    "POLE_GUARD",
    "lc_series",
    "lc_mellin",
    "hankel_I",
    "lc_continued",
    "lc_special_value",
    "residue_at_one",
    "residue_estimate",
    "hankel_J",
    "j_radius_band",
    "fc_function",
    "lc_formula_check",
]

SERIES_MARGIN = 0.05
POLE_GUARD = 1e-6
# direct terms before the tail is handed to Hurwitz zeta
_DIRECT_TERMS = 32

SERIES = "series"
MELLIN = "mellin"
CONTOUR = "contour"
SPECIAL = "special_value_exact"


@dataclass(frozen=True)
class ContourSpec:
    """Geometry of a Hankel contour.

    ``radius`` of ``None`` picks the default for the contour kind (1 for
    the I-contour, the middle of the admissible band for the J-contour).
    ``nodes_circle`` caps the node count on the circle.
    """

    radius: float | None = None
    nodes_circle: int = 1 << 12
    quad: QuadratureSpec = DEFAULT_QUAD

    def circle_quad(self) -> QuadratureSpec:
        return replace(self.quad, max_nodes=min(self.quad.max_nodes, self.nodes_circle))


DEFAULT_CONTOUR = ContourSpec()


@dataclass(frozen=True)
class LcEvaluation:
    value: complex
    method: str
    error_estimate: float
    terms_or_nodes: int
    exact: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "error_estimate", float(self.error_estimate))
        object.__setattr__(self, "terms_or_nodes", int(self.terms_or_nodes))
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be non-negative")
        if self.method == SPECIAL and self.exact is None:
            raise ValueError("exact special values must carry the rational")


@dataclass(frozen=True)
class FormulaCheck:
    lhs: complex
    rhs: complex

    @property
    def abs_diff(self) -> float:
        return abs(self.lhs - self.rhs)


# --------------------------------------------------------------------------
# Series
# --------------------------------------------------------------------------


def lc_series(sys: AppellSystem, z, tol: float = 1e-14, *, margin: float = SERIES_MARGIN) -> LcEvaluation:
    """``L(z,f)`` from its defining series, for ``Re z > 1 + margin``.

    Terms ``n_f <= n < M`` are generalised powers; the rest is
    ``sum_k binom(-z,k) P_k zeta(z+k, M)``, which converges geometrically
    once ``M`` is well clear of ``r_f``.
    """
    z = as_complex(z)
    if z.real <= 1 + margin:
        raise DomainError(
            f"the series needs Re(z) > {1 + margin:g}; use lc_continued for z = {z}"
        )
    dom = sys.domain
    p = sys.p_array
    M = max(dom.n_f + _DIRECT_TERMS, math.ceil(4 * dom.r_f) + 1)
    n = np.arange(dom.n_f, M, dtype=float)
    head = complex(np.sum(gen_power_array(p, n + 0j, -z, dom.r_f, PowerConfig(tol=tol / 10))))

    tail = 0j
    binom = 1 + 0j
    last = math.inf
    for k in range(len(p)):
        if p[k] != 0:
            zeta, _ = hurwitz_zeta(z + k, float(M))
            term = binom * p[k] * zeta
            tail += term
            last = abs(term)
            # tail of the k-series is dominated by a geometric factor r_f/M
            if k > 0 and last * M <= tol * abs(head + tail):
                break
        elif dom.r_f == 0 and not np.any(p[k:] != 0):
            last = 0.0
            break
        binom *= (-z - k) / (k + 1)
    else:
        if last > tol * abs(head + tail):
            raise ToleranceError("P-numbers exhausted before the tail series converged")
    value = head + tail
    return LcEvaluation(value, SERIES, max(last, tol * abs(value)), M - dom.n_f + k + 1)


# --------------------------------------------------------------------------
# Mellin integral
# --------------------------------------------------------------------------


def lc_mellin(sys: AppellSystem, z, quad: QuadratureSpec | None = None) -> LcEvaluation:
    """``L(z,f)`` as ``(1/Gamma(z)) int_0^inf t^(z-2) e^((1-n_f)t) f_(t) dt`` with ``f_`` the underline transform."""
    quad = quad or DEFAULT_QUAD
    z = as_complex(z)
    if z.real <= 1:
        raise DomainError("the Mellin representation needs Re(z) > 1")
    under = sys.underline.f
    if under.closed_form is None:
        raise DomainError(f"{sys.f.name} has no closed form")
    shift = 1 - sys.domain.n_f

    def integrand(t):
        t = np.asarray(t, dtype=float)
        return np.exp((z - 2.0) * np.log(t) + shift * t) * under.evaluate(t)

    exponent = z.real - 2.0 if sys.c_numbers[0] != 0 else z.real - 1.0
    res = integrate_semi_infinite(integrand, 0.0, quad, endpoint_exponent=max(exponent, -0.999))
    g = complex_gamma(z)
    return LcEvaluation(res.value / g, MELLIN, res.error_estimate / abs(g), res.nodes_used)


# --------------------------------------------------------------------------
# I-contour and continuation
# --------------------------------------------------------------------------


def _i_radius(spec: ContourSpec) -> float:
    r = 1.0 if spec.radius is None else float(spec.radius)
    if not 0 < r < 2 * math.pi:
        raise DomainError(f"I-contour radius must lie in (0, 2*pi), got {r}")
    return r


def hankel_I(sys: AppellSystem, z, spec: ContourSpec | None = None) -> QuadratureResult:
    """The entire function ``I(z,f)`` with ``L(z,f) = Gamma(1-z) I(z,f)``.

    Ray part ``t^(z-1) e^(-n_f t) p_f(-t) / (1 - e^(-t))`` on ``[eps, inf)``
    plus the circle ``|s| = eps``.
    """
    spec = spec or DEFAULT_CONTOUR
    z = as_complex(z)
    eps = _i_radius(spec)
    f = sys.f
    if f.p_closed_form is None:
        raise DomainError(f"{f.name} has no closed-form p_f")
    nf = sys.domain.n_f

    def ray(t):
        t = np.asarray(t, dtype=float)
        return np.exp((z - 1.0) * np.log(t) - nf * t) * f.evaluate_p(-t) / (-np.expm1(-t))

    def circle(s, theta):
        log_s = math.log(eps) + 1j * np.asarray(theta)
        return np.exp((z - 1.0) * log_s + nf * s) * f.evaluate_p(s) / (-np.expm1(s))

    res = integrate_hankel(ray, circle, eps, z, spec.circle_quad())
    return res


def _near_pole(z: complex, guard: float) -> bool:
    return abs(z - 1) < guard


def lc_continued(
    sys: AppellSystem,
    z,
    spec: ContourSpec | None = None,
    *,
    pole_guard: float = POLE_GUARD,
    margin: float = SERIES_MARGIN,
) -> LcEvaluation:
    """``L(z,f)`` on the plane minus ``z = 1``.

    ``Re z > 1 + margin`` goes to the series; everything else is
    ``Gamma(1-z) I(z,f)``.
    """
    spec = spec or DEFAULT_CONTOUR
    z = as_complex(z)
    c0 = sys.c_numbers[0]
    if _near_pole(z, pole_guard):
        if c0 != 0:
            raise PoleError(f"L(z,f) has a simple pole at z = 1 (residue {c0})", residue=c0)
        raise DomainError("L(1,f) for f(0) = 0 is not evaluated inside the pole guard")
    if z.real > 1 + margin:
        return lc_series(sys, z, tol=max(spec.quad.tol, 1e-15), margin=margin)
    res = hankel_I(sys, z, spec)
    g = complex_gamma(1.0 - z)
    return LcEvaluation(g * res.value, CONTOUR, abs(g) * res.error_estimate, res.nodes_used)


def lc_special_value(sys: AppellSystem, n: int) -> LcEvaluation:
    """Exact ``L(-n,f) = -C_{f,n+1}(n_f)/(n+1)``, cross-checked by the underline form."""
    if n < 0:
        raise DomainError("special values are for n >= 0")
    if sys.field != EXACT:
        raise DomainError("special values need an exact system")
    sys._check(n + 1)
    nf = sys.domain.n_f
    first = -c_poly(sys, n + 1)(Fraction(nf)) / (n + 1)
    second = (-1) ** n * c_poly(sys.underline, n + 1)(Fraction(1 - nf)) / (n + 1)
    if first != second:
        raise ValidationError(f"special value forms disagree: {first} vs {second}")
    return LcEvaluation(complex(float(first)), SPECIAL, 0.0, n + 1, exact=first)


def residue_at_one(sys: AppellSystem):
    """Residue of ``L(z,f)`` at ``z = 1``, which is ``f(0) = C_{f,0}``."""
    return sys.c_numbers[0]


def residue_estimate(sys: AppellSystem, spec: ContourSpec | None = None, hs=(1e-3, 1e-4)) -> complex:
    """Richardson-extrapolated ``(z-1) L(z,f)`` as ``z -> 1`` from the right."""
    h1, h2 = hs
    r1 = h1 * lc_continued(sys, 1 + h1, spec).value
    r2 = h2 * lc_continued(sys, 1 + h2, spec).value
    return (h1 * r2 - h2 * r1) / (h1 - h2)


# --------------------------------------------------------------------------
# J-contour, FC-functions and the Hurwitz-type formula
# --------------------------------------------------------------------------


def j_radius_band(sys: AppellSystem) -> tuple[float, float]:
    """Open interval ``(r_f, 2 pi m)`` of admissible J-contour radii, ``m`` minimal with ``r_f < 2 pi m``."""
    r_f = sys.domain.r_f
    m = math.floor(r_f / (2 * math.pi)) + 1
    return r_f, 2 * math.pi * m


def _j_radius(sys: AppellSystem, spec: ContourSpec) -> float:
    lo, hi = j_radius_band(sys)
    if spec.radius is None:
        return 0.5 * (lo + hi)
    r = float(spec.radius)
    if not lo < r < hi:
        raise DomainError(f"J-contour radius must lie in ({lo:g}, {hi:g}), got {r}")
    return r


def hankel_J(
    sys: AppellSystem,
    z,
    spec: ContourSpec | None = None,
    cfg: PowerConfig | None = None,
) -> QuadratureResult:
    """``J(z,g) = (1/2 pi i) int s^(z-1,g) / (e^(-s) - 1) ds`` for ``g`` the system's function.

    On the rays around the negative axis ``s^(z-1,g)`` turns into
    ``e^(+-i pi (z-1)) t^(z-1,g_)`` with ``g_`` the underline transform, so
    the ray piece is evaluated on the positive axis for ``g_``.
    """
    spec = spec or DEFAULT_CONTOUR
    cfg = cfg or DEFAULT_POWER
    z = as_complex(z)
    r = _j_radius(sys, spec)
    r_f = sys.domain.r_f
    p = sys.p_array
    p_under = sys.underline.p_array
    w = z - 1.0

    def ray(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            decay = np.exp(-t) / (-np.expm1(-t))
        out = np.zeros(t.shape, dtype=complex)
        live = decay > 0
        if np.any(live):
            out[live] = gen_power_array(p_under, t[live] + 0j, w, r_f, cfg) * decay[live]
        return out

    def circle(s, theta):
        s = np.asarray(s, dtype=complex)
        return gen_power_array(p, s, w, r_f, cfg, arg=np.asarray(theta)) / np.expm1(-s)

    return integrate_hankel(ray, circle, r, z, spec.circle_quad())


def fc_function(sys: AppellSystem, z, spec: ContourSpec | None = None) -> complex:
    """``F(z,f) = Gamma(1-z) J(z, f_)`` with ``f_`` the underline transform."""
    z = as_complex(z)
    if z.imag == 0 and z.real >= 1 and z.real == math.floor(z.real):
        raise PoleError(f"F(z,f) is not defined at the positive integer {int(z.real)}")
    return complex_gamma(1.0 - z) * hankel_J(sys.underline, z, spec).value


# order of the approximate C-series carried by the f_(+-2 pi i) systems;
# only their P-numbers enter the FC-functions
_ROTATED_ORDER = 32


def lc_formula_check(sys: AppellSystem, z, spec: ContourSpec | None = None) -> FormulaCheck:
    """Both sides of the Hurwitz-type formula for ``Re z < 0``.

    ``lhs = L(1-z,f)`` by the series; ``rhs`` combines ``F(z, f_(2 pi i))``
    and ``F(z, f_(-2 pi i))``.
    """
    z = as_complex(z)
    if z.real >= 0:
        raise DomainError("the formula is checked only for Re(z) < 0")
    lhs = lc_series(sys, 1.0 - z).value
    two_pi_i = 2j * math.pi
    plus = sys.alpha(two_pi_i, order=_ROTATED_ORDER)
    minus = sys.alpha(-two_pi_i, order=_ROTATED_ORDER)
    f_plus = fc_function(plus, z, spec)
    f_minus = fc_function(minus, z, spec)
    rhs = (
        complex_gamma(z)
        * cmath.exp(-z * math.log(2 * math.pi))
        * (cmath.exp(-0.5j * math.pi * z) * f_plus + cmath.exp(0.5j * math.pi * z) * f_minus)
    )
    return FormulaCheck(lhs, rhs)
