"""Complex gamma function and the quadrature kernels used by the evaluators.

All integrands are expected to be vectorised: they receive a NumPy array of
nodes and return an array of the same shape.  Integrand callables must be
re-entrant; nothing here keeps state between calls.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, PoleError, QuadratureError

__all__ = [
    "QuadratureSpec",
    "QuadratureResult",
    "complex_gamma",
    "integrate_semi_infinite",
    "integrate_interval",
    "integrate_circle",
    "integrate_hankel",
    "hurwitz_zeta",
]

_EPS = np.finfo(float).eps
# smallest offset from the left endpoint sampled by the exp-sinh rule
_X_MIN = 1e-300
_T_MAX = 2.0**14


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and size limits for the adaptive rules.

    ``tol`` is mixed absolute/relative: a rule stops once successive
    refinements differ by less than ``tol * max(1, |I|)``.  When the
    rounding noise of the sum itself exceeds that, the noise level is used
    instead.
    """

    tol: float = 1e-13
    max_subdivisions: int = 12
    max_nodes: int = 1 << 15

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_subdivisions < 1 or self.max_nodes < 1:
            raise ValueError("quadrature limits must be positive")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    nodes_used: int
    converged: bool


DEFAULT_QUAD = QuadratureSpec()


# --------------------------------------------------------------------------
# Gamma function
# --------------------------------------------------------------------------

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _gamma_right(z: complex) -> complex:
    z = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return cmath.exp(_HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t) * x


def complex_gamma(z) -> complex:
    """Gamma function of a complex argument.

    Lanczos approximation on ``Re z >= 1/2`` and the reflection formula
    ``Gamma(z) Gamma(1 - z) = pi / sin(pi z)`` to the left of it.

    >>> abs(complex_gamma(5) - 24) < 1e-12
    True
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"gamma argument not finite: {z!r}")
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        s = cmath.sin(math.pi * z)
        if s == 0:
            raise PoleError(f"gamma has a pole at {z!r}")
        return math.pi / (s * _gamma_right(1.0 - z))
    return _gamma_right(z)


# --------------------------------------------------------------------------
# Quadrature
# --------------------------------------------------------------------------


def _as_complex_array(values, shape) -> np.ndarray:
    out = np.asarray(values, dtype=complex)
    if out.shape != shape:
        out = np.broadcast_to(out, shape).astype(complex)
    return out


def _weighted_sum(weights: np.ndarray, values: np.ndarray) -> tuple[complex, float]:
    live = weights != 0.0
    vals = values[live]
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("integrand returned a non-finite value")
    terms = weights[live] * vals
    return complex(terms.sum()), float(np.abs(terms).sum())


def _find_cutoff(g: Callable, a: float, tol: float) -> float:
    """Smallest power-of-two T whose integrand magnitude near a+T is below tol/10."""
    T = 1.0
    with np.errstate(all="ignore"):
        while T <= _T_MAX:
            probe = a + np.array([T, 1.5 * T, 2.0 * T])
            vals = np.abs(_as_complex_array(g(probe), probe.shape))
            if np.all(np.isfinite(vals)) and float(vals.max()) * 2.0 * T < tol / 10.0:
                return T
            T *= 2.0
    raise QuadratureError(f"integrand does not decay on [{a}, {a + _T_MAX}]")


def integrate_semi_infinite(
    g: Callable[[np.ndarray], np.ndarray],
    a: float = 0.0,
    spec: QuadratureSpec | None = None,
    endpoint_exponent: float | None = None,
) -> QuadratureResult:
    """Integrate ``g`` over ``(a, +inf)`` with the exp-sinh rule.

    The substitution ``t = a + exp(pi/2 sinh u)`` clusters nodes
    geometrically toward ``a``, which absorbs an algebraic endpoint
    behaviour ``(t - a)**e`` with ``e > -1``.  Pass ``e`` as
    ``endpoint_exponent`` to get the analytic correction for the piece
    below the smallest node.  The upper cutoff is found by doubling until
    the integrand has decayed below ``tol/10``.
    """
    spec = spec or DEFAULT_QUAD
    if endpoint_exponent is not None and endpoint_exponent <= -1.0:
        raise DomainError("endpoint exponent must exceed -1 for integrability")
    T = _find_cutoff(g, a, spec.tol)
    half_pi = 0.5 * math.pi
    u_lo = math.asinh(math.log(_X_MIN) / half_pi)
    u_hi = math.asinh(math.log(T) / half_pi)

    prev = None
    err = math.inf
    total = 0
    with np.errstate(all="ignore"):
        for level in range(spec.max_subdivisions + 1):
            h = 2.0**-level
            k = np.arange(math.ceil(u_lo / h), math.floor(u_hi / h) + 1)
            if total + k.size > spec.max_nodes:
                break
            u = k * h
            x = np.exp(half_pi * np.sinh(u))
            w = half_pi * np.cosh(u) * x * h
            vals = _as_complex_array(g(a + x), x.shape)
            value, mass = _weighted_sum(w, vals)
            total += k.size
            if endpoint_exponent is not None:
                value += vals[0] * x[0] / (endpoint_exponent + 1.0)
            if prev is not None:
                err = abs(value - prev)
                floor = 50.0 * _EPS * mass
                if level >= 3 and err <= max(spec.tol * max(1.0, abs(value)), floor):
                    return QuadratureResult(value, err, total, True)
            prev = value
    raise QuadratureError(
        f"exp-sinh rule did not converge (last difference {err:.3g}, {total} nodes)"
    )


@lru_cache(maxsize=None)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def integrate_interval(
    g: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    spec: QuadratureSpec | None = None,
) -> QuadratureResult:
    """Gauss-Legendre on ``[lo, hi]``, doubling the node count until stable."""
    spec = spec or DEFAULT_QUAD
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    prev = None
    err = math.inf
    total = 0
    n = 16
    while n <= spec.max_nodes:
        x, w = _gauss_legendre(n)
        nodes = mid + half * x
        vals = _as_complex_array(g(nodes), nodes.shape)
        value, mass = _weighted_sum(half * w, vals)
        total += n
        if prev is not None:
            err = abs(value - prev)
            if err <= max(spec.tol * max(1.0, abs(value)), 50.0 * _EPS * mass):
                return QuadratureResult(value, err, total, True)
        prev = value
        n *= 2
    raise QuadratureError(f"Gauss-Legendre did not converge (difference {err:.3g})")


def integrate_circle(
    h: Callable[[np.ndarray, np.ndarray], np.ndarray],
    radius: float,
    spec: QuadratureSpec | None = None,
    *,
    periodic: bool = True,
) -> QuadratureResult:
    """Return ``(1/2 pi i)`` times the integral of ``h`` over ``|s| = radius``.

    The circle is traversed counter-clockwise from ``theta = -pi`` to
    ``theta = pi``; ``h`` is called as ``h(s, theta)`` so that integrands
    carrying a branch cut on the negative axis can build their powers from
    ``theta`` directly.  With ``periodic=True`` the trapezoid rule is used
    (spectrally accurate for analytic periodic integrands); otherwise the
    parametrised integrand is handed to Gauss-Legendre.
    """
    if not radius > 0:
        raise DomainError("circle radius must be positive")
    spec = spec or DEFAULT_QUAD

    def along(theta):
        s = radius * np.exp(1j * theta)
        return h(s, theta) * s / (2.0 * math.pi)

    if not periodic:
        return integrate_interval(along, -math.pi, math.pi, spec)

    prev = None
    err = math.inf
    n = 8
    while n <= spec.max_nodes:
        theta = -math.pi + 2.0 * math.pi * np.arange(n) / n
        vals = _as_complex_array(along(theta), theta.shape)
        value, mass = _weighted_sum(np.full(n, 2.0 * math.pi / n), vals)
        if prev is not None:
            err = abs(value - prev)
            if err <= max(spec.tol * max(1.0, abs(value)), 50.0 * _EPS * mass):
                return QuadratureResult(value, err, n, True)
        prev = value
        n *= 2
    raise QuadratureError(f"trapezoid rule did not converge (difference {err:.3g})")


def integrate_hankel(
    ray_integrand: Callable[[np.ndarray], np.ndarray],
    circle_integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
    radius: float,
    z: complex,
    spec: QuadratureSpec | None = None,
) -> QuadratureResult:
    """Assemble a Hankel-contour integral from its ray and circle pieces.

    For a contour that comes in from ``-inf`` below the cut, circles the
    origin at ``radius`` and leaves above the cut, with an integrand of the
    form ``s**(z-1) * phi(s)``, the two rays collapse to
    ``2i sin(pi z) * int_radius^inf ray_integrand``.  The result is

        sin(pi z)/pi * int_radius^inf ray(t) dt + (1/2 pi i) oint circle(s) ds.

    ``ray_integrand`` must already be ``t**(z-1) * phi(-t)`` and the circle
    piece receives ``(s, theta)`` with ``theta`` in ``[-pi, pi]``.
    """
    spec = spec or DEFAULT_QUAD
    z = complex(z)
    circle = integrate_circle(circle_integrand, radius, spec, periodic=False)
    weight = cmath.sin(math.pi * z) / math.pi
    if weight == 0:
        return circle
    ray = integrate_semi_infinite(ray_integrand, radius, spec)
    return QuadratureResult(
        weight * ray.value + circle.value,
        abs(weight) * ray.error_estimate + circle.error_estimate,
        ray.nodes_used + circle.nodes_used,
        ray.converged and circle.converged,
    )


# --------------------------------------------------------------------------
# Hurwitz zeta by Euler-Maclaurin (used for series tails)
# --------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _even_bernoulli_over_factorial(count: int = 40) -> tuple[float, ...]:
    from .series import bernoulli_numbers

    b = bernoulli_numbers(2 * count)
    return tuple(float(b[2 * k] / math.factorial(2 * k)) for k in range(1, count + 1))


def hurwitz_zeta(s, a: float, *, tol: float = 1e-16) -> tuple[complex, float]:
    """``sum_{n>=0} (n + a)**(-s)`` for ``a > 0`` and ``s != 1``.

    Direct summation up to a shift ``a + J`` large compared with ``|s|``,
    then the Euler-Maclaurin correction.  Returns ``(value, error_bound)``
    where the bound is the size of the first omitted correction term.
    """
    s = complex(s)
    if s == 1:
        raise PoleError("Hurwitz zeta has a pole at s = 1", residue=1.0)
    if not a > 0:
        raise DomainError("Hurwitz zeta needs a > 0")
    shift = max(0, math.ceil(max(10.0, abs(s)) - a))
    head = 0j
    for j in range(shift):
        head += (a + j) ** (-s)
    b = a + shift
    tail = b ** (1.0 - s) / (s - 1.0) + 0.5 * b ** (-s)
    coeffs = _even_bernoulli_over_factorial()
    rising = s  # s (s+1) ... (s + 2k - 2)
    power = b ** (-s - 1.0)
    last = math.inf
    for k, c in enumerate(coeffs, start=1):
        term = c * rising * power
        tail += term
        last = abs(term)
        if last <= tol * abs(head + tail):
            break
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= b * b
    return head + tail, last
