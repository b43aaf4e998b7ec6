"""Convergence data of the P-number series and the generalised power ``s^(z,f)``."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ToleranceError
from .numerics import DEFAULT_QUAD, QuadratureSpec, complex_gamma, integrate_semi_infinite
from .series import EgfSeries, as_complex

__all__ = [
    "DomainInfo",
    "PowerConfig",
    "estimate_radius",
    "domain_info",
    "binom_complex",
    "gen_power",
    "gen_power_array",
    "gen_power_mellin",
]

EXACT_HINT = "exact_hint"
ESTIMATED = "estimated"


@dataclass(frozen=True)
class DomainInfo:
    """``rho_f`` (radius of the P-series), ``r_f = 1/rho_f`` and ``n_f = floor(r_f) + 1``."""

    rho_f: float
    r_f: float
    n_f: int
    source: str

    @classmethod
    def from_radius(cls, rho, source: str = ESTIMATED) -> "DomainInfo":
        if rho == math.inf:
            return cls(math.inf, 0.0, 1, source)
        if not rho > 0:
            raise DomainError("the P-number series must have a positive radius")
        r = 1 / rho  # stays a Fraction for exact hints, so the floor is exact
        return cls(float(rho), float(r), math.floor(r) + 1, source)

    @classmethod
    def from_r(cls, r_f, source: str = ESTIMATED) -> "DomainInfo":
        if r_f == 0:
            return cls(math.inf, 0.0, 1, source)
        return cls(float(1 / Fraction(r_f) if isinstance(r_f, (int, Fraction)) else 1.0 / r_f),
                   float(r_f), math.floor(r_f) + 1, source)

    def contains(self, s: complex) -> bool:
        s = complex(s)
        on_cut = s.imag == 0 and s.real <= 0
        return not on_cut and abs(s) > self.r_f


@dataclass(frozen=True)
class PowerConfig:
    """Tail control for the binomial series.

    ``tol`` is relative to the normalised sum; ``r0_fraction`` places the
    comparison radius ``r0 = r_f + r0_fraction * (|s| - r_f)``.
    """

    tol: float = 1e-14
    max_terms: int = 400
    r0_fraction: float = 0.5

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_terms < 8:
            raise ValueError("max_terms must be at least 8")
        if not 0 < self.r0_fraction < 1:
            raise ValueError("r0_fraction must lie in (0, 1)")


DEFAULT_POWER = PowerConfig()
# trailing terms inspected when bounding the tail
_WINDOW = 16


def estimate_radius(p_numbers, radius_hint=None):
    """Radius of convergence of ``sum P_n s^n``.

    An exact hint wins.  Otherwise ``1 / max |P_n|^(1/n)`` over the trailing
    window ``n in [N/2, N]``, or infinity when the window is all zeros.
    Returns ``(rho, source)``.
    """
    if radius_hint is not None:
        return radius_hint, EXACT_HINT
    coeffs = p_numbers.coeffs if isinstance(p_numbers, EgfSeries) else tuple(p_numbers)
    if len(coeffs) < 16:
        raise DomainError("radius estimation needs at least 16 coefficients")
    N = len(coeffs) - 1
    best = 0.0
    for n in range(max(1, N // 2), N + 1):
        c = coeffs[n]
        if c != 0:
            mag = abs(complex(c)) if not isinstance(c, Fraction) else abs(c)
            # log form avoids overflow for huge rationals
            if isinstance(mag, Fraction):
                root = math.exp((math.log(mag.numerator) - math.log(mag.denominator)) / n)
            else:
                root = math.exp(math.log(mag) / n)
            best = max(best, root)
    if best == 0.0:
        return math.inf, ESTIMATED
    return 1.0 / best, ESTIMATED


def domain_info(sys) -> DomainInfo:
    rho, source = estimate_radius(sys.p_numbers, sys.f.radius_hint)
    return DomainInfo.from_radius(rho, source)


def binom_complex(z, n: int) -> complex:
    """``binom(z, n)`` through ``binom(z, k+1) = binom(z, k) (z - k) / (k + 1)``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    z = complex(z)
    acc = 1 + 0j
    for k in range(n):
        acc = acc * (z - k) / (k + 1)
    return acc


def _nonneg_integer(z: complex) -> int | None:
    if z.imag == 0 and z.real >= 0 and z.real == math.floor(z.real):
        return int(z.real)
    return None


def gen_power_array(
    p: np.ndarray,
    s: np.ndarray,
    z,
    r_f: float,
    cfg: PowerConfig = DEFAULT_POWER,
    arg: np.ndarray | None = None,
) -> np.ndarray:
    """Vectorised ``s^(z,f) = s^z sum_n binom(z,n) P_n s^(-n)``.

    ``p`` holds the P-numbers as complex.  ``arg`` optionally supplies the
    argument used for ``s^z`` (for points on a branch cut reached from one
    side); by default the principal branch is used.  Domain membership is
    the caller's responsibility here.

    The sum stops once every point satisfies the geometric tail bound
    ``K q^(n+1) / (1 - q)`` with ``q = r0/|s|`` and ``K`` the largest
    ``|term_j| q^(-j)`` over the last ``_WINDOW`` terms.
    """
    z = complex(z)
    s = np.asarray(s, dtype=complex)
    mod = np.abs(s)
    if arg is None:
        arg = np.angle(s)
    log_s = np.log(mod) + 1j * np.asarray(arg, dtype=float)
    prefactor = np.exp(z * log_s)

    k_int = _nonneg_integer(z)
    if k_int is not None:
        # binom(z, n) vanishes for n > z: a finite sum (a P-polynomial)
        if k_int >= len(p):
            raise ToleranceError(f"need P-numbers up to index {k_int}, have {len(p) - 1}")
        acc = np.zeros(s.shape, dtype=complex)
        for n in range(k_int + 1):
            acc = acc + math.comb(k_int, n) * p[n] * s ** (k_int - n)
        return acc

    inv = 1.0 / s
    r0 = r_f + cfg.r0_fraction * (mod - r_f)
    q = r0 / mod
    limit = min(len(p), cfg.max_terms)
    acc = np.zeros(s.shape, dtype=complex)
    power = np.ones(s.shape, dtype=complex)
    binom = 1 + 0j
    # |term_j| * q^(-j), kept for the trailing window
    scaled = np.zeros((_WINDOW,) + s.shape)
    log_q = np.log(q)
    for n in range(limit):
        term = binom * p[n] * power
        acc = acc + term
        with np.errstate(divide="ignore", over="ignore"):
            scaled[n % _WINDOW] = np.abs(term) * np.exp(-n * log_q)
        if n + 1 >= _WINDOW:
            K = scaled.max(axis=0)
            with np.errstate(over="ignore", invalid="ignore"):
                tail = K * np.exp((n + 1) * log_q) / (1.0 - q)
            if np.all(tail <= cfg.tol * np.maximum(np.abs(acc), 1e-300)):
                return prefactor * acc
        binom = binom * (z - n) / (n + 1)
        power = power * inv
    raise ToleranceError(
        f"generalised power did not converge within {limit} terms "
        f"(largest |s| ratio r0/|s| = {float(np.max(q)):.3g})"
    )


def gen_power(sys, s, z, cfg: PowerConfig | None = None) -> complex:
    """``s^(z,f)`` on the principal branch, for ``s`` in ``Omega_f``."""
    cfg = cfg or DEFAULT_POWER
    s = as_complex(s)
    z = as_complex(z)
    dom = sys.domain
    if not dom.contains(s):
        raise DomainError(f"s = {s} is outside Omega_f (r_f = {dom.r_f:g}, cut on the negative axis)")
    k = _nonneg_integer(z)
    if k is not None and sys.p_numbers.is_exact and k <= sys.p_numbers.order:
        return _exact_polynomial_value(sys.p_numbers.coeffs, k, s)
    return complex(gen_power_array(sys.p_array, np.asarray([s]), z, dom.r_f, cfg)[0])


def _exact_polynomial_value(p, k: int, s: complex) -> complex:
    """``sum_n binom(k,n) P_n s^(k-n)`` in rational arithmetic on the binary value of ``s``.

    The float sum cancels badly when ``|s|`` is near ``r_f``; this one is
    correctly rounded.
    """
    re, im = Fraction(s.real), Fraction(s.imag)
    acc_re, acc_im = Fraction(0), Fraction(0)
    # Horner in s over the coefficients binom(k,n) P_n of s^(k-n)
    for n in range(k + 1):
        c = math.comb(k, n) * p[n]
        acc_re, acc_im = acc_re * re - acc_im * im + c, acc_re * im + acc_im * re
    return complex(float(acc_re), float(acc_im))


def gen_power_mellin(sys, s, w, quad: QuadratureSpec | None = None) -> complex:
    """``s^(-w,f)`` from ``(1/Gamma(w)) int_0^inf t^(w-1) e^(-st) p_f(-t) dt``.

    Needs ``Re w > 0``, ``Re s > r_f`` and a closed-form ``p_f``.
    """
    quad = quad or DEFAULT_QUAD
    s = as_complex(s)
    w = as_complex(w)
    if w.real <= 0:
        raise DomainError("the Mellin form needs Re(w) > 0")
    if s.real <= sys.domain.r_f:
        raise DomainError(f"the Mellin form needs Re(s) > r_f = {sys.domain.r_f:g}")
    if sys.f.p_closed_form is None:
        raise DomainError(f"{sys.f.name} has no closed-form p_f")
    f = sys.f

    def integrand(t):
        t = np.asarray(t, dtype=float)
        return np.exp((w - 1.0) * np.log(t) - s * t) * f.evaluate_p(-t)

    res = integrate_semi_infinite(integrand, 0.0, quad, endpoint_exponent=w.real - 1.0)
    return res.value / complex_gamma(w)


def principal_power(s: complex, z: complex) -> complex:
    return cmath.exp(z * cmath.log(s))
