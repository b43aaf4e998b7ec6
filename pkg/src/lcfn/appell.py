"""C-polynomials, P-polynomials and the summation formulas built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, TruncationError
from .numerics import DEFAULT_QUAD, QuadratureSpec, integrate_interval
from .series import (
    APPROX,
    DEFAULT_ORDER,
    EXACT,
    NUMERIC_ORDER,
    EgfSeries,
    GenFunction,
    as_rational,
    bernoulli_numbers,
    builtin,
    f_alpha,
    underline,
)

__all__ = [
    "Polynomial",
    "AppellSystem",
    "SmoothFunctionBundle",
    "EulerMaclaurinResult",
    "MultiplicationCheck",
    "system",
    "c_poly",
    "p_poly",
    "poly_eval",
    "p_from_c",
    "c_from_p",
    "faulhaber",
    "faulhaber_second_form",
    "faulhaber_brute_force",
    "multiplication_check",
    "euler_maclaurin",
]


class Polynomial:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``x**k``.

    Trailing zeros are trimmed on construction, so equality of two
    polynomials is equality of their coefficient tuples.
    """

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Sequence, field: str = EXACT):
        if field == EXACT:
            cs = [as_rational(c) for c in coeffs] or [Fraction(0)]
            zero = Fraction(0)
        else:
            cs = [complex(c) for c in coeffs] or [0j]
            zero = 0j
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [zero]
        self.coeffs = tuple(cs)
        self.field = field

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r}, {self.field!r})"

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    def _wrap(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other], self.field)

    def __add__(self, other):
        other = self._wrap(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)], self.field)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial([c * other for c in self.coeffs], self.field)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out, self.field)

    __rmul__ = __mul__

    def __call__(self, x):
        acc = self.coeffs[-1] * 1
        for c in self.coeffs[-2::-1]:
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:], self.field)

    def antiderivative(self) -> "Polynomial":
        """The antiderivative vanishing at 0."""
        zero = Fraction(0) if self.field == EXACT else 0j
        return Polynomial([zero] + [c / (k + 1) for k, c in enumerate(self.coeffs)], self.field)

    def compose_affine(self, a, b) -> "Polynomial":
        """``x -> p(a x + b)``."""
        lin = Polynomial([b, a], self.field)
        acc = Polynomial([self.coeffs[-1]], self.field)
        for c in self.coeffs[-2::-1]:
            acc = acc * lin + c
        return acc


def poly_eval(p: Polynomial, x):
    """Horner evaluation."""
    return p(x)


@dataclass(frozen=True, eq=False)
class AppellSystem:
    """A generating function together with its C- and P-numbers."""

    f: GenFunction

    @property
    def field(self) -> str:
        return self.f.series.field

    @property
    def c_numbers(self) -> EgfSeries:
        return self.f.series

    @property
    def p_numbers(self) -> EgfSeries:
        return self.f.p_numbers

    @property
    def order(self) -> int:
        return self.f.series.order

    @cached_property
    def p_array(self) -> np.ndarray:
        """P-numbers as a complex array (for the floating-point evaluators)."""
        ps = self.p_numbers
        if ps.is_exact:
            return np.array([complex(float(c)) for c in ps.coeffs])
        return np.array(ps.coeffs, dtype=complex)

    @cached_property
    def domain(self):
        from .genpower import domain_info

        return domain_info(self)

    @cached_property
    def _polys(self) -> dict:
        # memo of C-/P-polynomials keyed by (kind, n); polynomials are immutable
        return {}

    @cached_property
    def underline(self) -> "AppellSystem":
        return AppellSystem(underline(self.f))

    def alpha(self, alpha, order: int | None = None) -> "AppellSystem":
        return AppellSystem(f_alpha(self.f, alpha, order))

    def _check(self, n: int, needed: int | None = None) -> None:
        if n < 0:
            raise DomainError("polynomial index must be non-negative")
        if (needed if needed is not None else n) > self.order:
            raise TruncationError(f"index {n} exceeds truncation order {self.order}")


def system(name: str, order: int = DEFAULT_ORDER, **params) -> AppellSystem:
    """Shortcut for ``AppellSystem(builtin(name, order, **params))``."""
    return AppellSystem(builtin(name, order, **params))


def numeric_system(name: str, **params) -> AppellSystem:
    """A builtin system truncated deep enough for the floating-point evaluators."""
    return AppellSystem(builtin(name, NUMERIC_ORDER, **params))


def _binomial_poly(n: int, numbers: EgfSeries) -> Polynomial:
    # sum_k binom(n, k) a_k x^(n-k), stored by ascending power of x
    coeffs = [math.comb(n, n - j) * numbers[n - j] for j in range(n + 1)]
    return Polynomial(coeffs, numbers.field)


def c_poly(sys: AppellSystem, n: int) -> Polynomial:
    """``C_{f,n}(x) = sum_k binom(n,k) C_{f,k} x^(n-k)``."""
    sys._check(n)
    key = ("c", n)
    if key not in sys._polys:
        sys._polys[key] = _binomial_poly(n, sys.c_numbers)
    return sys._polys[key]


def p_poly(sys: AppellSystem, n: int) -> Polynomial:
    """``P_{f,n}(x)``, the generalised power ``x^(n,f)``."""
    if n < 0 or n > sys.p_numbers.order:
        raise TruncationError(f"index {n} exceeds truncation order {sys.p_numbers.order}")
    key = ("p", n)
    if key not in sys._polys:
        sys._polys[key] = _binomial_poly(n, sys.p_numbers)
    return sys._polys[key]


def p_from_c(sys: AppellSystem, n: int) -> Polynomial:
    """P-polynomial rebuilt from C-polynomials: ``(1/(n+1)) sum binom(n+1,k) C_{f,k}(x)``."""
    sys._check(n)
    acc = Polynomial([0], sys.field)
    for k in range(n + 1):
        acc = acc + c_poly(sys, k) * math.comb(n + 1, k)
    return acc * (Fraction(1, n + 1) if sys.field == EXACT else 1.0 / (n + 1))


def c_from_p(sys: AppellSystem, n: int) -> Polynomial:
    """C-polynomial rebuilt from P-polynomials and Bernoulli numbers."""
    sys._check(n)
    b = bernoulli_numbers(n)
    acc = Polynomial([0], sys.field)
    for k in range(n + 1):
        coef = math.comb(n, k) * (b[k] if sys.field == EXACT else float(b[k]))
        acc = acc + p_poly(sys, n - k) * coef
    return acc


def _check_faulhaber(sys: AppellSystem, n: int, m: int) -> None:
    if m < 1:
        raise DomainError("the number of summands m must be at least 1")
    if n < 0:
        raise DomainError("n must be non-negative")
    sys._check(n + 1)


def faulhaber(sys: AppellSystem, x, n: int, m: int):
    """``sum_{j<m} (x+j)^(n,f)`` via ``(C_{f,n+1}(x+m) - C_{f,n+1}(x)) / (n+1)``."""
    _check_faulhaber(sys, n, m)
    c = c_poly(sys, n + 1)
    return (c(x + m) - c(x)) / (n + 1)


def faulhaber_second_form(sys: AppellSystem, x, n: int, m: int):
    """Same sum as :func:`faulhaber`, expanded in powers of ``m``."""
    _check_faulhaber(sys, n, m)
    acc = 0
    for k in range(n + 1):
        acc += math.comb(n + 1, k) * c_poly(sys, k)(x) * m ** (n + 1 - k)
    return acc / (n + 1)


def faulhaber_brute_force(sys: AppellSystem, x, n: int, m: int):
    if m < 1:
        raise DomainError("the number of summands m must be at least 1")
    p = p_poly(sys, n)
    return sum((p(x + j) for j in range(m)), 0)


@dataclass(frozen=True)
class MultiplicationCheck:
    lhs: object
    rhs: object

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def multiplication_check(sys: AppellSystem, n: int, m: int, x) -> MultiplicationCheck:
    """Both sides of ``sum_{k<m} C_{f,n}((x+k)/m) = m^(1-n) C_{f_(m),n}(x)``."""
    if m < 1:
        raise DomainError("m must be at least 1")
    sys._check(n)
    c = c_poly(sys, n)
    exact = sys.field == EXACT
    m_ = Fraction(m) if exact else float(m)
    lhs = sum((c((x + k) / m_) for k in range(m)), 0)
    scaled = sys.alpha(m if exact else complex(m), order=n)
    rhs = m_ ** (1 - n) * c_poly(scaled, n)(x)
    return MultiplicationCheck(lhs, rhs)


# --------------------------------------------------------------------------
# Euler-Maclaurin with C- and P-numbers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothFunctionBundle:
    """``derivatives[k]`` evaluates the k-th derivative of ``g``.

    Each callable takes a NumPy array and must be re-entrant.
    """

    derivatives: tuple[Callable[[np.ndarray], np.ndarray], ...]

    def __post_init__(self):
        object.__setattr__(self, "derivatives", tuple(self.derivatives))

    @property
    def order(self) -> int:
        return len(self.derivatives) - 1

    def __call__(self, k: int, x):
        x = np.asarray(x, dtype=float)
        return np.asarray(self.derivatives[k](x))


@dataclass(frozen=True)
class EulerMaclaurinResult:
    sum_value: complex
    remainder: complex
    direct_sum: complex

    @property
    def abs_diff(self) -> float:
        return abs(self.sum_value - self.direct_sum)


def euler_maclaurin(
    sys: AppellSystem,
    g: SmoothFunctionBundle,
    m: int,
    n: int,
    N: int,
    quad: QuadratureSpec | None = None,
) -> EulerMaclaurinResult:
    """Right-hand side of the Euler-Maclaurin formula written with C/P-numbers.

    The remainder integrand ``C_{f,N}(x - floor x) g^(N)(x)`` is integrated
    one unit interval at a time, where it is smooth.
    """
    quad = quad or DEFAULT_QUAD
    if N < 2:
        raise DomainError("N must be at least 2")
    if g.order < N:
        raise DomainError(f"g provides derivatives up to order {g.order}, need {N}")
    if n < m:
        raise DomainError("need m <= n")
    sys._check(N)
    C = [complex(float(c)) if sys.field == EXACT else c for c in sys.c_numbers.coeffs[: N + 1]]
    P = [complex(float(c)) if sys.p_numbers.is_exact else c for c in sys.p_numbers.coeffs[:N]]
    c0 = C[0]
    if c0 == 0:
        raise DomainError("the formula needs f(0) != 0")

    def d(k, x):
        return complex(np.asarray(g(k, np.asarray([float(x)])))[0])

    integral = sum(
        (integrate_interval(lambda x: g(0, x), k, k + 1, quad).value for k in range(m, n)),
        0j,
    )
    c1_at_1 = C[1] + C[0]
    total = integral + (c1_at_1 * d(0, m) - C[1] * d(0, n)) / c0
    ks = np.arange(m + 1, n + 1, dtype=float)
    for r in range(2, N + 1):
        sign = -1.0 if r % 2 else 1.0
        total += sign * C[r] / math.factorial(r) * (d(r - 1, n) - d(r - 1, m)) / c0
        if ks.size:
            inner = complex(np.sum(g(r - 1, ks)))
            total += sign * P[r - 1] / math.factorial(r - 1) * inner / c0

    cN = c_poly(sys, N)
    cN_coeffs = [complex(float(c)) if sys.field == EXACT else c for c in cN.coeffs]

    def periodic_c(x, k):
        u = x - k
        acc = np.full_like(u, cN_coeffs[-1], dtype=complex)
        for c in cN_coeffs[-2::-1]:
            acc = acc * u + c
        return acc

    rem_int = 0j
    for k in range(m, n):
        rem_int += integrate_interval(lambda x, k=k: periodic_c(x, k) * g(N, x), k, k + 1, quad).value
    sign = -1.0 if (N + 1) % 2 else 1.0
    remainder = sign * rem_int / (c0 * math.factorial(N))
    total += remainder

    direct = complex(np.sum(g(0, np.arange(m, n + 1, dtype=float))))
    return EulerMaclaurinResult(total, remainder, direct)
