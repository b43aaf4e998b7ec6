"""Named invariant suites run by ``lcfn verify`` and reused by the tests."""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .appell import (
    AppellSystem,
    c_from_p,
    c_poly,
    faulhaber,
    faulhaber_brute_force,
    faulhaber_second_form,
    multiplication_check,
    numeric_system,
    p_from_c,
    p_poly,
    system,
)
from .errors import DomainError
from .genpower import PowerConfig, gen_power, gen_power_mellin
from .lcfun import (
    ContourSpec,
    fc_function,
    hankel_I,
    hankel_J,
    j_radius_band,
    lc_continued,
    lc_formula_check,
    lc_mellin,
    lc_series,
    lc_special_value,
    residue_at_one,
    residue_estimate,
)
from .numerics import complex_gamma, hurwitz_zeta
from .series import EXACT, EgfSeries, GenFunction, egf_scale_arg

__all__ = [
    "Check",
    "SuiteReport",
    "SUITES",
    "RANDOMIZED",
    "random_rational_system",
    "reference_systems",
    "reflected",
    "run_suite",
]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))


def random_rational_system(rng: random.Random, order: int = 21, name: str = "random") -> AppellSystem:
    """A system whose C-numbers are small random rationals with ``C_0 != 0``."""
    coeffs = []
    for n in range(order + 1):
        num = rng.randint(-9, 9)
        if n == 0 and num == 0:
            num = 1
        coeffs.append(Fraction(num, rng.randint(1, 6)))
    return AppellSystem(GenFunction(name=name, series=EgfSeries(EXACT, tuple(coeffs))))


def reference_systems(order: int = 21) -> list[AppellSystem]:
    return [
        system("beta", order),
        system("beta_a", order, a=Fraction(1, 2)),
        system("beta_a", order, a=Fraction(1, 3)),
    ]


def reflected(sys: AppellSystem) -> AppellSystem:
    """The system of ``t -> f(-t)``."""
    return AppellSystem(GenFunction(name=f"bar({sys.f.name})", series=egf_scale_arg(sys.c_numbers, -1)))


def _systems(seed: int, count: int) -> list[AppellSystem]:
    rng = random.Random(seed)
    return reference_systems() + [random_rational_system(rng, name=f"random#{i}") for i in range(count)]


def _first_failure(results) -> str:
    for label, ok in results:
        if not ok:
            return f"fails at {label}"
    return ""


def _record(report: SuiteReport, name: str, results) -> None:
    results = list(results)
    detail = _first_failure(results) or f"{len(results)} cases"
    report.add(name, all(ok for _, ok in results), detail)


# --------------------------------------------------------------------------
# appell-exact
# --------------------------------------------------------------------------


def appell_identity_cases(sys: AppellSystem, n_max: int = 16):
    """Yield ``(property, label, holds)`` for the exact polynomial identities."""
    one = Fraction(1)
    bar = reflected(sys)
    under = sys.underline
    ys = (Fraction(0), Fraction(1, 2), Fraction(-3))
    for n in range(n_max + 1):
        cn = c_poly(sys, n)
        pn = p_poly(sys, n)
        label = f"{sys.f.name}, n={n}"
        if n >= 1:
            yield "derivative", label, cn.derivative() == c_poly(sys, n - 1) * n
            yield "p-derivative", label, pn.derivative() == p_poly(sys, n - 1) * n
        anti = cn.antiderivative()
        over_unit = anti.compose_affine(one, one) - anti
        cn1 = c_poly(sys, n + 1)
        yield "integral", label, over_unit == (cn1.compose_affine(one, one) - cn1) * Fraction(1, n + 1)
        yield "integral-is-p", label, over_unit == pn
        yield "reflection-bar", label, cn.compose_affine(-one, 0) == c_poly(bar, n) * (-1) ** n
        yield "reflection-underline", label, cn.compose_affine(-one, one) == c_poly(under, n) * (-1) ** n
        for y in ys:
            expanded = sum((c_poly(sys, k) * (math.comb(n, k) * y ** (n - k)) for k in range(n + 1)), c_poly(sys, 0) * 0)
            yield "translation", f"{label}, y={y}", cn.compose_affine(one, y) == expanded
        yield "p-from-c", label, p_from_c(sys, n) == pn
        yield "c-from-p", label, c_from_p(sys, n) == cn
        if n >= 1:
            yield "fundamental", label, cn.compose_affine(one, one) - cn == p_poly(sys, n - 1) * n
            yield "value-at-one", label, cn(one) == sys.c_numbers[n] + n * sys.p_numbers[n - 1]


def faulhaber_cases(sys: AppellSystem, n_max: int = 12, m_max: int = 8):
    for n in range(n_max + 1):
        for m in range(1, m_max + 1):
            for x in (Fraction(0), Fraction(1, 2), Fraction(-2)):
                a = faulhaber(sys, x, n, m)
                b = faulhaber_second_form(sys, x, n, m)
                c = faulhaber_brute_force(sys, x, n, m)
                yield f"{sys.f.name}, n={n}, m={m}, x={x}", a == b == c


def multiplication_cases(sys: AppellSystem, n_max: int = 10, m_max: int = 5):
    for n in range(n_max + 1):
        for m in range(1, m_max + 1):
            for x in (Fraction(0), Fraction(1, 2), Fraction(-2)):
                yield f"{sys.f.name}, n={n}, m={m}, x={x}", multiplication_check(sys, n, m, x).holds


def suite_appell_exact(seed: int, count: int = 50) -> SuiteReport:
    report = SuiteReport("appell-exact")
    systems = _systems(seed, count)
    grouped: dict[str, list] = {}
    for sys in systems:
        for prop, label, ok in appell_identity_cases(sys):
            grouped.setdefault(prop, []).append((label, ok))
    for prop, results in grouped.items():
        _record(report, prop, results)
    _record(report, "faulhaber", (r for sys in systems for r in faulhaber_cases(sys)))
    _record(report, "multiplication", (r for sys in systems for r in multiplication_cases(sys)))
    return report


# --------------------------------------------------------------------------
# genpower-cross
# --------------------------------------------------------------------------


def _numeric_refs() -> list[AppellSystem]:
    return [
        numeric_system("beta"),
        numeric_system("beta_a", a=Fraction(1, 2)),
        numeric_system("beta_a", a=Fraction(1, 3)),
        numeric_system("exp_c", c=Fraction(1, 2)),
    ]


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def suite_genpower_cross(seed: int | None = None) -> SuiteReport:
    report = SuiteReport("genpower-cross")
    mellin, integer, scaling, under = [], [], [], []
    for sys in _numeric_refs():
        r_f = sys.domain.r_f
        for ds in (0.6, 1.5 + 1j, 3.0 - 2j):
            s = r_f + ds
            for w in (0.5, 1 + 1j, 2.0, 3 - 0.5j):
                err = _rel(gen_power(sys, s, -w), gen_power_mellin(sys, s, w))
                mellin.append((f"{sys.f.name}, s={s}, w={w}", err <= 1e-8))
            for k in range(6):
                exact = sum(float(c) * complex(s) ** j for j, c in enumerate(p_poly(sys, k).coeffs))
                integer.append((f"{sys.f.name}, s={s}, z={k}", _rel(gen_power(sys, s, k), exact) <= 1e-13))
            for z in (-1.5 + 0.5j, 0.7):
                direct = gen_power(sys.underline, s, z)
                series = _underline_direct(sys, s, z)
                under.append((f"{sys.f.name}, s={s}, z={z}", _rel(direct, series) <= 1e-12))
        for alpha in (0.5, 1 + 1j):
            scaled = sys.alpha(alpha, order=32)
            for beta in (2.0, 1 + 1j):
                ratio = sys.alpha(alpha / beta, order=32)
                s = complex(3 * abs(alpha) * (r_f + 1) + 1, 0.5)
                if (s / beta).real <= 0:
                    continue
                z = -0.8 + 0.3j
                lhs = gen_power(scaled, s, z)
                rhs = cmath.exp(z * cmath.log(beta)) * gen_power(ratio, s / beta, z)
                scaling.append((f"{sys.f.name}, alpha={alpha}, beta={beta}", _rel(lhs, rhs) <= 1e-10))
    _record(report, "series-vs-mellin", mellin)
    _record(report, "integer-termination", integer)
    _record(report, "scaling", scaling)
    _record(report, "underline-symmetry", under)
    return report


def _underline_direct(sys: AppellSystem, s, z) -> complex:
    """``sum binom(z,n) (-1)^n P_{f,n} s^(z-n)`` summed term by term until negligible."""
    s, z = complex(s), complex(z)
    acc, binom, last = 0j, 1 + 0j, math.inf
    for n, p in enumerate(sys.p_array):
        term = binom * (-1) ** n * p * s ** (-n)
        acc += term
        if abs(term) < 1e-18 * abs(acc) and n > 20:
            break
        binom *= (z - n) / (n + 1)
    return cmath.exp(z * cmath.log(s)) * acc


# --------------------------------------------------------------------------
# lcfun-cross
# --------------------------------------------------------------------------


def _lc_refs() -> list[AppellSystem]:
    return _numeric_refs()[:3]


def suite_lcfun_cross(seed: int | None = None) -> SuiteReport:
    report = SuiteReport("lcfun-cross")
    cross, cont, special, drift_i, drift_j = [], [], [], [], []
    for sys in _lc_refs():
        for sigma in (1.5, 2.0, 3.0):
            for y in (0.0, 1.0, 5.0):
                z = complex(sigma, y)
                err = _rel(lc_mellin(sys, z).value, lc_series(sys, z).value)
                cross.append((f"{sys.f.name}, z={z}", err <= 1e-8))
        for z in (1.2, 1.7 + 2j, 2.5, 2.9 - 1j):
            via_i = complex_gamma(1 - z) * hankel_I(sys, z).value
            cont.append((f"{sys.f.name}, z={z}", abs(via_i - lc_series(sys, z).value) <= 1e-7))
        exact_sys = system(_builtin_name(sys), 16, **_builtin_params(sys))
        for n in range(7):
            value = lc_special_value(exact_sys, n).exact
            got = lc_continued(sys, -n).value
            special.append((f"{sys.f.name}, n={n}", abs(got - float(value)) <= 1e-6))
        a = hankel_I(sys, 0.5 + 1j, ContourSpec(radius=0.5)).value
        b = hankel_I(sys, 0.5 + 1j, ContourSpec(radius=1.5)).value
        drift_i.append((sys.f.name, abs(a - b) <= 1e-9))
        lo, hi = j_radius_band(sys)
        ja = hankel_J(sys, -0.5, ContourSpec(radius=lo + 0.3 * (hi - lo))).value
        jb = hankel_J(sys, -0.5, ContourSpec(radius=lo + 0.7 * (hi - lo))).value
        drift_j.append((sys.f.name, abs(ja - jb) <= 1e-9))
    _record(report, "series-vs-mellin", cross)
    _record(report, "continuation-vs-series", cont)
    _record(report, "special-values", special)
    residues = []
    for sys in _lc_refs()[:2]:
        est = residue_estimate(sys)
        residues.append((sys.f.name, abs(est - float(residue_at_one(sys))) <= 1e-5))
    _record(report, "residue", residues)
    _record(report, "I-radius-independence", drift_i)
    _record(report, "J-radius-independence", drift_j)
    return report


def _builtin_name(sys: AppellSystem) -> str:
    return sys.f.name.split("(")[0]


def _builtin_params(sys: AppellSystem) -> dict:
    name = sys.f.name
    if name.startswith("beta_a("):
        return {"a": Fraction(name[len("beta_a("):-1])}
    if name.startswith("exp_c("):
        return {"c": Fraction(name[len("exp_c("):-1])}
    return {}


# --------------------------------------------------------------------------
# hurwitz-reduction and lc-formula
# --------------------------------------------------------------------------

HURWITZ_GRID = (
    -2.0, -1.5 + 1j, -0.7, -0.2 + 3j, 0.3, 0.5 + 0.5j,
    0.8 - 2j, 1.4, 1.6 + 1j, 2.0, 2.5 - 0.5j, 3.0 + 4j,
)


def suite_hurwitz_reduction(seed: int | None = None) -> SuiteReport:
    report = SuiteReport("hurwitz-reduction")
    for a in (Fraction(1), Fraction(1, 2), Fraction(1, 3)):
        sys = numeric_system("beta_a", a=a)
        results = []
        for z in HURWITZ_GRID:
            ref, _ = hurwitz_zeta(z, float(a))
            results.append((f"z={z}", abs(lc_continued(sys, z).value - ref) <= 1e-6 * max(1.0, abs(ref))))
        _record(report, f"a={a}", results)
    return report


def suite_lc_formula(seed: int | None = None) -> SuiteReport:
    report = SuiteReport("lc-formula")
    for name, params in (("beta", {}), ("beta_a", {"a": Fraction(1, 2)})):
        sys = numeric_system(name, **params)
        results = []
        for z in (-0.5, -1.5, -2.5):
            check = lc_formula_check(sys, z)
            results.append((f"z={z}", check.abs_diff <= 1e-6))
        _record(report, f"{sys.f.name}: formula", results)
        rotated = sys.alpha(2j * math.pi, order=32)
        lo, hi = j_radius_band(rotated.underline)
        fa = fc_function(rotated, -0.5, ContourSpec(radius=lo + 0.3 * (hi - lo)))
        fb = fc_function(rotated, -0.5, ContourSpec(radius=lo + 0.7 * (hi - lo)))
        report.add(f"{sys.f.name}: F radius independence", abs(fa - fb) <= 1e-9, f"drift {abs(fa - fb):.2e}")
    return report


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "appell-exact": suite_appell_exact,
    "genpower-cross": suite_genpower_cross,
    "lcfun-cross": suite_lcfun_cross,
    "hurwitz-reduction": suite_hurwitz_reduction,
    "lc-formula": suite_lc_formula,
}
RANDOMIZED = frozenset({"appell-exact"})


def run_suite(name: str, seed: int | None = None) -> SuiteReport:
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if name in RANDOMIZED:
        if seed is None:
            raise ValueError(f"suite {name} needs a seed")
        return SUITES[name](seed)
    return SUITES[name](seed)
