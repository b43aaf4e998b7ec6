from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcfn.errors import DomainError, PoleError, QuadratureError
from lcfn.numerics import (
    QuadratureSpec,
    complex_gamma,
    hurwitz_zeta,
    integrate_circle,
    integrate_hankel,
    integrate_interval,
    integrate_semi_infinite,
)
from oracles import gamma, hurwitz


class TestGamma:
    @pytest.mark.parametrize("z,value", [(1, 1), (5, 24), (0.5, math.sqrt(math.pi))])
    def test_values(self, z, value):
        assert complex_gamma(z) == pytest.approx(value, rel=1e-13)

    def test_reflection_point(self):
        z = 0.3 + 0.7j
        assert abs(complex_gamma(z) * complex_gamma(1 - z) * cmath.sin(math.pi * z) / math.pi - 1) < 1e-12

    @given(
        st.floats(-5, 5).filter(lambda x: abs(x - round(x)) > 0.05),
        st.floats(-10, 10),
    )
    @settings(max_examples=100)
    def test_reflection_strip(self, x, y):
        z = complex(x, y)
        assert abs(complex_gamma(z) * complex_gamma(1 - z) * cmath.sin(math.pi * z) / math.pi - 1) < 1e-12

    @pytest.mark.parametrize("z", [3.3 - 2j, -4.5 + 0.1j, 12 + 7j, 0.01])
    def test_against_mpmath(self, z):
        assert abs(complex_gamma(z) / gamma(z) - 1) < 1e-12

    @pytest.mark.parametrize("z", [0, -1, -7])
    def test_poles(self, z):
        with pytest.raises(PoleError):
            complex_gamma(z)


class TestSemiInfinite:
    def test_gamma_two(self):
        assert integrate_semi_infinite(lambda t: t * np.exp(-t)).value == pytest.approx(1, rel=1e-13)

    def test_gamma_integral(self):
        z, s = 1.5 + 0.5j, 2.0
        r = integrate_semi_infinite(lambda t: np.exp((z - 1) * np.log(t) - s * t), endpoint_exponent=0.5)
        assert abs(r.value - complex_gamma(z) * s**-z) < 1e-10

    def test_bose_integral(self):
        r = integrate_semi_infinite(lambda t: t / np.expm1(t))
        assert r.value == pytest.approx(math.pi**2 / 6, rel=1e-12)

    @pytest.mark.parametrize("sigma", [0.5, 1.0, 2.5, 4.0])
    @pytest.mark.parametrize("s", [1.0, 3 + 2j, 5.0])
    def test_gamma_grid(self, sigma, s):
        z = sigma + 0.7j
        r = integrate_semi_infinite(lambda t: np.exp((z - 1) * np.log(t) - s * t), endpoint_exponent=sigma - 1)
        ref = complex_gamma(z) * cmath.exp(-z * cmath.log(s))
        assert abs(r.value - ref) <= 1e-9 * abs(ref)

    def test_no_decay(self):
        with pytest.raises(QuadratureError):
            integrate_semi_infinite(lambda t: 1 / (1 + t))

    def test_bad_exponent(self):
        with pytest.raises(DomainError):
            integrate_semi_infinite(lambda t: t, endpoint_exponent=-1)


class TestCircle:
    @pytest.mark.parametrize(
        "h,value",
        [(lambda s, th: 1 / s, 1), (lambda s, th: np.exp(s) / s, 1), (lambda s, th: 1 / s**2, 0)],
    )
    def test_residues(self, h, value):
        assert abs(integrate_circle(h, 1.0).value - value) < 1e-14

    def test_spectral(self):
        # trapezoid error on e^s/s drops far faster than any power of n
        def err(n):
            th = -math.pi + 2 * math.pi * np.arange(n) / n
            s = np.exp(1j * th)
            return abs(np.mean(np.exp(s)) - 1)

        assert err(8) <= err(4) / 10
        assert err(16) <= err(8) / 10

    def test_radius(self):
        with pytest.raises(DomainError):
            integrate_circle(lambda s, th: s, 0)


class TestHankel:
    def test_reciprocal_gamma(self):
        # (1/2 pi i) int e^s s^(-z) ds = 1/Gamma(z); rays carry t^(-z) e^(-t)
        for z in (1.0, 0.5, 2.5 + 1j):
            w = 1 - z  # integrand s^(w-1) e^s
            res = integrate_hankel(
                lambda t: np.exp((w - 1) * np.log(t) - t),
                lambda s, th: np.exp((w - 1) * (0.0 + 1j * th) + s),
                1.0,
                w,
            )
            assert abs(res.value - 1 / complex_gamma(z)) < 1e-12


class TestInterval:
    def test_polynomial(self):
        assert integrate_interval(lambda x: x**3, 0, 2).value == pytest.approx(4)

    def test_oscillatory(self):
        assert integrate_interval(lambda x: np.cos(20 * x), 0, 1).value == pytest.approx(math.sin(20) / 20, abs=1e-14)


class TestHurwitz:
    @pytest.mark.parametrize("s", [2, 0.5, -1.5 + 2j, 3 + 10j])
    @pytest.mark.parametrize("a", [1.0, 0.5, 1 / 3, 32.0])
    def test_against_mpmath(self, s, a):
        value, _ = hurwitz_zeta(s, a)
        ref = hurwitz(s, a)
        assert abs(value - ref) <= 1e-12 * max(1, abs(ref))

    def test_pole(self):
        with pytest.raises(PoleError):
            hurwitz_zeta(1, 0.5)
