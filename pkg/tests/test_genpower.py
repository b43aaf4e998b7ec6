from __future__ import annotations

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcfn.appell import p_poly
from lcfn.errors import DomainError, ToleranceError
from lcfn.genpower import (
    DomainInfo,
    PowerConfig,
    binom_complex,
    domain_info,
    estimate_radius,
    gen_power,
    gen_power_mellin,
)
from lcfn.series import EgfSeries

F = Fraction


def _poly_at(sys_, n, s):
    s = complex(s)
    re, im = F(s.real), F(s.imag)
    ar, ai = F(0), F(0)
    for c in reversed(p_poly(sys_, n).coeffs):
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return complex(float(ar), float(ai))


class TestRadius:
    def test_beta_infinite(self):
        assert estimate_radius(EgfSeries.exact([1] + [0] * 20)) == (math.inf, "estimated")

    def test_geometric(self):
        rho, src = estimate_radius(EgfSeries.exact([F(-1, 2) ** k for k in range(40)]))
        assert rho == pytest.approx(2)
        assert src == "estimated"

    def test_three_to_the_k(self):
        rho, _ = estimate_radius([3**k for k in range(32)])
        assert abs(rho - 1 / 3) < 0.05 / 3

    def test_hint_wins(self):
        assert estimate_radius([1] * 20, radius_hint=F(2)) == (F(2), "exact_hint")

    def test_too_short(self):
        with pytest.raises(DomainError):
            estimate_radius([1] * 10)

    def test_domain_info(self, nbeta, nthird):
        assert domain_info(nbeta) == DomainInfo(math.inf, 0.0, 1, "exact_hint")
        assert nthird.domain.n_f == 1
        assert nthird.domain.r_f == pytest.approx(2 / 3)

    def test_floor(self):
        assert DomainInfo.from_r(2.3).n_f == 3
        assert DomainInfo.from_radius(F(1, 2)).n_f == 3


class TestBinomial:
    @pytest.mark.parametrize("z,n,value", [(3.7, 0, 1), (5, 2, 10), (-1.5, 3, -35 / 16)])
    def test_values(self, z, n, value):
        assert binom_complex(z, n) == pytest.approx(value)

    @given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), st.integers(0, 12))
    @settings(max_examples=80)
    def test_product_formula(self, z, n):
        direct = math.prod([z - k for k in range(n)]) / math.factorial(n)
        assert abs(binom_complex(z, n) - direct) <= 1e-9 * max(1, abs(direct))


class TestGenPower:
    @pytest.mark.parametrize("s", [2.0, 0.3 + 4j, 7 - 1j])
    @pytest.mark.parametrize("z", [-1.5, 0.25 + 2j, 3.5])
    def test_beta_is_plain_power(self, nbeta, s, z):
        assert gen_power(nbeta, s, z) == pytest.approx(cmath.exp(z * cmath.log(s)), rel=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 5])
    @pytest.mark.parametrize("z", [-2.5, 0.7 + 1j])
    def test_beta_a_at_integers(self, nthird, n, z):
        assert gen_power(nthird, n, z) == pytest.approx((n - 2 / 3) ** z, rel=1e-13)

    @pytest.mark.parametrize("k", range(7))
    def test_integer_exponent_terminates(self, nhalf, k):
        s = 1.3 - 0.4j
        assert abs(gen_power(nhalf, s, k) - _poly_at(nhalf, k, s)) <= 1e-13 * max(1, abs(_poly_at(nhalf, k, s)))

    def test_integer_exponent_float_path(self, nhalf):
        from lcfn.genpower import gen_power_array

        s = 3.0 + 1j
        got = gen_power_array(nhalf.p_array, [s], 4, nhalf.domain.r_f)[0]
        assert abs(got - _poly_at(nhalf, 4, s)) <= 1e-13 * abs(_poly_at(nhalf, 4, s))

    @pytest.mark.parametrize("s", [-1.0, 0.0, 0.5])
    def test_outside_domain(self, nhalf, s):
        with pytest.raises(DomainError):
            gen_power(nhalf, s, 0.5)

    def test_runs_out_of_terms(self):
        from lcfn.appell import system

        with pytest.raises(ToleranceError):
            gen_power(system("beta_a", 16, a=F(1, 3)), 0.7, -0.5)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            PowerConfig(r0_fraction=1.0)


class TestMellin:
    def test_beta(self, nbeta):
        assert gen_power_mellin(nbeta, 3, 2) == pytest.approx(1 / 9, rel=1e-12)

    def test_beta_half(self, nhalf):
        assert gen_power_mellin(nhalf, 2, 1.5) == pytest.approx(1.5**-1.5, rel=1e-12)

    @pytest.mark.parametrize("s", [1.5, 2 + 1j, 4 - 3j])
    @pytest.mark.parametrize("w", [0.5, 1 + 1j, 3])
    def test_matches_series(self, nthird, s, w):
        a = gen_power(nthird, s, -w)
        assert abs(a - gen_power_mellin(nthird, s, w)) <= 1e-9 * abs(a)

    def test_exp_c(self):
        from lcfn.appell import numeric_system

        sys_ = numeric_system("exp_c", c=F(1, 2))
        s, w = 3.0, 2.5
        telescoped = ((s + 0.5) ** (1 - w) - (s + 1.5) ** (1 - w)) / (w - 1)
        assert gen_power(sys_, s, -w) == pytest.approx(telescoped, rel=1e-12)
        assert gen_power_mellin(sys_, s, w) == pytest.approx(telescoped, rel=1e-10)

    @pytest.mark.parametrize("s,w", [(2, 0), (2, -1), (0.5, 1)])
    def test_preconditions(self, nhalf, s, w):
        with pytest.raises(DomainError):
            gen_power_mellin(nhalf, s, w)


class TestIdentities:
    @pytest.mark.parametrize("alpha", [0.5, 1 + 1j])
    @pytest.mark.parametrize("scale", [2.0, 1 + 1j])
    def test_scaling(self, nhalf, alpha, scale):
        s, z = 4.0 + 0.5j, -0.8 + 0.3j
        lhs = gen_power(nhalf.alpha(alpha, order=24), s, z)
        rhs = cmath.exp(z * cmath.log(scale)) * gen_power(nhalf.alpha(alpha / scale, order=24), s / scale, z)
        assert abs(lhs - rhs) <= 1e-10 * abs(lhs)

    def test_underline_flips_signs(self, nhalf):
        # P-numbers of the underline are (-1/2)^n negated termwise: (+1/2)^n, i.e. (s + 1/2)^z
        s, z = 2.0 + 1j, -1.3 + 0.2j
        assert gen_power(nhalf.underline, s, z) == pytest.approx(cmath.exp(z * cmath.log(s + 0.5)), rel=1e-13)
