from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcfn.appell import (
    Polynomial,
    SmoothFunctionBundle,
    c_from_p,
    c_poly,
    euler_maclaurin,
    faulhaber,
    faulhaber_brute_force,
    faulhaber_second_form,
    multiplication_check,
    numeric_system,
    p_from_c,
    p_poly,
    poly_eval,
    system,
)
from lcfn.errors import DomainError, TruncationError
from lcfn.numerics import QuadratureSpec
from lcfn.verify import appell_identity_cases, random_rational_system, reflected
from oracles import bernoulli_akiyama_tanigawa, bernoulli_poly

F = Fraction


def poly(*coeffs):
    return Polynomial(list(coeffs))


class TestPolynomial:
    def test_trim(self):
        assert poly(1, 2, 0, 0).coeffs == (1, 2)
        assert poly(0, 0).degree == -1

    def test_arithmetic(self):
        p = poly(1, 1)
        assert p * p == poly(1, 2, 1)
        assert p - p == poly(0)
        assert 3 - p == poly(2, -1)

    def test_calculus(self):
        p = poly(1, 2, 3)
        assert p.derivative() == poly(2, 6)
        assert p.antiderivative().derivative() == p

    def test_compose(self):
        # p(2x + 1) for p = x^2
        assert poly(0, 0, 1).compose_affine(2, 1) == poly(1, 4, 4)

    @pytest.mark.parametrize("p,x,value", [(poly(0), F(7), 0), (poly(0, 0, 0, 1), 2, 8)])
    def test_eval(self, p, x, value):
        assert poly_eval(p, x) == value


class TestCPolynomials:
    def test_low_degrees(self, beta_half):
        c = beta_half.c_numbers
        assert c_poly(beta_half, 0) == poly(c[0])
        assert c_poly(beta_half, 1) == poly(c[1], c[0])

    def test_beta_gives_bernoulli_polynomials(self, beta):
        assert c_poly(beta, 2) == poly(F(1, 6), -1, 1)
        for n in range(12):
            for x in (F(0), F(1, 3), F(-5, 2)):
                assert c_poly(beta, n)(x) == bernoulli_poly(n, x)

    def test_value_at_zero(self, beta):
        assert poly_eval(c_poly(beta, 2), 0) == F(1, 6)

    def test_truncation(self):
        with pytest.raises(TruncationError):
            c_poly(system("beta", 5), 6)


class TestPPolynomials:
    def test_beta_monomials(self, beta):
        for n in range(21):
            assert p_poly(beta, n) == Polynomial([0] * n + [1])

    def test_beta_a_shift(self):
        a = F(1, 3)
        sys_ = system("beta_a", 10, a=a)
        assert p_poly(sys_, 2) == poly((a - 1) ** 2, 2 * (a - 1), 1)

    def test_constant(self, beta_half):
        assert p_poly(beta_half, 0) == poly(beta_half.c_numbers[0])

    def test_conversions(self, beta):
        for n in range(10):
            assert p_from_c(beta, n) == p_poly(beta, n)
            assert c_from_p(beta, n) == c_poly(beta, n)


class TestExactIdentities:
    """Every polynomial identity on a handful of systems; the acceptance suite covers fifty."""

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_random_system(self, seed):
        sys_ = random_rational_system(random.Random(seed))
        failures = [(p, l) for p, l, ok in appell_identity_cases(sys_, 12) if not ok]
        assert not failures

    def test_builtins(self, beta, beta_half):
        for sys_ in (beta, beta_half):
            assert all(ok for _, _, ok in appell_identity_cases(sys_, 16))

    def test_reflection_of_beta(self, beta):
        # B_n(1 - x) = (-1)^n B_n(x): beta is its own underline
        assert c_poly(beta.underline, 7) == c_poly(beta, 7)

    @given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=8, max_size=8))
    @settings(max_examples=40, deadline=None)
    def test_fundamental_identity(self, coeffs):
        from lcfn.series import EgfSeries, GenFunction
        from lcfn.appell import AppellSystem

        sys_ = AppellSystem(GenFunction("h", EgfSeries.exact(coeffs)))
        for n in range(1, 8):
            cn = c_poly(sys_, n)
            assert cn.compose_affine(1, 1) - cn == p_poly(sys_, n - 1) * n


class TestFaulhaber:
    def test_squares(self, beta):
        assert faulhaber(beta, F(0), 2, 4) == 14

    def test_single_term(self, beta_half):
        assert faulhaber(beta_half, F(2, 3), 3, 1) == p_poly(beta_half, 3)(F(2, 3))

    def test_beta_a_linear(self):
        a = F(1, 3)
        assert faulhaber(system("beta_a", 8, a=a), F(0), 1, 3) == 3 * a

    @pytest.mark.parametrize("n", [0, 3, 7])
    @pytest.mark.parametrize("m", [1, 4, 8])
    @pytest.mark.parametrize("x", [F(0), F(1, 2), F(-2)])
    def test_three_forms(self, beta_half, n, m, x):
        a = faulhaber(beta_half, x, n, m)
        assert a == faulhaber_second_form(beta_half, x, n, m) == faulhaber_brute_force(beta_half, x, n, m)

    def test_bad_m(self, beta):
        with pytest.raises(DomainError):
            faulhaber(beta, F(0), 2, 0)


class TestMultiplication:
    @pytest.mark.parametrize("n", [0, 1, 5, 10])
    @pytest.mark.parametrize("m", [1, 2, 5])
    def test_raabe(self, beta, n, m):
        x = F(2, 7)
        lhs = sum(bernoulli_poly(n, (x + k) / m) for k in range(m))
        check = multiplication_check(beta, n, m, x)
        assert check.holds
        assert check.lhs == lhs == F(m) ** (1 - n) * bernoulli_poly(n, x)

    def test_random(self):
        sys_ = random_rational_system(random.Random(11))
        assert all(multiplication_check(sys_, n, m, F(-2)).holds for n in range(11) for m in range(1, 6))


def _exp_bundle(order):
    return SmoothFunctionBundle([lambda x, k=k: (-1) ** k * np.exp(-x) for k in range(order + 1)])


class TestEulerMaclaurin:
    def test_squares_exact(self, beta):
        g = SmoothFunctionBundle([lambda x: x**2, lambda x: 2 * x, lambda x: 2 + 0 * x, lambda x: 0 * x])
        r = euler_maclaurin(beta, g, 0, 3, 3)
        assert abs(r.sum_value - 14) < 1e-12
        assert r.remainder == 0
        assert r.direct_sum == 14

    def test_constant(self, beta_half):
        g = SmoothFunctionBundle([lambda x: 0 * x + 2.5] + [lambda x: 0 * x] * 3)
        assert abs(euler_maclaurin(beta_half, g, 2, 9, 3).sum_value - 8 * 2.5) < 1e-12

    @pytest.mark.parametrize("name,params", [("beta", {}), ("beta_a", {"a": F(1, 2)}), ("exp_c", {"c": F(1, 3)})])
    def test_exponential(self, name, params):
        r = euler_maclaurin(system(name, 16, **params), _exp_bundle(6), 0, 10, 6)
        assert r.abs_diff < 1e-10

    def test_single_point(self, beta):
        r = euler_maclaurin(beta, _exp_bundle(3), 4, 4, 3)
        assert abs(r.sum_value - math.exp(-4)) < 1e-14

    def test_needs_nonzero_constant_term(self):
        from lcfn.series import EgfSeries, GenFunction
        from lcfn.appell import AppellSystem

        sys_ = AppellSystem(GenFunction("z", EgfSeries.exact([0, 1, 1, 1, 1])))
        with pytest.raises(DomainError):
            euler_maclaurin(sys_, _exp_bundle(3), 0, 2, 3)

    def test_needs_derivatives(self, beta):
        with pytest.raises(DomainError):
            euler_maclaurin(beta, _exp_bundle(2), 0, 2, 3)

    def test_reflected_system(self):
        sys_ = reflected(system("beta_a", 16, a=F(1, 3)))
        r = euler_maclaurin(sys_, _exp_bundle(5), 1, 7, 5, QuadratureSpec(tol=1e-14))
        assert r.abs_diff < 1e-12


class TestNumericSystem:
    def test_order(self):
        assert numeric_system("beta").order == 200
