import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bessel_harmonic import specfun as sf
from bessel_harmonic.errors import (
    ConditioningError,
    DomainError,
    OverflowSignal,
    PoleError,
)


class TestBesselI:
    def test_half_integer_closed_form(self):
        # I_{-1/2}(z) = sqrt(2/(pi z)) cosh z
        v = sf.bessel_i(-0.5, 1.0)
        assert v.value == pytest.approx(1.2312002145929674465, rel=1e-14)
        assert v.regime == "series"

    def test_small_argument_limit(self):
        # z^-nu I_nu(z) -> 1/(2^nu Gamma(nu+1))
        for nu in (-0.5, 0.0, 0.7, 3.0):
            z = 1e-6
            got = sf.bessel_i(nu, z).value * z ** (-nu)
            lim = 1.0 / (2.0 ** nu * math.gamma(nu + 1.0))
            assert got == pytest.approx(lim, rel=1e-6)

    def test_series_oracle_value(self):
        # frozen: ascending series summed to convergence at 30 digits
        assert sf.bessel_i(0.5, 3.0).value == pytest.approx(
            4.6148229034076009479, rel=1e-12)

    def test_scaled_cosh_identity(self):
        # e^-z I_{-1/2}(z) = sqrt(1/(2 pi z)) (1 + e^-2z)
        v = sf.bessel_i_scaled(-0.5, 5.0)
        assert v.value == pytest.approx(0.17842051152623320057, rel=1e-13)

    def test_scaled_vanishes_at_origin_for_positive_order(self):
        assert sf.bessel_i_scaled(0.5, 0.0).value == 0.0
        assert sf.bessel_i_scaled(0.5, 1e-12).value == pytest.approx(0.0, abs=1e-6)

    def test_scaled_large_argument_band(self):
        # n=3 truncated expansion brackets the value within its first
        # omitted term; the limit is 1/sqrt(2 pi z)
        v = sf.bessel_i_scaled(2.0, 50.0)
        assert v.value == pytest.approx(0.05432190169173838, rel=1e-12)
        assert abs(v.value - 0.05432189873071203) < 5e-9  # n=3 band
        assert v.regime == "asymptotic"

    def test_overflow_signal(self):
        with pytest.raises(OverflowSignal):
            sf.bessel_i(1.0, 800.0)

    def test_order_domain(self):
        with pytest.raises(DomainError):
            sf.bessel_i(-1.5, 1.0)

    def test_recurrence(self):
        # I_{nu-1}(z) - I_{nu+1}(z) = (2 nu / z) I_nu(z)
        for nu in (0.3, 1.0, 2.5):
            for z in np.geomspace(0.1, 50.0, 12):
                im = sf.bessel_i_scaled(nu - 1.0, z).value
                i0 = sf.bessel_i_scaled(nu, z).value
                ip = sf.bessel_i_scaled(nu + 1.0, z).value
                assert im - ip == pytest.approx(2.0 * nu / z * i0,
                                                rel=1e-10, abs=1e-300)

    def test_derivative_identity_second_order(self):
        # d/dz (z^-nu I_nu) = z^-nu I_{nu+1}, via central differences
        nu, z = 0.8, 2.0

        def red(zz):
            return sf.bessel_i(nu, zz).value * zz ** (-nu)

        ref = sf.bessel_i(nu + 1.0, z).value * z ** (-nu)
        errs = []
        for h in (1e-2, 5e-3):
            errs.append(abs((red(z + h) - red(z - h)) / (2 * h) - ref))
        order = math.log(errs[0] / errs[1]) / math.log(2.0)
        assert order > 1.9

    def test_regime_overlap_consistency(self):
        # both representations agree near the crossover
        for nu in (-0.3, 0.0, 1.2, 4.0):
            zstar = sf.crossover(nu)
            for z in (0.9 * zstar, zstar, 1.1 * zstar):
                a, _ = sf._ie_reduced_series(nu, np.asarray([z]))
                b, _ = sf._ie_asym(nu, np.asarray([z]))
                assert a[0] * z ** nu == pytest.approx(b[0], rel=1e-10)


class TestBesselJ:
    def test_small_argument_limit(self):
        for nu in (-0.3, 0.5, 2.0):
            x = 1e-7
            got = sf.bessel_j(nu, x).value * x ** (-nu)
            assert got == pytest.approx(1.0 / (2.0 ** nu * math.gamma(nu + 1.0)),
                                        rel=1e-7)

    def test_half_integer_zero(self):
        # J_{1/2}(pi) = sqrt(2/pi^2) sin(pi) = 0
        assert abs(sf.bessel_j(0.5, math.pi).value) < 1e-12

    def test_first_zero_of_j0(self):
        assert abs(sf.bessel_j(0.0, 2.4048255576957728).value) < 1e-12


class TestGauss2F1:
    def test_value_at_zero(self):
        assert sf.gauss_2f1(0.7, 1.3, 2.1, 0.0).value == 1.0

    def test_zero_parameter(self):
        for z in (0.1, 0.5, 0.999):
            assert sf.gauss_2f1(0.0, 1.3, 2.1, z).value == 1.0

    def test_elementary_closed_form(self):
        # 2F1(1/2, 1; 3/2; z) = artanh(sqrt z)/sqrt z; at z = 1/4 this is ln 3
        assert sf.gauss_2f1(0.5, 1.0, 1.5, 0.25).value == pytest.approx(
            math.log(3.0), rel=1e-13)

    def test_transformation_consistency(self):
        # direct and Euler-transformed series agree on [0.5, 0.9]
        for z in np.linspace(0.5, 0.9, 9):
            direct, _ = sf._hyp_series(0.7, 1.1, 2.3, z)
            v = sf.gauss_2f1(0.7, 1.1, 2.3, z)
            assert v.value == pytest.approx(direct, rel=1e-10)

    def test_pole_in_c(self):
        with pytest.raises(PoleError):
            sf.gauss_2f1(0.5, 0.5, -1.0, 0.3)

    def test_conditioning_signal_near_one(self):
        with pytest.raises(ConditioningError):
            sf.gauss_2f1(0.5, 0.7, 1.2, 1.0 - 1e-13)

    @settings(max_examples=40, deadline=None)
    @given(a=st.floats(0.05, 2.0), b=st.floats(-0.45, 2.0), z=st.floats(0.0, 0.995))
    def test_against_library_oracle(self, a, b, z):
        import mpmath
        c = a + b + 1.0  # family with excess 1, as in the Poisson kernel
        got = sf.gauss_2f1(a, b, c, z).value
        ref = float(mpmath.hyp2f1(a, b, c, z))
        assert got == pytest.approx(ref, rel=1e-10, abs=1e-12)


class TestAsymCoeffs:
    def test_first_coefficient_is_one(self):
        assert sf.asym_coeffs(3.3, 5).coeffs[0] == 1.0

    def test_half_order_vanishes(self):
        assert sf.asym_coeffs(0.5, 3).coeffs[1] == 0.0

    def test_three_halves(self):
        c = sf.asym_coeffs(1.5, 2).coeffs
        assert c[0] == 1.0 and c[1] == 2.0 and c[2] == 0.0

    def test_product_formula(self):
        nu, k = 2.2, 4
        c = sf.asym_coeffs(nu, k).coeffs
        prod = 1.0
        for j in range(1, k + 1):
            prod *= 4.0 * nu * nu - (2 * j - 1) ** 2
        assert c[k] == pytest.approx(prod / (2.0 ** (2 * k) * math.factorial(k)))


class TestGamma:
    @pytest.mark.parametrize("x,val", [(1.0, 1.0), (0.5, math.sqrt(math.pi)), (5.0, 24.0)])
    def test_values(self, x, val):
        assert sf.gamma_fn(x) == pytest.approx(val, rel=1e-14)

    def test_pole(self):
        with pytest.raises(PoleError):
            sf.gamma_fn(0.0)
        with pytest.raises(DomainError):
            sf.gamma_fn(-0.5)
