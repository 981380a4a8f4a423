import math

import numpy as np
import pytest

from bessel_harmonic import kernels as k
from bessel_harmonic.errors import DiagonalError, DomainError, TruncationInsufficient


class TestHeatKernel:
    def test_reflection_identity_lambda0(self):
        rng = np.random.default_rng(7)
        t, x, y = (np.exp(rng.uniform(np.log(0.05), np.log(20.0), 200))
                   for _ in range(3))
        got = k.heat_kernel(0.0, t, x, y)
        ref = k.gauss_weierstrass(t, x, y) + k.gauss_weierstrass(t, x, -y)
        keep = ref > 1e-280
        assert np.max(np.abs(got - ref)[keep] / ref[keep]) < 1e-12

    def test_spec_point(self):
        assert k.heat_kernel(0.0, 1.0, 1.0, 1.0) == pytest.approx(
            (1.0 + math.exp(-1.0)) / math.sqrt(4.0 * math.pi), rel=1e-14)

    def test_origin_limit(self):
        # frozen from the closed form at lam=0.7, t=0.8, y=1.3
        assert k.heat_kernel_at_zero(0.7, 0.8, 1.3) == pytest.approx(
            0.318101520211002422, rel=1e-14)
        assert k.heat_kernel(0.7, 0.8, 1e-8, 1.3) == pytest.approx(
            0.318101520211002422, rel=1e-7)

    def test_spectral_oracle_agreement(self):
        val = k.heat_kernel(1.0, 0.7, 1.3, 2.1)
        orc = k.spectral_oracle("heat", 1.0, 0.7, 1.3, 2.1)
        assert val == pytest.approx(orc, rel=1e-8)

    def test_symmetry_exact(self):
        assert k.heat_kernel(1.3, 0.4, 1.1, 2.2) == k.heat_kernel(1.3, 0.4, 2.2, 1.1)

    def test_positive_domain_enforced(self):
        with pytest.raises(DomainError):
            k.heat_kernel(0.5, -1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            k.BesselParam(-0.6)


class TestGaussWeierstrass:
    def test_values(self):
        assert k.gauss_weierstrass(1.0, 2.0, 2.0) == pytest.approx(
            1.0 / math.sqrt(4 * math.pi), rel=1e-15)
        assert k.gauss_weierstrass(0.25, 0.0, 1.0) == pytest.approx(
            math.exp(-1.0) / math.sqrt(math.pi), rel=1e-15)
        assert k.gauss_weierstrass(1.0, 0.0, 2.0) == pytest.approx(
            math.exp(-1.0) / math.sqrt(4 * math.pi), rel=1e-15)

    def test_time_derivative_matches_fd(self):
        t, x, y = 0.7, 1.0, 1.6
        h = 1e-6
        fd = (k.gauss_weierstrass(t + h, x, y) - k.gauss_weierstrass(t - h, x, y)) / (2 * h)
        assert k.dgauss_dt(t, x, y) == pytest.approx(fd, rel=1e-8)


class TestDerivativeKernels:
    @pytest.mark.parametrize("lam", [-0.3, 0.0, 1.0, 3.5])
    def test_dx_finite_difference(self, lam):
        t, x, y = 0.5, 1.1, 1.4
        errs = []
        for h_rel in (1e-2, 5e-3):
            h = h_rel * x
            fd = (k.heat_kernel(lam, t, x + h, y) - k.heat_kernel(lam, t, x - h, y)) / (2 * h)
            errs.append(abs(fd - k.dheat_dx(lam, t, x, y)))
        order = math.log(errs[0] / errs[1]) / math.log(2.0)
        assert order > 1.9

    def test_dx_lambda0_reduction(self):
        t, x, y = 0.8, 1.2, 0.7
        ref = k.dgauss_dx(t, x, y) + k.dgauss_dx(t, x, -y)
        assert k.dheat_dx(0.0, t, x, y) == pytest.approx(ref, rel=1e-12)

    def test_dt_lambda0_reduction(self):
        t, x, y = 1.0, 1.0, 1.0
        ref = k.dgauss_dt(t, x, y) + k.dgauss_dt(t, x, -y)
        assert k.dheat_dt(0.0, t, x, y) == pytest.approx(ref, rel=1e-12)

    def test_dx_finite_on_diagonal(self):
        assert math.isfinite(k.dheat_dx(1.5, 0.3, 1.0, 1.0))

    def test_dt_negative_smallscale(self):
        # dW/dt <= -c t^(-lam-3/2) for small x, y and t >= 1
        lam = 0.8
        for t in (1.0, 5.0, 50.0):
            v = k.dheat_dt(lam, t, 0.1, 0.15)
            assert v < 0
            assert v * t ** (lam + 1.5) < -1e-3


class TestPoissonKernel:
    def test_lambda0_closed_form(self):
        assert k.poisson_kernel(0.0, 1.0, 1.0, 1.0) == pytest.approx(
            6.0 / (5.0 * math.pi), rel=1e-14)

    def test_methods_agree(self):
        rng = np.random.default_rng(3)
        for _ in range(12):
            lam = float(rng.choice([-0.3, 0.5, 2.5]))
            t, x, y = np.exp(rng.uniform(np.log(0.05), np.log(20.0), 3))
            a = k.poisson_kernel(lam, t, x, y, method="closed_form")
            b = k.poisson_kernel(lam, t, x, y, method="subordination")
            assert a == pytest.approx(b, rel=1e-8)

    def test_two_sided_comparison(self):
        rng = np.random.default_rng(4)
        for lam in (-0.3, 1.0, 4.0):
            t, x, y = (np.exp(rng.uniform(np.log(0.05), np.log(20.0), 300))
                       for _ in range(3))
            P = k.poisson_kernel(lam, t, x, y)
            comp = t / ((x * x + y * y + t * t) ** lam * ((x - y) ** 2 + t * t))
            r = P / comp
            assert np.all(np.isfinite(r)) and r.min() > 0
            assert r.max() / r.min() < 50.0


class TestConjugatePoisson:
    def test_requires_positive_lambda(self):
        with pytest.raises(DomainError):
            k.conj_poisson_kernel(0.0, 1.0, 1.0, 2.0)

    def test_riesz_limit(self):
        got = k.conj_poisson_kernel(1.0, 1e-4, 1.0, 2.0)
        ref = k.riesz_kernel(1.0, 1.0, 2.0)
        assert got == pytest.approx(ref, rel=1e-4)

    def test_against_refined_grid_oracle(self):
        # dense panel quadrature of the defining angular integral
        from bessel_harmonic.quad import gl_panels
        lam, t, x, y = 1.0, 1.0, 2.0, 1.0
        a, w = gl_panels(0.0, math.pi, 600, 10)
        s2 = x * x + y * y + t * t
        vals = (x - y * np.cos(a)) * np.sin(a) ** (2 * lam - 1.0) / (
            s2 - 2 * x * y * np.cos(a)) ** (lam + 1.0)
        ref = -2.0 * lam / math.pi * float(np.dot(w, vals))
        assert k.conj_poisson_kernel(lam, t, x, y) == pytest.approx(ref, rel=1e-10)

    def test_large_time_decay_exponent(self):
        # |Q_t| ~ t^(-2 lam - 2) as t -> infinity (fitted slope oracle)
        lam, x, y = 1.0, 1.0, 1.0
        ts = np.array([1e2, 1e3])
        vals = np.abs([k.conj_poisson_kernel(lam, t, x, y) for t in ts])
        slope = math.log(vals[1] / vals[0]) / math.log(ts[1] / ts[0])
        assert slope == pytest.approx(-(2 * lam + 2.0), rel=0.02)


class TestRieszKernel:
    def test_lambda0_closed_form(self):
        assert k.riesz_kernel(0.0, 1.0, 2.0) == pytest.approx(
            2.0 / (3.0 * math.pi), rel=1e-12)
        assert k.riesz_kernel(0.0, 1.0, 2.0, method="lambda0") == pytest.approx(
            2.0 / (3.0 * math.pi), rel=1e-15)

    def test_methods_agree(self):
        for lam in (0.5, 1.0, 3.0):
            for (x, y) in ((1.0, 2.0), (2.0, 1.0), (0.3, 5.0), (1.0, 1.3)):
                a = k.riesz_kernel(lam, x, y, method="t_integral")
                b = k.riesz_kernel(lam, x, y, method="closed_2f1")
                assert a == pytest.approx(b, rel=1e-10)

    def test_farfield_limits(self):
        # x^(2l+1) R -> -2 G(l+1)/(sqrt(pi) G(l+1/2)) as y/x -> 0 and
        # (y^(2l+2)/x) R -> G(l+1)/(sqrt(pi) G(l+3/2)) as x/y -> 0.
        # The lambda = 0 case (-2/pi and 2/pi) is pinned by the reflected
        # Hilbert kernel; the bare Gamma-ratio constants (without the
        # 1/sqrt(pi)) are off by exactly that factor.
        for lam in (-0.3, 0.0, 1.0, 3.0):
            lo, hi = k.riesz_farfield_constants(lam)
            x = 1.7
            v = x ** (2 * lam + 1.0) * k.riesz_kernel(lam, x, 1e-4 * x)
            assert v == pytest.approx(lo, rel=0.01)
            assert v * math.sqrt(math.pi) == pytest.approx(
                -2.0 * math.gamma(lam + 1.0) / math.gamma(lam + 0.5), rel=0.01)
            y = 2.3
            v = y ** (2 * lam + 2.0) / (1e-4 * y) * k.riesz_kernel(lam, 1e-4 * y, y)
            assert v == pytest.approx(hi, rel=0.01)

    def test_diagonal_signal(self):
        with pytest.raises(DiagonalError):
            k.riesz_kernel(1.0, 1.0, 1.0 + 1e-12)

    def test_lambda0_method_guard(self):
        with pytest.raises(DomainError):
            k.riesz_kernel(1.0, 1.0, 2.0, method="lambda0")


class TestTildeKernels:
    def test_heat_identity_at_lambda0(self):
        assert k.tilde_kernel("heat", 0.0, t=0.7, x=1.2, y=0.8) == \
            k.heat_kernel(0.0, 0.7, 1.2, 0.8)

    def test_riesz_factor(self):
        assert k.tilde_kernel("riesz", 1.0, x=1.0, y=2.0) == pytest.approx(
            2.0 * k.riesz_kernel(1.0, 1.0, 2.0), rel=1e-14)

    def test_heat_xy_one(self):
        assert k.tilde_kernel("heat", 1.0, t=1.0, x=1.0, y=1.0) == \
            k.heat_kernel(1.0, 1.0, 1.0, 1.0)


class TestSpectralOracle:
    @pytest.mark.parametrize("kind", ["heat", "poisson", "dheat_dx", "dheat_dt"])
    def test_agrees_with_kernels(self, kind):
        fn = {"heat": k.heat_kernel, "poisson": k.poisson_kernel,
              "dheat_dx": k.dheat_dx, "dheat_dt": k.dheat_dt}[kind]
        for lam in (-0.3, 0.5):
            got = fn(lam, 0.8, 1.1, 1.7)
            orc = k.spectral_oracle(kind, lam, 0.8, 1.1, 1.7)
            assert got == pytest.approx(orc, rel=1e-7)

    def test_truncation_signal(self):
        with pytest.raises(TruncationInsufficient):
            k.spectral_oracle("heat", 0.5, 1e-9, 1.0, 1.0)


class TestRegionTag:
    def test_regions(self):
        assert k.region_tag(1.0, 0.4) == "lower"
        assert k.region_tag(1.0, 1.5) == "diagonal"
        assert k.region_tag(1.0, 2.5) == "upper"

    def test_boundaries_are_diagonal(self):
        assert k.region_tag(1.0, 0.5) == "diagonal"
        assert k.region_tag(1.0, 2.0) == "diagonal"


class TestMassAndSemigroup:
    def test_mass_conservation(self):
        from bessel_harmonic.quad import integrate_weighted, QuadratureSpec
        spec = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-13)
        for lam, t, x in ((-0.3, 0.5, 1.0), (1.0, 2.0, 0.7), (4.0, 0.1, 5.0)):
            val = integrate_weighted(lambda y: k.heat_kernel(lam, t, x, y),
                                     lam, (0.0, math.inf), spec,
                                     breakpoints=[x])
            assert val == pytest.approx(1.0, abs=1e-9)

    def test_semigroup_law(self):
        from bessel_harmonic.quad import integrate_weighted, QuadratureSpec
        lam, t, s, x, y = 1.0, 0.3, 0.7, 1.0, 1.5
        spec = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-14)
        val = integrate_weighted(
            lambda z: k.heat_kernel(lam, t, x, z) * k.heat_kernel(lam, s, z, y),
            lam, (0.0, math.inf), spec, breakpoints=[x, y])
        assert val == pytest.approx(k.heat_kernel(lam, t + s, x, y), rel=1e-8)
