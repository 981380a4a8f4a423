import math

import numpy as np
import pytest

from bessel_harmonic import quad as q
from bessel_harmonic.errors import DomainError, NonHolderInput
from bessel_harmonic.operators import SampledFunction


class TestSpecs:
    def test_defaults_valid(self):
        s = q.QuadratureSpec()
        assert s.rel_tol > 0 and s.t_grid.points_per_decade >= 8

    def test_invalid_tolerances(self):
        with pytest.raises(DomainError):
            q.QuadratureSpec(rel_tol=0.0)
        with pytest.raises(DomainError):
            q.TGrid(1.0, 0.5)
        with pytest.raises(DomainError):
            q.TGrid(points_per_decade=4)

    def test_gridspec_nodes(self):
        g = q.GridSpec(0.1, 10.0, points_per_decade=8)
        nodes = g.nodes()
        assert nodes[0] == pytest.approx(0.1) and nodes[-1] == pytest.approx(10.0)
        assert len(nodes) == 17


class TestIntegrateWeighted:
    def test_indicator_power_integral(self):
        # int_0^1 y^(2 lam) dy = 1/(2 lam + 1)
        for lam in (-0.4, 0.0, 1.0, 3.0):
            f = lambda y: 1.0 if y < 1.0 else 0.0
            val = q.integrate_weighted(f, lam, (0.0, math.inf))
            assert val == pytest.approx(1.0 / (2 * lam + 1.0), rel=1e-9)

    def test_gaussian_moment(self):
        val = q.integrate_weighted(lambda y: math.exp(-y * y), 0.5, (0.0, math.inf))
        assert val == pytest.approx(0.5, rel=1e-10)

    def test_linear_on_finite_interval(self):
        val = q.integrate_weighted(lambda y: y, 1.0, (0.0, 2.0))
        assert val == pytest.approx(4.0, rel=1e-10)

    def test_gamma_family(self):
        # int_0^inf y^(2 lam) e^(-y^2) dy = Gamma(lam + 1/2) / 2
        for lam in (-0.4, 0.0, 1.0, 5.0):
            val = q.integrate_weighted(lambda y: math.exp(-y * y), lam,
                                       (0.0, math.inf))
            assert val == pytest.approx(math.gamma(lam + 0.5) / 2.0, rel=1e-10)


class TestIntegrateT:
    def test_exponential(self):
        val = q.integrate_t(lambda t: np.exp(-t), tail_exponent=5.0)
        assert val == pytest.approx(1.0, rel=1e-9)

    def test_spectral_weight_quarter(self):
        # int t e^(-2 z^2 t) z^4 dt = 1/4 for every z (symbolic oracle)
        for z in (0.3, 1.0, 4.0):
            val = q.integrate_t(lambda t: t * np.exp(-2 * z * z * t) * z ** 4,
                                tail_exponent=3.0, t_scale=1.0 / (z * z))
            assert val == pytest.approx(0.25, rel=1e-10)

    def test_power_tail(self):
        spec = q.QuadratureSpec(abs_tol=1e-6)
        val = q.integrate_t(lambda t: np.where(t > 1.0, t ** -2.0, 0.0),
                            spec, tail_exponent=2.0 - 1e-9)
        assert val == pytest.approx(1.0, rel=1e-4)

    def test_tail_accounting(self):
        # value over the default grid plus the analytic tail is consistent
        # with a grid extended by one decade, within the reported slack
        g = lambda t: (1.0 + t) ** -2.5
        s1 = q.QuadratureSpec(t_grid=q.TGrid(1e-8, 1e6, 16), abs_tol=1e-4)
        s2 = q.QuadratureSpec(t_grid=q.TGrid(1e-8, 1e7, 16), abs_tol=1e-4)
        v1 = q.integrate_t(g, s1, tail_exponent=2.5)
        v2 = q.integrate_t(g, s2, tail_exponent=2.5)
        tail1 = (1e6) ** -1.5 / 1.5
        assert abs(v1 - v2) <= tail1 * 1.01

    def test_requires_tail_exponent(self):
        with pytest.raises(DomainError):
            q.integrate_t(lambda t: np.exp(-t))


class TestPvLocal:
    def test_constant(self):
        f = SampledFunction.smooth_bump(1.0, 0.6)  # placeholder, not used

        class One:
            jump_points = ()

            def __call__(self, y):
                return 1.0

        assert q.pv_local(One(), 1.3) == pytest.approx(math.log(2.0), rel=1e-10)

    def test_linear(self):
        class Lin:
            jump_points = ()

            def __call__(self, y):
                return float(y)

        assert q.pv_local(Lin(), 1.0) == pytest.approx(1.5 + math.log(2.0),
                                                       rel=1e-10)

    def test_bump_against_excision_oracle(self):
        f = SampledFunction.smooth_bump(1.5, 0.5)
        x = 1.4
        got = q.pv_local(f, x)
        ref = q.pv_local_excision(f, x)
        assert got == pytest.approx(ref, rel=1e-6)

    def test_smooth_part_added(self):
        class One:
            jump_points = ()

            def __call__(self, y):
                return 1.0

        got = q.pv_local(One(), 2.0, kernel_smooth_part=lambda y: y)
        assert got == pytest.approx(math.log(2.0) + (16.0 - 1.0) / 2.0, rel=1e-9)

    def test_non_holder_signal_at_jump(self):
        f = SampledFunction.indicator(1.0, 2.0)
        with pytest.raises(NonHolderInput):
            q.pv_local(f, 1.0)
