"""Laplace exponents, the parent construction and its consistency checks."""

import math

import numpy as np
import pytest

from scalekit.errors import ParameterError
from scalekit.gtsc import GtscParams
from scalekit.levy import (LaplaceExponent, PathVariation, big_phi, build_parent,
                           classify_variation, levy_khintchine_exponent, mean_drift)


def quadratic_psi():
    return LaplaceExponent(eval=lambda th: th * th, deriv=lambda th: 2.0 * th,
                           domain_edge=-math.inf, descriptor="custom")


class TestBigPhi:
    def test_square_root(self):
        assert big_phi(quadratic_psi(), 4.0) == pytest.approx(2.0, rel=1e-12)

    def test_zero_with_positive_drift(self):
        psi = LaplaceExponent(eval=lambda th: th * th + th,
                              deriv=lambda th: 2.0 * th + 1.0,
                              domain_edge=-math.inf)
        assert big_phi(psi, 0.0) == 0.0

    def test_zero_with_negative_drift(self):
        # psi(theta) = theta^2 - theta: Phi(0) = 1
        psi = LaplaceExponent(eval=lambda th: th * th - th,
                              deriv=lambda th: 2.0 * th - 1.0,
                              domain_edge=-math.inf)
        assert big_phi(psi, 0.0) == pytest.approx(1.0, rel=1e-12)

    def test_right_inverse_and_monotone(self):
        params = GtscParams(alpha=0.5, gamma=1.0, c=1.0, zeta=1.0)
        psi = params.exponent()
        prev = -1.0
        for q in (0.0, 0.1, 0.5, 1.0, 3.0, 10.0):
            phi = big_phi(psi, q)
            assert float(np.real(psi.eval(phi))) == pytest.approx(q, rel=1e-10, abs=1e-10)
            assert phi >= prev
            prev = phi

    def test_negative_q_rejected(self):
        with pytest.raises(ParameterError):
            big_phi(quadratic_psi(), -1.0)

    @pytest.mark.parametrize("kappa,varphi,zeta", [(0, 0, 0), (1, 0, 0), (0, 1, 1)])
    def test_strict_convexity_sampled(self, kappa, varphi, zeta):
        # psi' strictly increasing on a log grid
        params = GtscParams(alpha=0.5, gamma=1.0, c=1.0, zeta=zeta,
                            kappa=kappa, varphi=varphi)
        psi = params.exponent()
        ds = [psi.deriv(float(t)) for t in np.logspace(-3, 3, 40)]
        assert all(b > a for a, b in zip(ds, ds[1:]))

    def test_eval_zero_is_zero(self):
        for varphi in (0.0, 1.0):
            params = GtscParams(alpha=0.5, gamma=1.0, c=1.0, varphi=varphi)
            assert abs(complex(params.exponent().eval(0.0))) <= 1e-15


class TestMeanDrift:
    def test_quadratic(self):
        assert mean_drift(quadratic_psi()) == pytest.approx(0.0, abs=1e-8)

    def test_gtsc_kappa(self):
        params = GtscParams(alpha=0.5, gamma=1.0, c=1.0, kappa=1.0)
        assert mean_drift(params.exponent()) == pytest.approx(1.0, rel=1e-12)

    def test_case_c_closed_form_vs_finite_difference(self):
        # kappa=0, varphi=1, zeta=0, c=1, gamma=1, alpha=1/2: psi'(0+) < 0;
        # oracle = central finite difference of psi at 0+
        params = GtscParams(alpha=0.5, gamma=1.0, c=1.0, varphi=1.0)
        psi = params.exponent()
        closed = mean_drift(psi)
        h = 1e-6
        fd = (float(np.real(psi.eval(h))) - float(np.real(psi.eval(-h)))) / (2.0 * h)
        assert closed < 0.0
        assert closed == pytest.approx(fd, rel=1e-6)
        expected = -(1.0 * math.gamma(0.5))  # kappa - varphi*(zeta + c*Gamma(1/2))
        assert closed == pytest.approx(expected, rel=1e-12)


class TestBuildParent:
    def test_pure_gaussian(self):
        from scalekit.levy import LadderParams

        ladder = LadderParams(kill_rate=0.0, drift=1.0,
                              levy_density=lambda x: 0.0, tail=lambda x: 0.0,
                              exponent=lambda th: th, exponent_deriv=lambda th: 1.0,
                              activity_mass=0.0)
        triple, psi = build_parent(ladder, 0.0)
        assert triple.sigma == pytest.approx(math.sqrt(2.0))
        assert triple.pi_tail(0.5) == 0.0
        for th in (0.3, 1.0, 4.0):
            assert float(np.real(psi.eval(th))) == pytest.approx(th * th, rel=1e-12)

    def test_killed_both_sides_rejected(self):
        params = GtscParams(alpha=0.5, gamma=1.0, c=1.0, kappa=1.0)
        with pytest.raises(ParameterError):
            build_parent(params.ladder(), 1.0)

    @pytest.mark.parametrize("kappa,varphi,zeta", [(0, 0, 0), (1, 0, 0), (0, 1, 0),
                                                   (0, 0, 1), (1, 0, 1), (0, 1, 1)])
    def test_wiener_hopf_consistency(self, kappa, varphi, zeta):
        params = GtscParams(alpha=0.5, gamma=1.0, c=1.0, zeta=zeta,
                            kappa=kappa, varphi=varphi)
        _, psi = build_parent(params.ladder(), varphi)
        phi_l = params.ladder_exponent
        for th in np.logspace(-3, 3, 25):
            lhs = complex(psi.eval(th))
            rhs = (th - varphi) * complex(phi_l(th))
            assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(lhs))

    def test_phi0_equals_varphi(self):
        params = GtscParams(alpha=0.5, gamma=1.0, c=1.0, varphi=1.0)
        _, psi = build_parent(params.ladder(), 1.0)
        assert big_phi(psi, 0.0) == pytest.approx(1.0, rel=1e-10)

    @pytest.mark.parametrize("alpha,varphi", [(0.5, 0.0), (-0.5, 0.0), (0.25, 1.0)])
    def test_levy_khintchine_roundtrip(self, alpha, varphi):
        # the triple returned by the construction reproduces the exponent by
        # quadrature of the Levy-Khintchine jump integral
        params = GtscParams(alpha=alpha, gamma=1.0, c=1.0, varphi=varphi)
        triple, psi = build_parent(params.ladder(), varphi)
        for th in (0.5, 1.0, 3.0):
            lk = levy_khintchine_exponent(triple, th)
            ref = float(np.real(psi.eval(th)))
            assert lk == pytest.approx(ref, rel=1e-6, abs=1e-8)


class TestClassifyVariation:
    def test_infinite_activity_unbounded(self):
        params = GtscParams(alpha=0.5, gamma=1.0, c=1.0)
        rep = classify_variation(params.ladder(), 0.0)
        assert rep.variation is PathVariation.UNBOUNDED

    def test_compound_poisson_bounded(self):
        # alpha = -1: exponential-jump compound Poisson ladder
        params = GtscParams(alpha=-1.0, gamma=1.0, c=1.0, kappa=1.0)
        rep = classify_variation(params.ladder(), 0.0)
        assert rep.variation is PathVariation.BOUNDED
        lam = params.c * math.gamma(1.0) * params.gamma ** (-1.0)
        assert rep.activity_mass == pytest.approx(lam, rel=1e-12)
        assert rep.drift == pytest.approx(params.kappa + lam, rel=1e-12)
        assert rep.subordinator_tail(0.5) == pytest.approx(
            params.ladder().levy_density(0.5), rel=1e-12)

    def test_gaussian_part_unbounded(self):
        params = GtscParams(alpha=-0.5, gamma=1.0, c=1.0, zeta=1.0)
        rep = classify_variation(params.ladder(), 0.0)
        assert rep.variation is PathVariation.UNBOUNDED
        assert rep.gaussian == pytest.approx(math.sqrt(2.0))
