"""Polynomial construction, root classification and partial fractions."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import polynomial as npoly

from scalekit.errors import NumericalError, ParameterError
from scalekit.gtsc import GtscParams, ig_params
from scalekit.levy import big_phi
from scalekit.polyfrac import (RationalAlpha, build_fq, partial_fractions,
                               roots_with_multiplicity)


class TestRationalAlpha:
    def test_validation(self):
        RationalAlpha(1, 2)
        RationalAlpha(-1, 2)
        with pytest.raises(ParameterError):
            RationalAlpha(2, 2)
        with pytest.raises(ParameterError):
            RationalAlpha(2, 4)
        with pytest.raises(ParameterError):
            RationalAlpha(0, 3)

    def test_signs(self):
        a = RationalAlpha(-2, 3)
        assert (a.m_plus, a.m_minus) == (0, 2)
        b = RationalAlpha(2, 3)
        assert (b.m_plus, b.m_minus) == (2, 0)


class TestBuildFq:
    def test_identity_and_root_structure_alpha_half(self):
        # kappa=varphi=zeta=0, c=gamma=1, q=0: the identity
        # f_0(z) = psi(z^2-1) forces 2*sqrt(pi)*(z-1)^2*(z+1)
        params = GtscParams(alpha=0.5, gamma=1.0, c=1.0)
        fq = build_fq(params, RationalAlpha(1, 2), 0.0)
        ref = 2.0 * math.sqrt(math.pi) * np.array([1.0, -1.0, -1.0, 1.0])
        assert np.allclose(fq, ref, rtol=1e-12)
        roots, mults = roots_with_multiplicity(fq)
        assert sorted(mults) == [1, 2]
        assert roots[0].real == pytest.approx(1.0, abs=1e-9)

    def test_degree_vs_zeta(self):
        # IG-style family: degree 4 when zeta > 0, degree 3 when zeta = 0
        p0 = ig_params(1.0, 1.0)
        assert build_fq(p0, RationalAlpha(1, 2), 0.5).size - 1 == 3
        p1 = GtscParams(alpha=0.5, gamma=0.5, c=p0.c, zeta=1.0)
        assert build_fq(p1, RationalAlpha(1, 2), 0.5).size - 1 == 4

    def test_simple_root_at_gamma_root(self):
        # q=0, varphi=0, kappa>0: z = gamma^{1/n} is a simple root
        params = GtscParams(alpha=0.5, gamma=1.3, c=1.0, kappa=0.7)
        fq = build_fq(params, RationalAlpha(1, 2), 0.0)
        roots, mults = roots_with_multiplicity(fq)
        assert roots[0].real == pytest.approx(1.3 ** 0.5, rel=1e-10)
        assert mults[0] == 1

    def test_identity_at_sampled_points(self):
        params = GtscParams(alpha=-0.5, gamma=1.0, c=1.0, kappa=0.5, zeta=0.7)
        ra = RationalAlpha(-1, 2)
        q = 0.8
        fq = build_fq(params, ra, q)
        psi = params.exponent()
        for z in (0.5, 1.3, 2.0):
            lhs = npoly.polyval(z, fq)
            rhs = z ** ra.m_minus * (float(np.real(psi.eval(z ** ra.n - params.gamma))) - q)
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_negative_q_rejected(self):
        params = GtscParams(alpha=0.5, gamma=1.0, c=1.0)
        with pytest.raises(ParameterError):
            build_fq(params, RationalAlpha(1, 2), -1.0)


class TestRoots:
    def test_triple_root(self):
        roots, mults = roots_with_multiplicity([-1.0, 3.0, -3.0, 1.0])
        assert list(mults) == [3]
        assert roots[0].real == pytest.approx(1.0, abs=1e-10)

    def test_ig_structure_against_threshold(self):
        # three simple real roots below q0, one real plus a conjugate pair above
        q0 = 16.0 / 27.0
        p = ig_params(1.0, 1.0)
        below, _ = roots_with_multiplicity(build_fq(p, RationalAlpha(1, 2), 0.9 * q0))
        assert sum(1 for r in below if r.imag == 0.0) == 3
        above, _ = roots_with_multiplicity(build_fq(p, RationalAlpha(1, 2), 1.1 * q0))
        reals = [r for r in above if r.imag == 0.0]
        cplx = [r for r in above if r.imag != 0.0]
        assert len(reals) == 1 and len(cplx) == 2
        assert cplx[0].real == pytest.approx(cplx[1].real)
        assert cplx[0].imag == pytest.approx(-cplx[1].imag)

    def test_ig_double_root_at_q0(self):
        q0 = 16.0 / 27.0
        p = ig_params(1.0, 1.0)
        roots, mults = roots_with_multiplicity(build_fq(p, RationalAlpha(1, 2), q0))
        assert sorted(mults) == [1, 2]
        double = roots[list(mults).index(2)]
        assert double.real == pytest.approx(-1.0 / (3.0 * math.sqrt(2.0)), rel=1e-7)

    def test_no_real_root_error(self):
        with pytest.raises(NumericalError):
            roots_with_multiplicity([1.0, 0.0, 1.0])   # z^2 + 1

    def test_residual_bound(self):
        p = ig_params(1.0, 1.0)
        fq = build_fq(p, RationalAlpha(1, 2), 0.3)
        roots, mults = roots_with_multiplicity(fq)
        lead = abs(fq[-1])
        deg = fq.size - 1
        for r, mu in zip(roots, mults):
            res = abs(npoly.polyval(r, fq.astype(complex)))
            assert res <= 1e-8 * (1.0 + lead * max(1.0, abs(r)) ** deg)

    def test_conjugate_closure(self):
        fq = build_fq(ig_params(1.0, 1.0), RationalAlpha(1, 2), 2.0)
        roots, _ = roots_with_multiplicity(fq)
        conj_sorted = sorted(np.conj(roots), key=lambda v: (v.real, v.imag))
        orig_sorted = sorted(roots, key=lambda v: (v.real, v.imag))
        assert np.allclose(conj_sorted, orig_sorted)

    def test_largest_real_root_warning(self):
        p5 = npoly.polyfromroots([0.5, 2.0 + 1.0j, 2.0 - 1.0j])
        with pytest.warns(UserWarning, match="largest real root"):
            roots_with_multiplicity(p5)


class TestPartialFractions:
    def test_simple_pair(self):
        pf = partial_fractions([-1.0, 0.0, 1.0], 0)
        got = {complex(r): complex(c[0]) for r, c in zip(pf.roots, pf.coeffs)}
        assert got[1.0 + 0.0j] == pytest.approx(0.5)
        assert got[-1.0 + 0.0j] == pytest.approx(-0.5)

    def test_ig_simple_root_weights(self):
        # simple-root shortcut A_k0 = r_k^{m_-}/f_q'(r_k)
        fq = build_fq(ig_params(1.0, 1.0), RationalAlpha(1, 2), 0.3)
        roots, mults = roots_with_multiplicity(fq)
        pf = partial_fractions(fq, 0, roots=roots, mults=mults)
        der = npoly.polyder(fq.astype(complex))
        for r, row in zip(pf.roots, pf.coeffs):
            assert complex(row[0]) == pytest.approx(1.0 / complex(npoly.polyval(r, der)),
                                                    rel=1e-10)

    @given(st.lists(st.floats(-2.0, 2.0), min_size=3, max_size=3),
           st.floats(-1.5, 1.5), st.floats(0.3, 1.8))
    @settings(max_examples=60, deadline=None)
    def test_reconstruction_with_double_root(self, simple, double, spread):
        # random degree-5 polynomial with a planted double root
        roots = [double, double, simple[0], simple[1] + spread, simple[2] - spread]
        rts = sorted(roots)
        if min(abs(a - b) for a, b in zip(rts, rts[1:])) < 0.05:
            return  # distinct roots too close to classify; not the target case
        poly = npoly.polyfromroots(roots)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            pf = partial_fractions(poly, 2)
        rng = np.random.default_rng(99)
        for _ in range(32):
            z = 3.5 * np.exp(1j * rng.uniform(0, 2 * math.pi))
            direct = z ** 2 / npoly.polyval(z, poly.astype(complex))
            assert abs(pf.reconstruct(z) - direct) <= 1e-9 * (1.0 + abs(direct))

    def test_phi_consistency(self):
        # r_1^n - gamma equals big_phi(psi, q)
        for q in (0.0, 0.5, 2.0):
            for kappa, varphi, zeta in ((0, 0, 0), (1, 0, 0), (0, 1, 1)):
                params = GtscParams(alpha=0.5, gamma=1.0, c=1.0, zeta=zeta,
                                    kappa=kappa, varphi=varphi)
                fq = build_fq(params, RationalAlpha(1, 2), q)
                roots, _ = roots_with_multiplicity(fq)
                phi = big_phi(params.exponent(), q)
                assert roots[0].real ** 2 - params.gamma == pytest.approx(
                    phi, rel=1e-8, abs=1e-8)
