import numpy as np
import pytest

from darbouxjac.core import RecurrenceCoeffs, family_coeffs
from darbouxjac.darboux import (
    GeronimusChain,
    TransformPoint,
    cauchy_s0star,
    christoffel,
    christoffel_two,
    geronimus,
    geronimus_cauchy,
    geronimus_eval,
    geronimus_eval_from,
    kernel_eval,
)
from darbouxjac.errors import ConfigurationError, ExistenceError
from darbouxjac.polyeval import eval_P

RNG = np.random.default_rng(0x5EED)

FIB = [1, 1]
while len(FIB) < 60:
    FIB.append(FIB[-1] + FIB[-2])


class TestTransformPoint:
    def test_real_kappa_rejected(self):
        with pytest.raises(ConfigurationError):
            TransformPoint(2.0)
        TransformPoint(2.0, allow_real=True)

    def test_geronimus_guarantee(self):
        assert TransformPoint(1j, s0star=1.0).geronimus_guaranteed
        assert TransformPoint(1j, s0star=1 - 2j).geronimus_guaranteed
        assert not TransformPoint(1j, s0star=1j).geronimus_guaranteed
        assert TransformPoint(-1j, s0star=1j).geronimus_guaranteed
        assert not TransformPoint(1j, s0star=0.0).geronimus_guaranteed


class TestChristoffel:
    def test_fibonacci_entry_n1(self, cheb2):
        tc = christoffel(cheb2, TransformPoint(0.5j))
        assert abs(tc.coeffs.lam_n(2) - 0.5) < 1e-15
        assert abs(tc.coeffs.c_n(2) - (-0.25j)) < 1e-15

    def test_fibonacci_entry_n3(self, cheb2):
        tc = christoffel(cheb2, TransformPoint(0.5j))
        assert abs(tc.coeffs.lam_n(4) - (1.0 / 36.0 + 0.25)) < 1e-14

    def test_nevai_invariance_tail(self, presets):
        # transformed entries converge to the base Nevai data (1/4, 0)
        for m in presets.values():
            tc = christoffel(m, TransformPoint(1j))
            assert abs(tc.coeffs.lam_n(200) - 0.25) < 1e-6
            assert abs(tc.coeffs.c_n(200)) < 1e-6

    def test_boundedness(self, presets):
        for m in presets.values():
            for kappa in (1j, 1 + 1j, 2j):
                tc = christoffel(m, TransformPoint(kappa))
                max_c, max_l = np.max(np.abs(m.c)), np.max(np.abs(m.lam))
                ratio_bound = abs(kappa) + max_c + max_l / kappa.imag
                assert np.max(np.abs(tc.coeffs.lam)) <= max_l * ratio_bound / kappa.imag
                assert np.max(np.abs(tc.coeffs.c)) <= max_c + 2 * ratio_bound

    def test_prefix_shrinks_by_two(self, cheb1):
        tc = christoffel(cheb1, TransformPoint(1j))
        assert tc.coeffs.n_max == cheb1.n_max - 2

    def test_s0_of_result(self, cheb3):
        tc = christoffel(cheb3, TransformPoint(1j))
        assert abs(tc.coeffs.s0 - (cheb3.c_n(1) - 1j)) < 1e-15

    def test_zero_hit_inside_support(self, cheb2):
        # U_1(0) = 0: the kernel family does not exist at kappa = 0
        with pytest.raises(ExistenceError):
            christoffel(cheb2, TransformPoint(0.0, allow_real=True))


class TestKernelEval:
    def test_degree_zero(self, cheb1):
        assert kernel_eval(cheb1, TransformPoint(1j), 0, 0.3) == 1

    def test_explicit_value(self, cheb1):
        # (1/(0-i)) [T_2(0) - (T_2(i)/T_1(i)) T_1(0)] = -i/2
        got = kernel_eval(cheb1, TransformPoint(1j), 1, 0.0)
        assert abs(got - (-0.5j)) < 1e-15

    def test_near_kappa_fallback_consistent(self, cheb1):
        site = TransformPoint(1j)
        z_close = 1j + 1e-13
        z_near = 1j + 1e-9
        direct = kernel_eval(cheb1, site, 6, z_near)
        fallback = kernel_eval(cheb1, site, 6, z_close)
        # both approximate P*_6(kappa, kappa)
        assert abs(direct - fallback) < 1e-6 * max(1.0, abs(direct))

    def test_matches_transformed_recurrence(self, cheb1):
        site = TransformPoint(1j)
        tc = christoffel(cheb1, site)
        for z in (0.3, 1.2 - 0.8j, 2j):
            for n in (1, 5, 12):
                a = kernel_eval(cheb1, site, n, z)
                b = eval_P(tc.coeffs, n, z)
                assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


class TestChristoffelTwo:
    def test_conjugate_pair_real_prefix(self, cheb1):
        tc = christoffel_two(cheb1, TransformPoint(1j), TransformPoint(-1j))
        assert np.max(np.abs(tc.coeffs.c.imag)) <= 1e-12
        assert np.max(np.abs(tc.coeffs.lam.imag)) <= 1e-12

    def test_determinant_formula(self, cheb1):
        k1, k2 = 1j, -1j
        tc = christoffel_two(cheb1, TransformPoint(k1), TransformPoint(k2))
        for n in (1, 2, 5, 11):
            p = [eval_P(cheb1, n + j, k1) for j in (2, 1, 0)]
            q = [eval_P(cheb1, n + j, k2) for j in (2, 1, 0)]
            delta = p[1] * q[2] - q[1] * p[2]
            for z in RNG.standard_normal(3) + 1j * (RNG.standard_normal(3) + 1.5):
                row = [eval_P(cheb1, n + j, z) for j in (2, 1, 0)]
                det3 = np.linalg.det(np.array([p, q, row]))
                expect = det3 / ((z - k1) * (z - k2) * delta)
                got = eval_P(tc.coeffs, n, z)
                assert abs(got - expect) <= 1e-10 * max(1.0, abs(expect))

    def test_repeated_site_flagged(self, cheb1):
        tc = christoffel_two(cheb1, TransformPoint(2j), TransformPoint(2j))
        assert any("repeated-site" in note for note in tc.notes)

    def test_same_half_plane_noted(self, cheb1):
        tc = christoffel_two(cheb1, TransformPoint(1j), TransformPoint(2j))
        assert any("same-half-plane" in note for note in tc.notes)


class TestGeronimus:
    def test_A1(self, cheb1):
        g = geronimus(cheb1, TransformPoint(1j, s0star=1.0))
        assert abs(g.a_seq[1] - (-(1 + 1j))) < 1e-15

    def test_missing_s0star(self, cheb1):
        with pytest.raises(ConfigurationError):
            geronimus(cheb1, TransformPoint(1j))

    def test_roundtrip_all_presets(self, presets):
        for m in presets.values():
            for s0star in (1.0, cauchy_s0star(m, 1j)):
                g = geronimus(m, TransformPoint(1j, s0star=s0star))
                rt = christoffel(g, TransformPoint(1j))
                L = rt.coeffs.n_max
                assert np.max(np.abs(rt.coeffs.c - m.c[:L])) <= 1e-10
                assert np.max(np.abs(rt.coeffs.lam - m.lam[: L - 1])) <= 1e-10

    def test_hypothesis_violation_checked_numerically(self, cheb1):
        # Im kappa > 0 with s0star in the upper half plane: outside the
        # guarantee, so the numerical existence path runs (and succeeds here)
        site = TransformPoint(1j, s0star=0.5 + 0.5j)
        assert not site.geronimus_guaranteed
        g = geronimus(cheb1, site)
        assert "existence-checked-numerically" in g.notes

    def test_r_zero_hit_names_index(self, cheb1):
        # s0star = 1/(c_1 - kappa) makes R_1(kappa) = 0: no transform exists
        with pytest.raises(ExistenceError) as err:
            geronimus(cheb1, TransformPoint(1j, s0star=1j))
        assert err.value.index == 1

    def test_result_s0(self, cheb1):
        g = geronimus(cheb1, TransformPoint(1j, s0star=2 - 1j))
        assert abs(g.coeffs.s0 - (2 - 1j)) < 1e-15

    def test_transformed_recurrence_residual(self, cheb1):
        # z P^-*_n = P^-*_{n+1} + c^-*_{n+1} P^-*_n + lambda^-*_{n+1} P^-*_{n-1}
        site = TransformPoint(1j, s0star=1.0)
        tc = geronimus(cheb1, site)
        zs = RNG.standard_normal(20) + 1j * RNG.standard_normal(20)
        for z in zs:
            for n in (1, 4, 9, 20):
                vals = [geronimus_eval_from(tc, n + d, z) for d in (-1, 0, 1)]
                resid = (
                    z * vals[1]
                    - vals[2]
                    - tc.coeffs.c_n(n + 1) * vals[1]
                    - tc.coeffs.lam_n(n + 1) * vals[0]
                )
                scale = max(abs(v) for v in vals) * max(1.0, abs(z))
                assert abs(resid) <= 1e-9 * scale

    def test_geronimus_eval_degree_zero(self, cheb1):
        assert geronimus_eval(cheb1, TransformPoint(1j, s0star=1.0), 0, 0.4) == 1

    def test_geronimus_eval_matches_recurrence(self, cheb1):
        site = TransformPoint(1j, s0star=1.0)
        tc = geronimus(cheb1, site)
        for n in (1, 3, 8):
            a = geronimus_eval(cheb1, site, n, 0.7 - 0.3j)
            b = eval_P(tc.coeffs, n, 0.7 - 0.3j)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


class TestGeronimusCauchy:
    def test_real_kappa_outside_support(self, cheb1):
        s = cauchy_s0star(cheb1, 2.0)
        assert abs(s - (-1 / np.sqrt(3))) < 1e-12

    def test_real_kappa_inside_support_rejected(self, cheb1):
        with pytest.raises(ConfigurationError):
            cauchy_s0star(cheb1, 0.5)

    def test_upper_half_plane_lands_upper(self, cheb1):
        tc = geronimus_cauchy(cheb1, 1j)
        assert tc.sites[0].s0star.imag > 0

    def test_conjugate_double_application_positive(self, cheb1):
        chain = GeronimusChain(cheb1)
        chain.apply(1j)
        chain.apply(-1j)
        out = chain.coeffs()
        assert np.max(np.abs(out.c.imag)) <= 1e-10
        assert np.max(np.abs(out.lam.imag)) <= 1e-10
        assert np.all(out.lam.real > 0)
        # s0'' = integral dmu/|t-i|^2 is a positive real number
        assert abs(out.s0.imag) < 1e-15
        assert out.s0.real > 0

    def test_needs_family(self, cheb1):
        bare = RecurrenceCoeffs(c=cheb1.c, lam=cheb1.lam)
        with pytest.raises(ConfigurationError):
            geronimus_cauchy(bare, 1j)

    def test_matches_plain_geronimus_with_same_s0star(self, cheb2):
        # the double-rounded s0star perturbs entry n by ~(|f|^2/lambda)^n eps,
        # so agreement only holds on the leading entries
        m = family_coeffs("chebyshev2", 24)
        s0 = cauchy_s0star(m, 1j)
        a = geronimus_cauchy(m, 1j).coeffs
        b = geronimus(m, TransformPoint(1j, s0star=s0)).coeffs
        assert np.max(np.abs(a.c[:6] - b.c[:6])) < 1e-10
        assert np.max(np.abs(a.lam[:5] - b.lam[:5])) < 1e-10


def test_geronimus_nevai_invariance(cheb1):
    tc = geronimus(cheb1, TransformPoint(1j, s0star=1.0))
    assert abs(tc.coeffs.lam_n(200) - 0.25) < 1e-6
    assert abs(tc.coeffs.c_n(200)) < 1e-6
