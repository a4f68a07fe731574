import numpy as np
import pytest

from darbouxjac._quadrature import gauss_nodes
from darbouxjac.core import family_coeffs
from darbouxjac.darboux import GeronimusChain, TransformPoint, cauchy_s0star
from darbouxjac.errors import ConfigurationError, PoleError
from darbouxjac.polyeval import eval_P
from darbouxjac.rseq import (
    GeronimusPairQuasi,
    QuasiOrthogonal,
    R1System,
    R2System,
    RIICoefficients,
    geronimus_pair_quasi,
    r1_coeffs,
    r1_general,
    r2_coeffs,
    rational_eval,
    sample_points,
    varying_measure_polys,
)

ZS = sample_points(20)


class TestSamplePoints:
    def test_reproducible(self):
        a = sample_points(10)
        b = sample_points(10)
        assert np.all(a == b)

    def test_annulus_off_axis(self):
        zs = sample_points(50)
        assert np.all(np.abs(zs) >= 1.5) and np.all(np.abs(zs) <= 3.0)
        assert np.all(np.abs(zs.imag) >= 0.5)


class TestR1:
    def test_beta1(self, cheb1):
        rc = r1_coeffs(cheb1, TransformPoint(1j), TransformPoint(-1j, s0star=1.0), 1)
        assert abs(rc.beta - 0.5j) < 1e-14

    def test_residuals_conjugate_pair(self, cheb1):
        sys1 = R1System(cheb1, TransformPoint(1j), TransformPoint(-1j))
        for n in range(1, 41):
            rc = sys1.coeffs(n)
            for z in ZS:
                assert sys1.residual(n, z, rc) <= 1e-9

    def test_residuals_mixed_point(self, cheb1):
        sys1 = R1System(cheb1, TransformPoint(1j), TransformPoint(1 - 1j))
        for n in (1, 10, 25, 40):
            rc = sys1.coeffs(n)
            for z in ZS:
                assert sys1.residual(n, z, rc) <= 1e-9

    def test_uniqueness_perturbation(self, cheb1):
        sys1 = R1System(cheb1, TransformPoint(1j), TransformPoint(-1j, s0star=1.0))
        n = 12
        rc = sys1.coeffs(n)
        bumped = type(rc)(n=n, alpha=rc.alpha + 1e-6, beta=rc.beta)
        worst = max(sys1.residual(n, z, bumped) for z in ZS[:10])
        assert worst >= 1e-7

    def test_nevai_limits(self, cheb1):
        # alpha_n -> c + f(kappa2) + a/f(kappa1), beta_n -> -a/f(kappa1);
        # the convergence itself plus the limit-value cross-check
        from darbouxjac.spectral import ratio_limit_f

        k1, k2 = 1j, -1j
        sys1 = R1System(cheb1, TransformPoint(k1), TransformPoint(k2, s0star=1.0))
        a, c = 0.25, 0.0
        alpha_lim = c + ratio_limit_f(a, c, k2) + a / ratio_limit_f(a, c, k1)
        beta_lim = -a / ratio_limit_f(a, c, k1)
        c150, c200 = sys1.coeffs(150), sys1.coeffs(200)
        assert abs(c200.alpha - c150.alpha) < 1e-6
        assert abs(c200.beta - c150.beta) < 1e-6
        assert abs(c200.alpha - alpha_lim) < 1e-8
        assert abs(c200.beta - beta_lim) < 1e-8

    def test_general_reduces_to_geronimus_choice(self, cheb1):
        k1 = TransformPoint(1j)
        k2 = TransformPoint(-1j, s0star=1.0)
        sys1 = R1System(cheb1, k1, k2)
        for n in (1, 5, 17):
            rc = sys1.coeffs(n)
            tilde_A = sys1.gero.a_seq[n + 1]
            gen = r1_general(cheb1, k1, QuasiOrthogonal(order=1, degree=n + 1, tilde_A=tilde_A), n)
            assert abs(gen.alpha - rc.alpha) < 1e-12
            assert abs(gen.beta - rc.beta) < 1e-12

    def test_general_zero_tilde(self, cheb1):
        # tilde_A = 0 means T_{n+1} = P_{n+1}: the relation still closes
        rc = r1_general(cheb1, TransformPoint(1j), QuasiOrthogonal(order=1, degree=9, tilde_A=0.0), 8)
        assert rc.beta != 0

    def test_general_random_tilde(self, cheb1):
        rng = np.random.default_rng(11)
        for n in (3, 9, 21):
            tilde = complex(rng.normal(), rng.normal())
            r1_general(
                cheb1, TransformPoint(1j), QuasiOrthogonal(order=1, degree=n + 1, tilde_A=tilde), n
            )  # internal n+2-point verification must pass

    def test_quasi_orthogonal_validation(self):
        with pytest.raises(ConfigurationError):
            QuasiOrthogonal(order=1, degree=3, tilde_C=1.0, tilde_D=1.0)
        with pytest.raises(ConfigurationError):
            QuasiOrthogonal(order=2, degree=3, tilde_A=1.0)
        with pytest.raises(ConfigurationError):
            QuasiOrthogonal(order=3, degree=3, tilde_A=1.0)


class TestR2:
    def test_rho_is_one_plus_upsilon(self, cheb1):
        pair = GeronimusPairQuasi(cheb1, -1j)
        sys2 = R2System(cheb1, 1j)
        for n in (1, 4, 12):
            rc = sys2.coeffs(pair.quasi(n), n)
            assert rc.rho == 1 + rc.upsilon

    def test_tilde_D_equal_lambda_gives_upsilon_zero(self, cheb1):
        sys2 = R2System(cheb1, 1j)
        n = 6
        q = QuasiOrthogonal(
            order=2, degree=n + 1, tilde_C=0.3 - 0.2j, tilde_D=cheb1.lam_n(n + 1)
        )
        rc = sys2.coeffs(q, n)
        assert rc.upsilon == 0
        assert rc.rho == 1

    def test_invalid_rho_construction(self):
        with pytest.raises(ConfigurationError):
            RIICoefficients(n=1, rho=2.0, gamma=0.0, upsilon=0.5)

    def test_conjugate_pair_residuals(self, cheb1):
        pair = GeronimusPairQuasi(cheb1, -1j)
        sys2 = R2System(cheb1, 1j)
        for n in range(1, 31):
            q = pair.quasi(n)
            rc = sys2.coeffs(q, n)
            for z in ZS:
                assert sys2.residual(q, rc, z) <= 1e-9

    def test_mixed_pair_residuals(self, cheb1):
        # kappa2 = 1-i: Geronimus pair at (1-i, 1+i), kernel pair at (i, -i)
        pair = GeronimusPairQuasi(cheb1, 1 - 1j)
        sys2 = R2System(cheb1, 1j)
        for n in (1, 8, 20, 30):
            q = pair.quasi(n)
            rc = sys2.coeffs(q, n)
            for z in ZS:
                assert sys2.residual(q, rc, z) <= 1e-9

    def test_r2_coeffs_public_wrapper(self, cheb1):
        q = geronimus_pair_quasi(cheb1, -1j, 5)
        rc = r2_coeffs(cheb1, TransformPoint(1j), q, 5, check=True)
        assert rc.n == 5


class TestVaryingMeasure:
    def test_empty_kappas_identity(self, cheb1):
        out = varying_measure_polys(cheb1, [], 4)
        assert out.coeffs is cheb1
        assert out.rii == ()

    def test_single_pair_positive_real(self, cheb1):
        out = varying_measure_polys(cheb1, [1j], 3)
        assert np.max(np.abs(out.coeffs.c.imag)) <= 1e-12
        assert np.max(np.abs(out.coeffs.lam.imag)) <= 1e-12
        assert np.all(out.coeffs.lam.real > 0)

    def test_single_pair_commutes_with_chain(self, cheb1):
        out = varying_measure_polys(cheb1, [1j], 3)
        chain = GeronimusChain(cheb1)
        chain.apply(1j)
        chain.apply(-1j)
        direct = chain.coeffs()
        assert np.max(np.abs(out.coeffs.c - direct.c)) <= 1e-9
        assert np.max(np.abs(out.coeffs.lam - direct.lam)) <= 1e-9

    def test_orthogonality_oracle(self, cheb1):
        out = varying_measure_polys(cheb1, [1j, 1 + 1j], 5)
        x, w = gauss_nodes("chebyshev1", 4096)
        dens = w / (np.abs(x - 1j) ** 2 * np.abs(x - (1 + 1j)) ** 2)
        p5 = np.array([eval_P(out.coeffs, 5, t) for t in x])
        for mdeg in range(5):
            assert abs(np.sum(p5 * x**mdeg * dens)) <= 1e-8

    def test_rii_residuals(self, cheb1):
        out = varying_measure_polys(cheb1, [1j, 1 + 1j, 0.5 + 0.8j], 4)
        assert len(out.rii) == 2
        assert all(res <= 1e-8 for res in out.rii_residuals)

    def test_rii_matches_linear_solve_oracle(self, cheb1):
        # independent route: solve for (gamma, upsilon) from two sample
        # points of the relation and compare with the formula values
        out = varying_measure_polys(cheb1, [1j, 1 + 1j], 3)
        j = 1
        kap = out.kappas[j - 1]
        s_prev, s_mid, s_next = out.step_prefixes[j - 1 : j + 2]
        z1, z2, z3 = 2.1 + 1.3j, -1.8 + 0.9j, 1.1 - 2.2j

        def terms(z):
            pj = eval_P(s_mid, j, z)
            rhs = z * pj - eval_P(s_next, j + 1, z)
            col_g = pj
            col_u = (z - kap) * (z - np.conj(kap)) * eval_P(s_prev, j - 1, z) - z * pj
            return [col_g, col_u], rhs

        A = np.zeros((2, 2), dtype=complex)
        b = np.zeros(2, dtype=complex)
        A[0], b[0] = terms(z1)
        A[1], b[1] = terms(z2)
        gamma, upsilon = np.linalg.solve(A, b)
        rc = out.rii[j - 1]
        assert abs(gamma - rc.gamma) < 1e-9
        assert abs(upsilon - rc.upsilon) < 1e-9
        row, rhs = terms(z3)
        assert abs(row[0] * gamma + row[1] * upsilon - rhs) < 1e-9

    def test_real_kappa_rejected(self, cheb1):
        with pytest.raises(ConfigurationError):
            varying_measure_polys(cheb1, [2.0], 2)

    def test_degree_guard(self, cheb1):
        m = family_coeffs("chebyshev1", 12)
        with pytest.raises(ConfigurationError):
            varying_measure_polys(m, [1j, 2j], 30)


class TestRationalEval:
    def test_degree_zero(self, cheb1):
        out = varying_measure_polys(cheb1, [1j, 1 + 1j], 2)
        assert rational_eval(out, [1j, 1 + 1j], 0, 0.3) == 1

    def test_pole_error(self, cheb1):
        out = varying_measure_polys(cheb1, [1j, 1 + 1j], 2)
        with pytest.raises(PoleError):
            rational_eval(out, [1j, 1 + 1j], 2, 1j)

    def test_orthogonality(self, cheb1):
        kappas = [1j, 1 + 1j]
        out = varying_measure_polys(cheb1, kappas, 2)
        x, w = gauss_nodes("chebyshev1", 4096)
        r2 = np.array([rational_eval(out, kappas, 2, t) for t in x])
        for kap in kappas:
            val = np.sum(w * r2 / (x - np.conj(kap)))
            assert abs(val) <= 1e-8

    def test_conjugation(self, cheb1):
        kappas = [1j, 1 + 1j]
        out = varying_measure_polys(cheb1, kappas, 2)
        conj_out = varying_measure_polys(cheb1, [np.conj(k) for k in kappas], 2)
        t = 0.7 + 0.4j
        a = rational_eval(out, kappas, 2, t)
        b = rational_eval(conj_out, [np.conj(k) for k in kappas], 2, np.conj(t))
        assert abs(a - np.conj(b)) < 1e-10

    def test_kappa_mismatch(self, cheb1):
        out = varying_measure_polys(cheb1, [1j], 1)
        with pytest.raises(ConfigurationError):
            rational_eval(out, [2j], 1, 0.5)


def test_cauchy_default_for_r1_kappa2(cheb1):
    # omitting s0star defaults to the Cauchy transform at kappa2
    sys1 = R1System(cheb1, TransformPoint(1j), TransformPoint(-1j))
    expect = cauchy_s0star(cheb1, -1j)
    assert abs(sys1.k2.s0star - expect) < 1e-12
