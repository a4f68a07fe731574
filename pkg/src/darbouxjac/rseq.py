"""R_I / R_II recurrence coefficients, varying-measure polynomials, and
orthogonal rational functions.

The R_I relation couples a quasi-orthogonal polynomial of order 1 (in
particular a Geronimus transform) with the base OPS and a kernel polynomial:

    T_{n+1}(z) - (z - alpha_n) P_n(z) + beta_n (z - kappa) P*_{n-1}(kappa, z) = 0.

The R_II relation does the same one level up, with a quasi-orthogonal
polynomial of order 2 (a conjugate-pair iterated Geronimus transform) and a
two-point kernel polynomial.  Iterating conjugate-pair Geronimus steps at
kappa_1, kappa_2, ... produces polynomials orthogonal to varying measures
dmu / prod |t - kappa_j|^2, whose diagonal satisfies an R_II recurrence and
whose quotients by prod (t - kappa_j) are orthogonal rational functions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._quadrature import adaptive_integral
from .core import RecurrenceCoeffs
from .darboux import (
    GeronimusChain,
    TransformPoint,
    cauchy_s0star,
    christoffel,
    christoffel_two,
    geronimus,
)
from .errors import (
    ConfigurationError,
    DegeneracyError,
    PoleError,
    QuadratureError,
    ResidualCheckError,
)
from .polyeval import eval_P, ratio_sequence

__all__ = [
    "QuasiOrthogonal",
    "RICoefficients",
    "RIICoefficients",
    "VaryingMeasureResult",
    "sample_points",
    "r1_general",
    "r1_coeffs",
    "r1_residual",
    "R1System",
    "geronimus_pair_quasi",
    "r2_coeffs",
    "r2_residual",
    "R2System",
    "varying_measure_polys",
    "rational_eval",
]

_SAMPLE_SEED = 0x5EED
_CHECK_TOL = 1e-8


@dataclass(frozen=True)
class QuasiOrthogonal:
    """Quasi-orthogonal polynomial data of order 1 or 2, degree n+1.

    Order 1: T_{n+1} = P_{n+1} + tilde_A P_n.
    Order 2: S_{n+1} = P_{n+1} + tilde_C P_n + tilde_D P_{n-1}.
    """

    order: int
    degree: int
    tilde_A: complex | None = None
    tilde_C: complex | None = None
    tilde_D: complex | None = None

    def __post_init__(self):
        if self.order == 1:
            if self.tilde_A is None or self.tilde_C is not None or self.tilde_D is not None:
                raise ConfigurationError("order-1 record carries exactly tilde_A")
        elif self.order == 2:
            if self.tilde_A is not None or self.tilde_C is None or self.tilde_D is None:
                raise ConfigurationError("order-2 record carries exactly tilde_C, tilde_D")
        else:
            raise ConfigurationError("quasi-orthogonal order must be 1 or 2")


@dataclass(frozen=True)
class RICoefficients:
    n: int
    alpha: complex
    beta: complex


@dataclass(frozen=True)
class RIICoefficients:
    n: int
    rho: complex
    gamma: complex
    upsilon: complex

    def __post_init__(self):
        if self.rho != 1 + self.upsilon:
            raise ConfigurationError("rho must equal 1 + upsilon by construction")


def sample_points(count: int, seed: int = _SAMPLE_SEED) -> np.ndarray:
    """Reproducible sample points in the annulus 1.5 <= |z| <= 3, |Im z| >= 0.5."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        radius = rng.uniform(1.5, 3.0)
        angle = rng.uniform(0.0, 2.0 * np.pi)
        z = radius * np.exp(1j * angle)
        if abs(z.imag) >= 0.5:
            out.append(z)
    return np.array(out)


def _p_triplet(m: RecurrenceCoeffs, n: int, z: complex):
    """(P_{n-1}, P_n, P_{n+1}) at z in one common scaled frame."""
    c, lam = m.c, m.lam
    p_prev, p = 1.0 + 0.0j, z - c[0]
    for k in range(1, n + 1):
        p_prev, p = p, (z - c[k]) * p - lam[k - 1] * p_prev
        mag = abs(p)
        if mag > 1e120 or 0 < mag < 1e-120:
            p_prev /= mag
            p /= mag
    # after the loop: p == P_{n+1}, p_prev == P_n; rebuild P_{n-1}
    p_nm1 = ((z - c[n]) * p_prev - p) / lam[n - 1]
    return p_nm1, p_prev, p


class R1System:
    """Precomputed data for the R_I relation coupling the Geronimus
    transform at kappa2 with the kernel family at kappa1."""

    def __init__(self, m: RecurrenceCoeffs, k1: TransformPoint, k2: TransformPoint):
        self.m = m
        self.kappa1 = complex(k1.kappa)
        s0star = k2.s0star
        if s0star is None:
            s0star = cauchy_s0star(m, k2.kappa)
            k2 = TransformPoint(k2.kappa, s0star=s0star, allow_real=k2.allow_real)
        self.k2 = k2
        self.rho = ratio_sequence(m, self.kappa1, "P").values  # rho[n-1] = P_n/P_{n-1}
        self.gero = geronimus(m, k2)

    def coeffs(self, n: int) -> RICoefficients:
        if n < 1:
            raise ConfigurationError("R_I coefficients are defined for n >= 1")
        lam_next = self.m.lam_n(n + 1)
        ratio = lam_next / self.rho[n - 1]  # lambda_{n+1} P_{n-1}/P_n at kappa1
        beta = -ratio
        w_next = -self.gero.a_seq[n + 1]  # R_{n+1}/R_n at kappa2
        alpha = self.m.c_n(n + 1) + w_next + ratio
        return RICoefficients(n=n, alpha=alpha, beta=beta)

    def residual(self, n: int, z: complex, coeffs: RICoefficients | None = None) -> float:
        """Relative residual of the relation at z; scale = max term magnitude.

        (z - kappa1) P*_{n-1}(kappa1, z) = P_n(z) - rho_n P_{n-1}(z), so the
        kernel term needs no division by z - kappa1.
        """
        rc = coeffs if coeffs is not None else self.coeffs(n)
        p_nm1, p_n, p_np1 = _p_triplet(self.m, n, z)
        t1 = p_np1 + self.gero.a_seq[n + 1] * p_n
        t2 = (z - rc.alpha) * p_n
        t3 = rc.beta * (p_n - self.rho[n - 1] * p_nm1)
        scale = max(abs(t1), abs(t2), abs(t3))
        return abs(t1 - t2 + t3) / scale if scale > 0 else 0.0


def r1_coeffs(
    m: RecurrenceCoeffs, k1: TransformPoint, k2: TransformPoint, n: int
) -> RICoefficients:
    """alpha_n, beta_n of the Geronimus/kernel R_I relation:

    beta_n = -lambda_{n+1} P_{n-1}(k1)/P_n(k1),
    alpha_n = c_{n+1} + R_{n+1}(k2)/R_n(k2) + lambda_{n+1} P_{n-1}(k1)/P_n(k1).
    """
    return R1System(m, k1, k2).coeffs(n)


def r1_residual(
    m: RecurrenceCoeffs, k1: TransformPoint, k2: TransformPoint, n: int, z: complex
) -> float:
    return R1System(m, k1, k2).residual(n, z)


def r1_general(
    m: RecurrenceCoeffs,
    k1: TransformPoint,
    q: QuasiOrthogonal,
    n: int,
    check: bool = True,
) -> RICoefficients:
    """Unique (alpha_n, beta_n) for an arbitrary order-1 quasi-orthogonal
    T_{n+1} = P_{n+1} + tilde_A P_n; verified at n+2 sample points."""
    if q.order != 1:
        raise ConfigurationError("r1_general needs an order-1 quasi-orthogonal record")
    if q.degree != n + 1:
        raise ConfigurationError(f"quasi-orthogonal degree {q.degree} != n+1 = {n + 1}")
    rho = ratio_sequence(m, k1.kappa, "P", n_terms=n).values
    ratio = m.lam_n(n + 1) / rho[n - 1]
    beta = -ratio
    alpha = m.c_n(n + 1) - q.tilde_A + ratio
    rc = RICoefficients(n=n, alpha=alpha, beta=beta)
    if check:
        for z in sample_points(n + 2):
            p_nm1, p_n, p_np1 = _p_triplet(m, n, z)
            t1 = p_np1 + q.tilde_A * p_n
            t2 = (z - alpha) * p_n
            t3 = beta * (p_n - rho[n - 1] * p_nm1)
            scale = max(abs(t1), abs(t2), abs(t3))
            if scale > 0 and abs(t1 - t2 + t3) / scale > _CHECK_TOL:
                raise ResidualCheckError(
                    f"R_I identity residual {abs(t1 - t2 + t3) / scale:.2e} at n={n}, z={z}"
                )
    return rc


class GeronimusPairQuasi:
    """Conjugate-pair iterated Geronimus transform of a base prefix, exposed
    as order-2 quasi-orthogonal data over the base:

    P^{-**}_{n+1}(kappa, conj kappa, z)
        = P_{n+1}(z) + (A_{n+1} + A'_{n+1}) P_n(z) + A'_{n+1} A_n P_{n-1}(z),

    where A is the A-sequence of the first step (at kappa, Cauchy s0star) and
    A' that of the second (at conj kappa, Cauchy s0starstar).
    """

    def __init__(self, m: RecurrenceCoeffs, kappa: complex):
        kappa = complex(kappa)
        if kappa.imag == 0:
            raise ConfigurationError("conjugate-pair Geronimus needs a nonreal kappa")
        chain = GeronimusChain(m)
        chain.apply(kappa)
        chain.apply(np.conj(kappa))
        self.kappa = kappa
        self.s0star = chain.steps[0]["s0star"]
        self.s0starstar = chain.steps[1]["s0star"]
        self.A = chain.steps[0]["a_seq"]
        self.Ap = chain.steps[1]["a_seq"]
        self.coeffs = chain.coeffs()

    def quasi(self, n: int) -> QuasiOrthogonal:
        return QuasiOrthogonal(
            order=2,
            degree=n + 1,
            tilde_C=self.A[n + 1] + self.Ap[n + 1],
            tilde_D=self.Ap[n + 1] * self.A[n],
        )


def geronimus_pair_quasi(m: RecurrenceCoeffs, kappa: complex, n: int) -> QuasiOrthogonal:
    """Order-2 quasi-orthogonal data of P^{-**}_{n+1}(kappa, conj kappa, .)."""
    return GeronimusPairQuasi(m, kappa).quasi(n)


class R2System:
    """Precomputed data for the R_II relation at a conjugate kernel pair
    (kappa1, conj kappa1)."""

    def __init__(self, m: RecurrenceCoeffs, kappa1: complex, kappa2: complex | None = None):
        kappa1 = complex(kappa1)
        self.m = m
        self.kappa1 = kappa1
        self.kappa1_bar = complex(np.conj(kappa1)) if kappa2 is None else complex(kappa2)
        self.rho = ratio_sequence(m, kappa1, "P").values
        self.tc1 = christoffel(m, TransformPoint(kappa1))
        self.kernel_rho = ratio_sequence(self.tc1.coeffs, self.kappa1_bar, "P").values
        self.tc2 = christoffel_two(
            m, TransformPoint(kappa1), TransformPoint(self.kappa1_bar)
        )

    def coeffs(self, q: QuasiOrthogonal, n: int) -> RIICoefficients:
        if q.order != 2:
            raise ConfigurationError("R_II needs an order-2 quasi-orthogonal record")
        if q.degree != n + 1:
            raise ConfigurationError(f"quasi-orthogonal degree {q.degree} != n+1 = {n + 1}")
        lam_next = self.m.lam_n(n + 1)
        den = self.kernel_rho[n - 1] * self.rho[n - 1] - lam_next
        if abs(den) <= 1e-12 * abs(lam_next):
            raise DegeneracyError(
                f"R_II denominator within tolerance of lambda_{n + 1} at n={n}"
            )
        upsilon = (lam_next - q.tilde_D) / den
        rho_n = 1 + upsilon
        gamma = (
            rho_n * self.m.c_n(n + 1)
            + upsilon * (self.rho[n] + self.kernel_rho[n - 1])
            - q.tilde_C
        )
        return RIICoefficients(n=n, rho=rho_n, gamma=gamma, upsilon=upsilon)

    def residual(self, q: QuasiOrthogonal, rc: RIICoefficients, z: complex) -> float:
        n = rc.n
        p_nm1, p_n, p_np1 = _p_triplet(self.m, n, z)
        t1 = p_np1 + q.tilde_C * p_n + q.tilde_D * p_nm1
        t2 = (rc.rho * z - rc.gamma) * p_n
        t3 = (
            rc.upsilon
            * (z - self.kappa1)
            * (z - self.kappa1_bar)
            * eval_P(self.tc2.coeffs, n - 1, z)
        )
        # the three base values share a hidden scale factor; t3 does not
        scale = max(abs(t1), abs(t2), abs(t3))
        return abs(t1 - t2 + t3) / scale if scale > 0 else 0.0


def r2_coeffs(
    m: RecurrenceCoeffs,
    k1: TransformPoint,
    q: QuasiOrthogonal,
    n: int,
    kappa2: complex | None = None,
    check: bool = False,
) -> RIICoefficients:
    """rho_n, gamma_n, upsilon_n of the R_II relation

    S_{n+1}(z) - (rho_n z - gamma_n) P_n(z)
        + upsilon_n (z - k1)(z - k2) P**_{n-1}(k1, k2, z) = 0,

    with upsilon_n = (lambda_{n+1} - tilde_D) / (r*_n r_n - lambda_{n+1}) and
    rho_n = 1 + upsilon_n; k2 defaults to conj(k1).
    """
    sys = R2System(m, k1.kappa, kappa2)
    rc = sys.coeffs(q, n)
    if check:
        for z in sample_points(n + 3):
            res = sys.residual(q, rc, z)
            if res > _CHECK_TOL:
                raise ResidualCheckError(f"R_II identity residual {res:.2e} at n={n}, z={z}")
    return rc


def r2_residual(
    m: RecurrenceCoeffs,
    k1: TransformPoint,
    q: QuasiOrthogonal,
    rc: RIICoefficients,
    z: complex,
    kappa2: complex | None = None,
) -> float:
    return R2System(m, k1.kappa, kappa2).residual(q, rc, z)


@dataclass(frozen=True)
class VaryingMeasureResult:
    """Output of iterated conjugate-pair Geronimus steps.

    ``step_prefixes[k]`` is the OPS prefix of dmu / prod_{j<=k} |t-kappa_j|^2
    (k = 0 is the base), ``coeffs`` the final prefix; ``rii[j-1]`` holds the
    R_II coefficients linking P_{j+1}, P_j, P_{j-1} of consecutive measures,
    with the verified relative residual alongside.
    """

    kappas: tuple[complex, ...]
    coeffs: RecurrenceCoeffs
    step_prefixes: tuple[RecurrenceCoeffs, ...]
    rii: tuple[RIICoefficients, ...]
    rii_residuals: tuple[float, ...]


def _quad_crosscheck(m: RecurrenceCoeffs, applied: list[complex], value: complex) -> None:
    """Cauchy-transform cross-check against kind-matched quadrature."""
    if m.family is None or m.family.kind == "custom":
        return

    def integrand(t):
        acc = np.ones_like(t, dtype=complex)
        for kap in applied:
            acc = acc / (t - kap)
        return acc

    quad = adaptive_integral(m.family, integrand)
    if abs(quad - value) > 1e-9 * max(1.0, abs(value)):
        raise QuadratureError(
            f"iterated Cauchy transform mismatch: quadrature {quad} vs chain {value}"
        )


def varying_measure_polys(m: RecurrenceCoeffs, kappas, n: int) -> VaryingMeasureResult:
    """Iterated conjugate-pair Geronimus transforms at kappa_1, kappa_2, ...

    Step k maps the current measure nu to nu/|t-kappa_k|^2 via two Geronimus
    applications (at kappa_k then conj kappa_k) whose s0 values are the
    Cauchy transforms of the current measures.  Returns the per-step
    prefixes, the final coefficients, and the diagonal R_II data.
    """
    kappas = [complex(k) for k in kappas]
    for kap in kappas:
        if kap.imag == 0:
            raise ConfigurationError(f"kappa={kap} must be nonreal")
    if not kappas:
        return VaryingMeasureResult(
            kappas=(), coeffs=m, step_prefixes=(m,), rii=(), rii_residuals=()
        )
    chain = GeronimusChain(m)
    prefixes = [m]
    pair_quasis = []
    applied: list[complex] = []
    for k, kap in enumerate(kappas, start=1):
        s0star = chain.cauchy_s0(kap)
        applied_1 = applied + [kap]
        _quad_crosscheck(m, applied_1, complex(s0star))
        chain.apply(kap, s0star)
        kap_bar = complex(np.conj(kap))
        s0starstar = chain.cauchy_s0(kap_bar)
        applied = applied_1 + [kap_bar]
        _quad_crosscheck(m, applied, complex(s0starstar))
        chain.apply(kap_bar, s0starstar)
        prefixes.append(chain.coeffs())
        pair_quasis.append(
            (chain.steps[-2]["a_seq"], chain.steps[-1]["a_seq"])
        )
    final = prefixes[-1]
    if n > final.n_max:
        raise ConfigurationError(
            f"degree {n} exceeds the final prefix length {final.n_max}"
        )
    rii = []
    residuals = []
    zs = sample_points(8)
    for j in range(1, len(kappas)):
        sigma = prefixes[j]
        A, Ap = pair_quasis[j]  # Geronimus pair at kappa_{j+1} applied to sigma
        q = QuasiOrthogonal(
            order=2,
            degree=j + 1,
            tilde_C=A[j + 1] + Ap[j + 1],
            tilde_D=Ap[j + 1] * A[j],
        )
        sys = R2System(sigma, kappas[j - 1])
        rc = sys.coeffs(q, j)
        res = 0.0
        for z in zs:
            t1 = eval_P(prefixes[j + 1], j + 1, z)
            t2 = (rc.rho * z - rc.gamma) * eval_P(sigma, j, z)
            t3 = (
                rc.upsilon
                * (z - kappas[j - 1])
                * (z - np.conj(kappas[j - 1]))
                * eval_P(prefixes[j - 1], j - 1, z)
            )
            scale = max(abs(t1), abs(t2), abs(t3))
            res = max(res, abs(t1 - t2 + t3) / scale if scale > 0 else 0.0)
        rii.append(rc)
        residuals.append(res)
    return VaryingMeasureResult(
        kappas=tuple(kappas),
        coeffs=final,
        step_prefixes=tuple(prefixes),
        rii=tuple(rii),
        rii_residuals=tuple(residuals),
    )


def rational_eval(polys: VaryingMeasureResult, kappas, n: int, t: complex) -> complex:
    """Orthogonal rational function R_n(t) = P_n(t) / prod_{j<=n} (t - kappa_j)."""
    kappas = [complex(k) for k in kappas]
    if tuple(kappas) != polys.kappas[: len(kappas)]:
        raise ConfigurationError("kappas do not match the varying-measure result")
    if n > len(kappas):
        raise ConfigurationError(f"degree {n} needs at least {n} transform points")
    t = complex(t)
    if n == 0:
        return 1.0 + 0.0j
    denom = 1.0 + 0.0j
    for kap in kappas[:n]:
        if abs(t - kap) < 1e-12:
            raise PoleError(f"t={t} is a pole of the rational function")
        denom *= t - kap
    return eval_P(polys.step_prefixes[n], n, t) / denom
